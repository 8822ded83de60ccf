"""Random instances for property tests.

Every generator that promises a class member certifies it with the exact
checker before returning, so a generator bug cannot silently weaken a test.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .classify import is_dmc_set, is_globally_dmc
from .funcs import TableFn
from .lattice import INF, Box, Point, is_inf

PAIR_COUPLINGS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(4, 5))


def random_box(rng: random.Random, n: int, max_side: int, lo_range: int = 3) -> Box:
    lo = tuple(rng.randint(-lo_range, 0) for _ in range(n))
    hi = tuple(a + rng.randint(0, max_side - 1) for a in lo)
    return Box(lo, hi)


def random_dmc_set(rng: random.Random, box: Box, tries: int = 25) -> set[Point]:
    """Start from the full box, then delete random points while the set stays midpoint convex."""
    members = set(box.points())
    for _ in range(tries):
        if len(members) <= 1:
            break
        p = rng.choice(sorted(members))
        members.discard(p)
        if not is_dmc_set(members):
            members.add(p)
    return members


def _convex_sequence(rng: random.Random, length: int) -> list[int]:
    slopes = sorted(rng.randint(-4, 4) for _ in range(max(length - 1, 0)))
    vals = [rng.randint(-3, 3)]
    for s in slopes:
        vals.append(vals[-1] + s)
    return vals


def _dmc_terms(rng: random.Random, box: Box):
    """Callables on points, each globally midpoint convex on Z^n."""
    n = box.dim
    terms = []
    for i in range(n):
        if rng.random() < 0.7:
            seq = _convex_sequence(rng, box.hi[i] - box.lo[i] + 1)
            lo = box.lo[i]
            terms.append(lambda x, i=i, seq=seq, lo=lo: seq[x[i] - lo])
    for i in range(n):
        for j in range(i + 1, n):
            r = rng.random()
            w = rng.randint(1, 3)
            if r < 0.3:
                b = rng.randint(-2, 2)
                terms.append(lambda x, i=i, j=j, w=w, b=b: w * abs(x[i] - x[j] - b))
            elif r < 0.5:
                terms.append(lambda x, i=i, j=j, w=w: w * max(x[i], x[j]))
    if rng.random() < 0.6:
        Q = random_dmc_quadratic(rng, n)
        terms.append(lambda x, Q=Q: sum(Q[a][b] * x[a] * x[b] for a in range(n) for b in range(n)))
    return terms


def random_dmc_quadratic(rng: random.Random, n: int) -> list[list[Fraction]]:
    """A full-dimensional Q whose form is globally midpoint convex.

    Coupling terms are not added pairwise: a planar form that is midpoint
    convex but not submodular loses the property once unused coordinates are
    added, because a far pair can project to an adjacent one.
    """
    from .quadratic import quad_classify
    while True:
        Q = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            Q[a][a] = Fraction(rng.randint(2, 5))
            for b in range(a + 1, n):
                Q[a][b] = Q[b][a] = rng.choice(PAIR_COUPLINGS) * rng.randint(1, 2)
        if quad_classify(Q).globally_dmc:
            return Q


def random_dmc_table(rng: random.Random, n: int, max_side: int = 7,
                     partial: float = 0.3, certify: bool = True) -> TableFn:
    """A globally midpoint convex table function, certified by the checker."""
    box = random_box(rng, n, max_side)
    terms = _dmc_terms(rng, box)
    dom = random_dmc_set(rng, box) if rng.random() < partial else None
    values = {}
    for p in box.points():
        if dom is not None and p not in dom:
            values[p] = INF
        else:
            values[p] = sum((t(p) for t in terms), Fraction(0))
    f = TableFn(box, values)
    if certify:
        v = is_globally_dmc(f, box)
        if not v:
            raise AssertionError(f"generator produced a non-DMC table: {v.witness}")
    return f


def random_mixed_table(rng: random.Random, n: int, max_side: int = 5) -> TableFn:
    """Midpoint convex, perturbed, or arbitrary values on full or partial domains."""
    kind = rng.choice(("dmc", "perturbed", "random"))
    if kind == "dmc":
        return random_dmc_table(rng, n, max_side, partial=0.5, certify=False)
    box = random_box(rng, n, max_side)
    if kind == "perturbed":
        base = random_dmc_table(rng, n, max_side, partial=0.5, certify=False)
        box = base.box
        values = dict(base.values)
        for _ in range(rng.randint(1, 3)):
            p = rng.choice(sorted(values))
            if not is_inf(values[p]):
                values[p] += rng.choice((-2, -1, 1, 2))
        return TableFn(box, values)
    mode = rng.choice(("full", "dmcset", "subset"))
    points = list(box.points())
    if mode == "full":
        dom = set(points)
    elif mode == "dmcset":
        dom = random_dmc_set(rng, box)
    else:
        dom = {p for p in points if rng.random() < 0.7} or {points[0]}
    values = {p: (rng.randint(-5, 5) if p in dom else INF) for p in points}
    return TableFn(box, values)
