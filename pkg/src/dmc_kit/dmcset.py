"""Discrete midpoint convex sets and the decomposition of difference vectors.

A difference vector v = y - x is split into {-1,0,+1} vectors in three
stages.  ``d0`` halves recursively, ``d1`` merges the extra pair created at
critical vectors so the count becomes ||v||_inf, and ``d2`` untwists
incomparable pairs until the vectors form a chain.  The chain always equals
the canonical step chain of ``step_decompose``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .classify import Verdict, Witness, is_dmc_set
from .lattice import (
    INF,
    Box,
    Point,
    add,
    ceil_half,
    chain_partial_sum,
    comparable,
    floor_half,
    leq,
    linf_norm,
    step_decompose,
    sub,
)


# --------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class PointSet:
    members: frozenset
    dim: int

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], dim: int | None = None) -> "PointSet":
        pts = frozenset(tuple(int(c) for c in p) for p in points)
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise ValueError("points of mixed dimension")
        if dims:
            (d,) = dims
            if dim is not None and dim != d:
                raise ValueError(f"declared dimension {dim} but points have dimension {d}")
            dim = d
        if dim is None:
            raise ValueError("dimension of an empty set must be given")
        return cls(pts, dim)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def box(self) -> Box:
        return Box.bounding(self.members)

    def intersect(self, other: "PointSet") -> "PointSet":
        return PointSet(self.members & other.members, self.dim)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in sorted(self.members)]}

    @classmethod
    def from_json(cls, doc: dict) -> "PointSet":
        from .funcs import DocumentError
        try:
            return cls.of(doc["points"], doc.get("dim"))
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad point set document: {exc}") from None


def check_dmc_set(S: PointSet) -> Verdict:
    return is_dmc_set(S.members)


def scale_set(S: PointSet, alpha: int) -> PointSet:
    """{x : alpha x in S}."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    pts = [tuple(c // alpha for c in p) for p in S.members if all(c % alpha == 0 for c in p)]
    return PointSet(frozenset(pts), S.dim)


def parallelogram_points(S: PointSet, x: Point, y: Point, J: Iterable[int],
                         check: bool = True) -> tuple[Point, Point]:
    """(x + d, y - d) with d the J-partial sum of the step chain of y - x."""
    x, y = tuple(x), tuple(y)
    if x not in S or y not in S:
        raise ValueError("x and y must belong to S")
    if x == y:
        raise ValueError("x and y must differ")
    d = chain_partial_sum(step_decompose(sub(y, x)), J)
    p, q = add(x, d), sub(y, d)
    if check and check_dmc_set(S) and (p not in S or q not in S):
        raise AssertionError(f"midpoint convex set misses {p if p not in S else q}")
    return p, q


# --------------------------------------------------------------------------
# decompositions


def critical_check(v: Sequence[int]) -> bool:
    """||v|| >= 3, odd, and the largest positive and negative entries balance."""
    m = linf_norm(v)
    pos = max([0, *v])
    negm = max([0, *(-c for c in v)])
    return m >= 3 and m % 2 == 1 and pos == negm


def _require_nonzero(v: Sequence[int]) -> Point:
    v = tuple(int(c) for c in v)
    if not any(v):
        raise ValueError("cannot decompose the zero vector")
    return v


def _d0(v: Point) -> list[Point]:
    m = linf_norm(v)
    if m == 0:
        return []
    if m == 1:
        return [v]
    if m == 2:
        return [ceil_half(v), floor_half(v)]
    return _d0(ceil_half(v)) + _d0(floor_half(v))


def d_plus(v: Point) -> Point:
    """Leftmost leaf below v in the halving tree."""
    while linf_norm(v) >= 2:
        v = ceil_half(v)
    return v


def d_minus(v: Point) -> Point:
    """Rightmost leaf below v in the halving tree."""
    while linf_norm(v) >= 2:
        v = floor_half(v)
    return v


def _remove_one(items: list[Point], d: Point) -> list[Point]:
    out = list(items)
    out.remove(d)
    return out


def _d1(v: Point) -> list[Point]:
    m = linf_norm(v)
    if m <= 2 or not critical_check(v):
        if m <= 2:
            return _d0(v)
        return _d1(ceil_half(v)) + _d1(floor_half(v))
    dp, dm = d_plus(v), d_minus(v)
    return (_remove_one(_d1(ceil_half(v)), dp) + _remove_one(_d1(floor_half(v)), dm)
            + [add(dp, dm)])


def _d1_from_tree(v: Point) -> list[Point]:
    """Same multiset built from the explicit halving tree."""
    leaves: Counter = Counter(_d0(v))
    stack = [v]
    while stack:
        y = stack.pop()
        if linf_norm(y) < 3:
            continue
        if critical_check(y):
            dp, dm = d_plus(y), d_minus(y)
            leaves[dp] -= 1
            leaves[dm] -= 1
            leaves[add(dp, dm)] += 1
        stack += [ceil_half(y), floor_half(y)]
    if any(c < 0 for c in leaves.values()):
        raise AssertionError("tree form removed a leaf that is not there")
    return list(leaves.elements())


@dataclass(frozen=True)
class Twist:
    first: Point
    second: Point
    up: Point
    down: Point

    def to_json(self) -> dict:
        return {"pair": [list(self.first), list(self.second)],
                "result": [list(self.up), list(self.down)]}


@dataclass(frozen=True)
class Decomposition:
    v: Point
    stage: str
    vectors: tuple[Point, ...]
    twists: tuple[Twist, ...] = field(default=())

    def conditions(self) -> dict[str, bool]:
        return check_conditions(self.v, self.vectors)

    def required(self) -> tuple[str, ...]:
        return {"d0": ("C1", "C2", "C3", "C4"),
                "d1": ("C1", "C2", "C3", "C4", "C5"),
                "d2": ("C1", "C2", "C3", "C4", "C5", "C6"),
                "steps": ("C1", "C2", "C3", "C4", "C5", "C6")}[self.stage]

    def validate(self) -> None:
        conds = self.conditions()
        bad = [c for c in self.required() if not conds[c]]
        if bad:
            raise AssertionError(f"{self.stage} decomposition of {self.v} violates {', '.join(bad)}")

    def to_json(self) -> dict:
        return {"stage": self.stage, "vector": list(self.v),
                "vectors": [list(d) for d in self.vectors],
                "twists": [t.to_json() for t in self.twists]}


def _sorted(vectors: Iterable[Point]) -> tuple[Point, ...]:
    return tuple(sorted(vectors))


def d0_decompose(v: Sequence[int]) -> Decomposition:
    v = _require_nonzero(v)
    return Decomposition(v, "d0", _sorted(_d0(v)))


def d1_decompose(v: Sequence[int], cross_check: bool = False) -> Decomposition:
    v = _require_nonzero(v)
    vectors = _sorted(_d1(v))
    if cross_check and vectors != _sorted(_d1_from_tree(v)):
        raise AssertionError(f"recursive and tree forms of d1 disagree at {v}")
    return Decomposition(v, "d1", vectors)


def _first_incomparable(vectors: Sequence[Point]) -> tuple[int, int] | None:
    for i, j in itertools.combinations(range(len(vectors)), 2):
        if not comparable(vectors[i], vectors[j]):
            return i, j
    return None


def d2_decompose(v: Sequence[int]) -> Decomposition:
    v = _require_nonzero(v)
    vectors = list(_sorted(_d1(v)))
    trace = []
    while (pair := _first_incomparable(vectors)) is not None:
        i, j = pair
        a, b = vectors[i], vectors[j]
        s = add(a, b)
        up, down = ceil_half(s), floor_half(s)
        trace.append(Twist(a, b, up, down))
        vectors = sorted([w for k, w in enumerate(vectors) if k not in (i, j)] + [up, down])
    return Decomposition(v, "d2", tuple(vectors), tuple(trace))


def steps_decompose(v: Sequence[int]) -> Decomposition:
    v = _require_nonzero(v)
    return Decomposition(v, "steps", _sorted(step_decompose(v).steps()))


def _supp(d: Point, sign: int) -> frozenset:
    return frozenset(i for i, c in enumerate(d) if c * sign > 0)


def _is_chain(sets: Iterable[frozenset]) -> bool:
    ordered = sorted(set(sets), key=len)
    return all(a <= b for a, b in zip(ordered, ordered[1:]))


def check_conditions(v: Sequence[int], vectors: Sequence[Point]) -> dict[str, bool]:
    """Conditions C1 to C6 for a decomposition of v."""
    v = tuple(v)
    vectors = [tuple(d) for d in vectors]
    total = tuple(map(sum, zip(*vectors))) if vectors else (0,) * len(v)
    return {
        "C1": all(all(c in (-1, 0, 1) for c in d) and any(d) for d in vectors),
        "C2": total == v,
        "C3": all(_supp(d, 1) <= _supp(v, 1) and _supp(d, -1) <= _supp(v, -1) for d in vectors),
        "C4": _is_chain(_supp(d, 1) for d in vectors) and _is_chain(_supp(d, -1) for d in vectors),
        "C5": len(vectors) == linf_norm(v),
        "C6": all(leq(a, b) for a, b in zip(sorted(vectors, key=sum), sorted(vectors, key=sum)[1:])),
    }


# --------------------------------------------------------------------------
# membership of all partial sums


def set_membership_sweep(S: PointSet, x: Point, y: Point, certified: bool = False) -> Verdict:
    """x + (sum of any sub-multiset of d2(y - x)) must stay in S."""
    x, y = tuple(x), tuple(y)
    if x not in S or y not in S:
        raise ValueError("x and y must belong to S")
    if not certified and not check_dmc_set(S):
        raise ValueError("S is not a discrete midpoint convex set")
    if x == y:
        return Verdict(True, None, 1)
    vectors = d2_decompose(sub(y, x)).vectors
    count = 0
    for mask in itertools.product((0, 1), repeat=len(vectors)):
        p = x
        for bit, d in zip(mask, vectors):
            if bit:
                p = add(p, d)
        count += 1
        if p not in S:
            return Verdict(False, Witness(x, p, 0, INF), count)
    return Verdict(True, None, count)
