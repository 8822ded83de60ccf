"""Naive reference implementations used as test oracles.

These share no code with the package beyond the value types: every pair is
visited in both orders, roundings are computed with ``math.floor`` /
``math.ceil`` on Fractions, and the envelope is found by enumerating basic
solutions instead of running a simplex.
"""

import itertools
import math
from fractions import Fraction

INF = math.inf


def rounds(x, y):
    m = [Fraction(a + b, 2) for a, b in zip(x, y)]
    return tuple(math.ceil(c) for c in m), tuple(math.floor(c) for c in m)


def dist(x, y):
    return max(abs(a - b) for a, b in zip(x, y))


def table(f, box):
    return {p: f(p) for p in box.points()}


def violations(values, test_dist):
    """Ordered pairs of finite points violating the midpoint inequality."""
    dom = [p for p, v in values.items() if v != INF]
    bad = []
    for x in dom:
        for y in dom:
            if x == y or not test_dist(dist(x, y)):
                continue
            up, down = rounds(x, y)
            fu, fd = values.get(up, INF), values.get(down, INF)
            rhs = INF if INF in (fu, fd) else fu + fd
            if values[x] + values[y] < rhs:
                bad.append((x, y))
    return bad


def dmc_holds(values, k, at_least=False):
    return not violations(values, (lambda d: d >= k) if at_least else (lambda d: d == k))


def submodular_holds(values):
    dom = [p for p, v in values.items() if v != INF]
    for x in dom:
        for y in dom:
            if dist(x, y) != 1:
                continue
            j = tuple(map(max, x, y))
            m = tuple(map(min, x, y))
            fj, fm = values.get(j, INF), values.get(m, INF)
            if INF not in (fj, fm) and values[x] + values[y] < fj + fm:
                return False
            if INF in (fj, fm):
                return False
    return True


def dmc_set_holds(points):
    S = set(points)
    return all(set(rounds(x, y)) <= S for x in S for y in S if dist(x, y) >= 2)


def _solve(A, b):
    """Unique solution of a square system over Fractions, or None."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * p for a, p in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def envelope(values, x):
    """min sum l_z f(z) over convex combinations of N(x) equal to x, by basic solutions."""
    x = [Fraction(c) for c in x]
    choices = [(int(c),) if c.denominator == 1 else (math.floor(c), math.floor(c) + 1) for c in x]
    cols = [z for z in itertools.product(*choices) if values.get(z, INF) != INF]
    rows = [[1] * len(cols)] + [[z[i] for z in cols] for i in range(len(x))]
    rhs = [1] + x
    best = INF
    # a basic solution uses at most rank-many columns; try every subset and every row subset
    for size in range(1, min(len(cols), len(rows)) + 1):
        for cs in itertools.combinations(range(len(cols)), size):
            for rs in itertools.combinations(range(len(rows)), size):
                sol = _solve([[rows[r][c] for c in cs] for r in rs], [rhs[r] for r in rs])
                if sol is None or any(l < 0 for l in sol):
                    continue
                lam = dict(zip(cs, sol))
                ok = all(sum(rows[r][c] * lam.get(c, 0) for c in range(len(cols))) == rhs[r]
                         for r in range(len(rows)))
                if ok:
                    best = min(best, sum(values[cols[c]] * l for c, l in lam.items()))
    return best


def weak_holds(values):
    dom = [p for p, v in values.items() if v != INF]
    for x in dom:
        for y in dom:
            if dist(x, y) >= 2:
                env = envelope(values, [Fraction(a + b, 2) for a, b in zip(x, y)])
                if env == INF or values[x] + values[y] < 2 * env:
                    return False
    return True


def argmin(values):
    m = min(v for v in values.values() if v != INF)
    return m, sorted(p for p, v in values.items() if v == m)
