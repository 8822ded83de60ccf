"""Dense two-phase primal simplex over ``Fraction``.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  Bland's rule is used for both the
entering and the leaving variable, so the method terminates without any
perturbation.  Intended for the tiny programs that show up when convexifying a
function over an integer neighborhood (at most 2^n columns, n+1 rows).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    row = T[r]
    if piv != 1:
        T[r] = row = [v / piv for v in row]
    for i, other in enumerate(T):
        if i != r and other[c] != 0:
            f = other[c]
            T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(T, basis, m, ncols, allowed) -> str:
    """Iterate on tableau T whose last row is the reduced-cost row."""
    obj = T[m]
    while True:
        obj = T[m]
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, basis, best[1], enter)


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(A)
    n = len(c)
    c = [Fraction(v) for v in c]
    rows = []
    rhs = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        if len(row) != n:
            raise ValueError("row length does not match the cost vector")
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)
    if n == 0:
        return LPResult(OPTIMAL, Fraction(0), ()) if all(v == 0 for v in rhs) else LPResult(INFEASIBLE)

    # phase 1: artificials n..n+m-1
    ncols = n + m
    T = []
    for i in range(m):
        T.append(rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]])
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        for j in range(n):
            phase1[j] -= T[i][j]
        phase1[-1] -= T[i][-1]
    T.append(phase1)
    _run(T, basis, m, ncols, [True] * ncols)
    if T[m][-1] != 0:
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; drop redundant rows
    r = 0
    while r < len(basis):
        if basis[r] >= n:
            col = next((j for j in range(n) if T[r][j] != 0), None)
            if col is None:
                del T[r]
                del basis[r]
                continue
            _pivot(T, basis, r, col)
        r += 1
    m = len(basis)
    T = [row[:n] + [row[-1]] for row in T[:m]]

    # phase 2
    obj = c[:] + [Fraction(0)]
    for i in range(m):
        cb = c[basis[i]]
        if cb != 0:
            obj = [a - cb * t for a, t in zip(obj, T[i])]
    T.append(obj)
    status = _run(T, basis, m, n, [True] * n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i in range(m):
        x[basis[i]] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))
