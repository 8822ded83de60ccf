"""Quadratic forms f(x) = x^T Q x.

Midpoint convexity of a quadratic form reduces to a finite test on the
difference z = x - y: the inequality holds for every pair with difference z
iff ``z^T Q z >= 1_J^T Q 1_J`` where J is the set of odd coordinates of z.
Distances 2 and 3 decide global midpoint convexity.

The eigenvalue test is the only floating point code in the package.  It is a
sufficient condition, so it answers ``"yes"`` or ``"inconclusive"`` and never
``"no"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import shell

Matrix = list[list[Fraction]]

YES = "yes"
INCONCLUSIVE = "inconclusive"

EIG_TOL = 1e-12
EIG_MARGIN = 1e-11


def as_matrix(Q: Sequence[Sequence]) -> Matrix:
    from .lattice import parse_rational
    M = [[parse_rational(v) if not isinstance(v, (int, Fraction)) else Fraction(v) for v in row]
         for row in Q]
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise ValueError("Q must be a nonempty square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                raise ValueError(f"Q is not symmetric: Q[{i}][{j}] != Q[{j}][{i}]")
    return M


def quad_form(M: Matrix, z: Sequence[int]) -> Fraction:
    n = len(M)
    return sum((M[i][j] * z[i] * z[j] for i in range(n) for j in range(n)), Fraction(0))


@dataclass(frozen=True)
class QuadReport:
    lnat: bool
    locally_dmc: bool
    globally_dmc: bool
    eigen_sufficient: str
    diag_dominant: bool

    def to_json(self) -> dict:
        return {"lnat": self.lnat, "locally_dmc": self.locally_dmc,
                "globally_dmc": self.globally_dmc,
                "eigen_sufficient": self.eigen_sufficient,
                "diag_dominant": self.diag_dominant}


def difference_ok(M: Matrix, z: Sequence[int]) -> bool:
    """Does the midpoint inequality hold for all pairs with x - y = z?"""
    odd = [abs(c) % 2 for c in z]
    return quad_form(M, z) >= quad_form(M, odd)


def _shell_ok(M: Matrix, k: int) -> bool:
    for z in shell(len(M), k):
        # z and -z give the same test; keep the one whose first nonzero entry is positive
        if next(c for c in z if c) < 0:
            continue
        if not difference_ok(M, z):
            return False
    return True


def diag_dominant(M: Matrix) -> bool:
    n = len(M)
    return all(M[i][i] >= sum(abs(M[i][j]) for j in range(n) if j != i) for i in range(n))


def quad_classify(Q: Sequence[Sequence]) -> QuadReport:
    M = as_matrix(Q)
    n = len(M)
    dd = diag_dominant(M)
    lnat = dd and all(M[i][j] <= 0 for i in range(n) for j in range(n) if i != j)
    local = _shell_ok(M, 2)
    glob = local and _shell_ok(M, 3)
    return QuadReport(lnat, local, glob, quad_eigen_sufficient(M), dd)


def quad_2d_closed_form(Q: Sequence[Sequence]) -> tuple[bool, bool]:
    M = as_matrix(Q)
    if len(M) != 2:
        raise ValueError("closed form applies to 2x2 matrices only")
    q11, q12, q22 = M[0][0], M[0][1], M[1][1]
    local = q11 >= abs(q12) and q22 >= abs(q12)
    return local, local and q11 + q22 >= Fraction(5, 2) * q12


# --------------------------------------------------------------------------
# eigenvalues


def jacobi_eigenvalues(Q: Sequence[Sequence], tol: float = EIG_TOL,
                       max_sweeps: int = 100) -> list[float]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = [[float(v) for v in row] for row in Q]
    n = len(a)
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
        scale = math.sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n)))
        if off <= tol * max(scale, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p][q] == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * a[p][q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return sorted(a[i][i] for i in range(n))


def quad_eigen_sufficient(Q: Sequence[Sequence]) -> str:
    """``"yes"`` when lambda_min >= (n-1)/(n+3) * lambda_max with a safety margin."""
    M = as_matrix(Q)
    n = len(M)
    eig = jacobi_eigenvalues(M)
    lo, hi = eig[0], eig[-1]
    gap = lo - (n - 1) / (n + 3) * hi
    scale = max(abs(lo), abs(hi), 1.0)
    return YES if gap >= EIG_MARGIN * scale else INCONCLUSIVE


def quad_row_sum_sufficient(alpha, R: Sequence[Sequence]) -> bool:
    """Exact test that alpha (I + R) is globally midpoint convex.

    R must be positive semidefinite (checked numerically) and its largest
    absolute row sum, diagonal included, at most 4/(n-1).
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    M = as_matrix(R)
    n = len(M)
    if n < 2:
        raise ValueError("the row-sum test needs n >= 2")
    eig = jacobi_eigenvalues(M)
    if eig[0] < -1e-9 * max(1.0, abs(eig[-1])):
        raise ValueError("R is not positive semidefinite")
    bound = Fraction(4, n - 1)
    return all(sum(abs(v) for v in row) <= bound for row in M)
