"""Exact lattice primitives.

Points of Z^n are plain tuples of ints, rational points are tuples of
``Fraction``.  Function values live in Q ∪ {+inf}: finite values are ``int``
or ``Fraction`` and +inf is the float ``INF``.  No floating point arithmetic
is ever performed on finite values.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Point = tuple[int, ...]
RationalPoint = tuple[Fraction, ...]
ExtValue = Union[int, Fraction, float]

INF = math.inf


class DmcError(Exception):
    """Base class for errors raised by dmc_kit."""


class DimensionError(DmcError, ValueError):
    pass


class ExtArithmeticError(DmcError, ArithmeticError):
    pass


# --------------------------------------------------------------------------
# extended values


def is_inf(v: ExtValue) -> bool:
    return isinstance(v, float) and v == INF


def is_finite(v: ExtValue) -> bool:
    return not is_inf(v)


def ext_add(a: ExtValue, b: ExtValue) -> ExtValue:
    if is_inf(a) or is_inf(b):
        return INF
    return a + b


def ext_sub(a: ExtValue, b: ExtValue) -> ExtValue:
    """``a - b`` where ``b`` must be finite unless ``a`` is finite too."""
    if is_inf(b):
        if is_inf(a):
            raise ExtArithmeticError("(+inf) - (+inf) is undefined")
        return -INF
    if is_inf(a):
        return INF
    return a - b


def ext_scale(a: ExtValue, w: Fraction | int) -> ExtValue:
    """Nonnegative multiple; ``0 * inf`` is ``inf`` (the domain is kept)."""
    if w < 0:
        raise ValueError("weight must be nonnegative")
    if is_inf(a):
        return INF
    return w * a


_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rational(lit) -> Fraction:
    """Parse an integer or a ``"p/q"`` string; decimal floats are rejected."""
    if isinstance(lit, bool):
        raise ValueError(f"not a rational literal: {lit!r}")
    if isinstance(lit, int):
        return Fraction(lit)
    if isinstance(lit, Fraction):
        return lit
    if isinstance(lit, str) and _RATIONAL_RE.match(lit):
        return Fraction(lit.replace(" ", ""))
    raise ValueError(f"not a rational literal: {lit!r}")


def parse_ext(lit) -> ExtValue:
    if isinstance(lit, str) and lit.strip().lower() in ("inf", "+inf"):
        return INF
    return parse_rational(lit)


def format_ext(v: ExtValue) -> str:
    if is_inf(v):
        return "inf"
    if v == -INF:
        return "-inf"
    return str(Fraction(v))


# --------------------------------------------------------------------------
# points


def _check_dims(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionError(f"dimension mismatch: {len(x)} != {len(y)}")


def add(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a - b for a, b in zip(x, y))


def neg(x: Point) -> Point:
    return tuple(-a for a in x)


def smul(k: int, x: Point) -> Point:
    return tuple(k * a for a in x)


def linf_norm(x: Sequence[int]) -> int:
    return max((abs(a) for a in x), default=0)


def linf_distance(x: Point, y: Point) -> int:
    _check_dims(x, y)
    return max((abs(a - b) for a, b in zip(x, y)), default=0)


def leq(x: Point, y: Point) -> bool:
    """Componentwise order."""
    return all(a <= b for a, b in zip(x, y))


def comparable(x: Point, y: Point) -> bool:
    return leq(x, y) or leq(y, x)


def ceil_half(x: Point) -> Point:
    return tuple(-((-a) // 2) for a in x)


def floor_half(x: Point) -> Point:
    return tuple(a // 2 for a in x)


def midpoint_round(x: Point, y: Point) -> tuple[Point, Point]:
    """Return ``(ceil((x+y)/2), floor((x+y)/2))``."""
    s = add(x, y)
    return ceil_half(s), floor_half(s)


def midpoint(x: Point, y: Point) -> RationalPoint:
    _check_dims(x, y)
    return tuple(Fraction(a + b, 2) for a, b in zip(x, y))


def indicator_vector(n: int, idx: Iterable[int]) -> Point:
    """0/1 vector of the 1-based index set ``idx``."""
    s = set(idx)
    return tuple(1 if i + 1 in s else 0 for i in range(n))


def integer_neighborhood(x: Sequence) -> list[Point]:
    """All z in Z^n with |x_i - z_i| < 1 for every i, in lexicographic order."""
    choices = []
    for c in x:
        c = Fraction(c)
        if c.denominator == 1:
            choices.append((int(c),))
        else:
            fl = math.floor(c)
            choices.append((fl, fl + 1))
    return [tuple(z) for z in itertools.product(*choices)]


# --------------------------------------------------------------------------
# boxes


@dataclass(frozen=True)
class Box:
    lo: Point
    hi: Point

    def __post_init__(self):
        lo, hi = tuple(int(a) for a in self.lo), tuple(int(a) for a in self.hi)
        _check_dims(lo, hi)
        if not lo:
            raise DimensionError("a box needs dimension >= 1")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"empty box: lo={lo} hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, n: int, lo: int, hi: int) -> "Box":
        return cls((lo,) * n, (hi,) * n)

    @classmethod
    def bounding(cls, points: Iterable[Point]) -> "Box":
        pts = list(points)
        if not pts:
            raise ValueError("cannot bound an empty point set")
        n = len(pts[0])
        return cls(tuple(min(p[i] for p in pts) for i in range(n)),
                   tuple(max(p[i] for p in pts) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def size(self) -> int:
        return math.prod(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def diameter(self) -> int:
        return max(b - a for a, b in zip(self.lo, self.hi))

    def __contains__(self, x) -> bool:
        return len(x) == self.dim and all(
            a <= c <= b for a, c, b in zip(self.lo, x, self.hi))

    def points(self) -> Iterator[Point]:
        """Lattice points in lexicographic order."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def intersect(self, other: "Box") -> "Box | None":
        _check_dims(self.lo, other.lo)
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def center_key(self, x: Point) -> tuple:
        """Sort key: l-inf distance from the box center, then lexicographic."""
        d = max(abs(2 * c - a - b) for a, c, b in zip(self.lo, x, self.hi))
        return (d, x)

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_json(cls, doc: dict) -> "Box":
        return cls(tuple(doc["lo"]), tuple(doc["hi"]))

    def __str__(self) -> str:
        return ",".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))


def parse_box(text: str) -> Box:
    """Parse ``lo1..hi1,lo2..hi2,...``."""
    lo, hi = [], []
    for part in text.split(","):
        m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", part)
        if not m:
            raise ValueError(f"bad box component {part!r}; expected lo..hi")
        lo.append(int(m.group(1)))
        hi.append(int(m.group(2)))
    return Box(tuple(lo), tuple(hi))


def parse_point(text: str) -> Point:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ValueError(f"bad integer vector {text!r}") from None


def linf_ball(center: Point, radius: int) -> Box:
    return Box(tuple(c - radius for c in center), tuple(c + radius for c in center))


def directions(n: int) -> Iterator[Point]:
    """Nonzero vectors of {-1,0,+1}^n in lexicographic order."""
    for d in itertools.product((-1, 0, 1), repeat=n):
        if any(d):
            yield d


def shell(n: int, k: int) -> Iterator[Point]:
    """Vectors with l-inf norm exactly k, lexicographic order."""
    for d in itertools.product(range(-k, k + 1), repeat=n):
        if linf_norm(d) == k:
            yield d


# --------------------------------------------------------------------------
# step chains


@dataclass(frozen=True)
class StepChain:
    """Nested decomposition ``v = sum_k (1_{A_k} - 1_{B_k})`` with 1-based index sets."""

    n: int
    A: tuple[frozenset[int], ...]
    B: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.A) != len(self.B):
            raise ValueError("A and B must have the same length")
        self.validate()

    @property
    def m(self) -> int:
        return len(self.A)

    def validate(self) -> None:
        m = self.m
        if m == 0:
            raise ValueError("empty chain")
        for S in self.A + self.B:
            if any(not 1 <= i <= self.n for i in S):
                raise ValueError(f"index out of range in {sorted(S)}")
        for k in range(m - 1):
            if not self.A[k] <= self.A[k + 1]:
                raise ValueError("A_k must be increasing")
            if not self.B[k] >= self.B[k + 1]:
                raise ValueError("B_k must be decreasing")
        if self.A[-1] & self.B[0]:
            raise ValueError("A_m and B_1 must be disjoint")
        if not (self.A[0] | self.B[-1]):
            raise ValueError("A_1 and B_m cannot both be empty")

    def step(self, k: int) -> Point:
        """The k-th step vector (1-based)."""
        a, b = self.A[k - 1], self.B[k - 1]
        return tuple((1 if i + 1 in a else 0) - (1 if i + 1 in b else 0) for i in range(self.n))

    def steps(self) -> list[Point]:
        return [self.step(k) for k in range(1, self.m + 1)]

    def reconstruct(self) -> Point:
        return chain_partial_sum(self, range(1, self.m + 1))


def step_decompose(v: Point) -> StepChain:
    """Canonical chain with A_k = {i : v_i >= m+1-k}, B_k = {i : v_i <= -k}."""
    m = linf_norm(v)
    if m == 0:
        raise ValueError("cannot decompose the zero vector")
    A = tuple(frozenset(i + 1 for i, a in enumerate(v) if a >= m + 1 - k) for k in range(1, m + 1))
    B = tuple(frozenset(i + 1 for i, a in enumerate(v) if a <= -k) for k in range(1, m + 1))
    return StepChain(len(v), A, B)


def chain_partial_sum(c: StepChain, J: Iterable[int]) -> Point:
    total = [0] * c.n
    for k in set(J):
        if not 1 <= k <= c.m:
            raise IndexError(f"step index {k} outside 1..{c.m}")
        for i, s in enumerate(c.step(k)):
            total[i] += s
    return tuple(total)
