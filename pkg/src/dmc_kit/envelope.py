"""Local convex envelope over the integer neighborhood N(x)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .lattice import (
    INF,
    ExtValue,
    Point,
    ext_add,
    ext_sub,
    integer_neighborhood,
    is_inf,
    midpoint,
)
from .lp import OPTIMAL, solve_lp


@dataclass(frozen=True)
class EnvelopeResult:
    value: ExtValue
    certificate: dict[Point, Fraction] = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return not is_inf(self.value)


def envelope_from_values(x: Sequence, values: dict[Point, ExtValue]) -> EnvelopeResult:
    """Envelope at ``x`` given the values of f on N(x) (missing keys mean +inf)."""
    x = tuple(Fraction(c) for c in x)
    cols = [z for z in integer_neighborhood(x) if not is_inf(values.get(z, INF))]
    if not cols:
        return EnvelopeResult(INF)
    if len(cols) == 1:
        (z,) = cols
        if all(a == b for a, b in zip(z, x)):
            return EnvelopeResult(values[z], {z: Fraction(1)})
        return EnvelopeResult(INF)
    # only coordinates with a fractional part give nontrivial rows
    frac = [i for i, c in enumerate(x) if c.denominator != 1]
    A = [[1] * len(cols)] + [[z[i] for z in cols] for i in frac]
    b = [1] + [x[i] for i in frac]
    res = solve_lp([values[z] for z in cols], A, b)
    if res.status != OPTIMAL:
        return EnvelopeResult(INF)
    cert = {z: lam for z, lam in zip(cols, res.x) if lam != 0}
    return EnvelopeResult(res.value, cert)


def envelope_value(f: Callable[[Point], ExtValue], x: Sequence) -> EnvelopeResult:
    """Minimum of sum lambda_z f(z) over convex combinations of N(x) hitting x."""
    x = tuple(Fraction(c) for c in x)
    values = {z: f(z) for z in integer_neighborhood(x)}
    return envelope_from_values(x, values)


def weak_midpoint_gap(f: Callable[[Point], ExtValue], x: Point, y: Point) -> ExtValue:
    """f(x) + f(y) - 2 f~((x+y)/2); +inf when x or y lies outside dom f.

    A result of ``-inf`` means the midpoint is outside the local hull of dom f,
    i.e. the weak inequality fails.
    """
    fx, fy = f(x), f(y)
    if is_inf(fx) or is_inf(fy):
        return INF
    env = envelope_value(f, midpoint(x, y))
    if is_inf(env.value):
        return -INF
    return ext_sub(ext_add(fx, fy), 2 * env.value)
