"""Minimization of midpoint convex functions.

Ties between equal values are always broken by the lexicographically
smallest point, so traces are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .classify import Verdict, Witness
from .lattice import (
    INF,
    Box,
    ExtValue,
    Point,
    add,
    directions,
    format_ext,
    is_inf,
    linf_ball,
    linf_distance,
    smul,
)

Oracle = Callable[[Point], ExtValue]

MINIMIZER_FOUND = "minimizer found"
BUDGET = "budget"


class _Memo:
    """Caches values of f; ``misses`` counts distinct evaluations."""

    def __init__(self, f: Oracle):
        self.f = f
        self.cache: dict[Point, ExtValue] = {}

    def __call__(self, x: Point) -> ExtValue:
        v = self.cache.get(x)
        if v is None:
            v = self.cache[x] = self.f(x)
        return v

    @property
    def misses(self) -> int:
        return len(self.cache)


def _require_dom(f: Oracle, x: Point) -> ExtValue:
    v = f(x)
    if is_inf(v):
        raise ValueError(f"{x} is not in dom f")
    return v


# --------------------------------------------------------------------------
# local optimality


def improving_directions(f: Oracle, x: Point, alpha: int = 1) -> list[tuple[Point, ExtValue]]:
    """All d in {-1,0,1}^n with f(x + alpha d) < f(x), lexicographic order."""
    fx = _require_dom(f, tuple(x))
    out = []
    for d in directions(len(x)):
        v = f(add(x, smul(alpha, d)))
        if v < fx:
            out.append((d, v))
    return out


def alpha_local_check(f: Oracle, x: Point, alpha: int) -> Verdict:
    """Is x alpha-local minimal, i.e. f(x) <= f(x + alpha d) for every d in {-1,0,1}^n?

    On failure the witness is the steepest improving direction (lexicographically
    smallest among equals) as ``(x, x + alpha d, f(x + alpha d), f(x))``.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    x = tuple(x)
    better = improving_directions(f, x, alpha)
    checked = 3 ** len(x) - 1
    if not better:
        return Verdict(True, None, checked)
    d, v = min(better, key=lambda t: (t[1], t[0]))
    return Verdict(False, Witness(x, add(x, smul(alpha, d)), v, f(x)), checked,
                   f"improving direction {list(d)}")


def local_min_check(f: Oracle, x: Point, radius: int = 1) -> Verdict:
    return alpha_local_check(f, x, radius)


# --------------------------------------------------------------------------
# 2-neighborhood steepest descent


def _argmin(f: Oracle, points) -> tuple[Point | None, ExtValue]:
    best, best_v = None, INF
    for p in points:
        v = f(p)
        if v < best_v:  # strict: the earlier (lexicographically smaller) point wins ties
            best, best_v = p, v
    return best, best_v


def neighborhood2_minimize(f: Oracle, center: Point, clip: Box | None = None) -> tuple[Point, ExtValue]:
    """Minimize f over the l-inf ball of radius 2 around ``center`` intersected with ``clip``."""
    center = tuple(center)
    ball = linf_ball(center, 2)
    if clip is not None:
        ball = ball.intersect(clip)
        if ball is None or center not in clip:
            raise ValueError("center must lie inside the clip box")
    _require_dom(f, center)
    return _argmin(f, ball.points())


@dataclass
class DescentTrace:
    iterates: list[tuple[int, Point, ExtValue]]
    point: Point
    value: ExtValue
    iterations: int
    oracle_calls: int
    terminated: str

    def to_json(self) -> dict:
        return {"iterates": [{"k": k, "point": list(p), "value": format_ext(v)}
                             for k, p, v in self.iterates],
                "point": list(self.point), "value": format_ext(self.value),
                "iterations": self.iterations, "oracle_calls": self.oracle_calls,
                "terminated": self.terminated}


def _default_budget(f, clip: Box | None) -> int:
    box = clip or getattr(f, "box", None)
    if box is None:
        dom = getattr(f, "finite_domain", lambda: None)()
        if dom:
            box = Box.bounding(dom)
    return box.diameter + 1 if box is not None else 1000


def steepest_descent_2n(f: Oracle, x0: Point, budget: int | None = None,
                        clip: Box | None = None) -> DescentTrace:
    """Steepest descent with 2-neighborhood steps.

    Iterate k minimizes f over the ball S_k(x0) of radius k (restricted to
    ``clip``).  ``iterations`` is the first k whose ball minimum equals the
    final value, which is the distance from x0 to the nearest minimizer when
    f is midpoint convex; the returned point is that iterate.
    """
    x0 = tuple(x0)
    if clip is not None and x0 not in clip:
        raise ValueError("x0 must lie inside the clip box")
    if budget is None:
        budget = _default_budget(f, clip)
    g = _Memo(f)
    f0 = _require_dom(g, x0)

    def ball(k: int) -> Box:
        b = linf_ball(x0, k)
        return b if clip is None else b.intersect(clip)

    # S_1 and S_2 come from the same enumeration
    ball_min = {0: (x0, f0)}
    ball_min[1] = _argmin(g, ball(1).points())
    ball_min[2] = _argmin(g, ball(2).points())
    iterates = [(0, x0, f0), (2, *ball_min[2])]

    terminated = BUDGET
    k = 3
    while k <= budget:
        prev, prev_v = ball_min[k - 1]
        region = linf_ball(prev, 2).intersect(ball(k))
        ball_min[k] = _argmin(g, region.points())
        iterates.append((k, *ball_min[k]))
        if ball_min[k][1] == prev_v:
            terminated = MINIMIZER_FOUND
            break
        k += 1
    last = max(ball_min)
    final_v = ball_min[last][1]
    if budget < 3 and ball_min[2][1] == ball_min[1][1]:
        terminated = MINIMIZER_FOUND
    its = min(j for j, (_, v) in ball_min.items() if v == final_v)
    if terminated == BUDGET:
        its = last
    point, value = ball_min[its]
    return DescentTrace(iterates, point, value, its, g.misses, terminated)


# --------------------------------------------------------------------------
# proximity scaling


@dataclass
class ScalingPhase:
    alpha: int
    start: Point
    end: Point
    inner_iterations: int

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "start": list(self.start), "end": list(self.end),
                "inner_iterations": self.inner_iterations}


@dataclass
class ScalingTrace:
    phases: list[ScalingPhase]
    final: Point
    value: ExtValue
    oracle_calls: int
    kinf: int
    phase_calls: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"phases": [p.to_json() for p in self.phases], "final": list(self.final),
                "value": format_ext(self.value), "oracle_calls": self.oracle_calls,
                "kinf": self.kinf}


def derive_kinf(f) -> int:
    dom = getattr(f, "finite_domain", lambda: None)()
    if dom is None:
        raise ValueError("K_inf cannot be derived for this oracle; pass it explicitly")
    if not dom:
        raise ValueError("empty effective domain")
    n = len(dom[0])
    return max(max(p[i] for p in dom) - min(p[i] for p in dom) for i in range(n))


def scaling_minimize(f: Oracle, x0: Point, kinf: int | None = None) -> ScalingTrace:
    """Proximity scaling: alpha = 2^ceil(log2 K), ..., 2, 1, each phase a
    2-neighborhood descent on y -> f(x + alpha y) with ||y||_inf <= n."""
    if kinf is None:
        kinf = max(derive_kinf(f), 1)
    elif kinf < 1:
        raise ValueError("K_inf must be a positive integer")
    x = tuple(x0)
    n = len(x)
    g = _Memo(f)
    _require_dom(g, x)
    alpha = 1 << (kinf - 1).bit_length()  # 2^ceil(log2 kinf)
    clip = Box.cube(n, -n, n)
    phases, phase_calls = [], []
    while True:
        base = x
        before = g.misses
        trace = steepest_descent_2n(lambda y: g(add(base, smul(alpha, y))), (0,) * n,
                                    budget=2 * n + 1, clip=clip)
        x = add(base, smul(alpha, trace.point))
        phases.append(ScalingPhase(alpha, base, x, trace.iterations))
        phase_calls.append(g.misses - before)
        if alpha == 1:
            break
        alpha //= 2
    return ScalingTrace(phases, x, g(x), g.misses, kinf, phase_calls)


def scaling_phase_count(kinf: int) -> int:
    return (kinf - 1).bit_length() + 1 if kinf >= 1 else 1


# --------------------------------------------------------------------------
# brute force and verification


def brute_force_min(f: Oracle, box: Box) -> tuple[ExtValue, list[Point]]:
    best, arg = INF, []
    for p in box.points():
        v = f(p)
        if is_inf(v):
            continue
        if v < best:
            best, arg = v, [p]
        elif v == best:
            arg.append(p)
    if not arg:
        raise ValueError("no point of the box lies in dom f")
    return best, arg


def distance_to_set(x: Point, points: Sequence[Point]) -> tuple[int, Point]:
    """Smallest l-inf distance from x to the set, with the lexicographically first nearest point."""
    return min((linf_distance(x, p), p) for p in points)


def proximity_verify(f: Oracle, box: Box, x_alpha: Point, alpha: int) -> Verdict:
    """Some global minimizer lies within n(alpha-1) of an alpha-local minimizer."""
    x_alpha = tuple(x_alpha)
    if not alpha_local_check(f, x_alpha, alpha):
        raise ValueError(f"{x_alpha} is not {alpha}-local minimal")
    _, arg = brute_force_min(f, box)
    dist, nearest = distance_to_set(x_alpha, arg)
    bound = len(x_alpha) * (alpha - 1)
    note = f"distance={dist} bound={bound}"
    if dist <= bound:
        return Verdict(True, None, len(arg), note)
    return Verdict(False, Witness(x_alpha, nearest, bound, dist), len(arg), note)


def _clip_bound(b) -> int | None:
    if b is None or (isinstance(b, float) and math.isinf(b)):
        return None
    return int(b)


def box_barrier_check(f: Oracle, p: Sequence, q: Sequence, x_hat: Point, outer: Box) -> Verdict:
    """If x_hat beats every wall point of the box (p, q), it beats everything outside.

    Infinite bounds (``None`` or +-inf) have no wall.  The outside is scanned
    within ``outer``.  When the wall hypothesis fails the verdict holds
    vacuously and says so in the note.
    """
    x_hat = tuple(x_hat)
    n = len(x_hat)
    if len(p) != n or len(q) != n or outer.dim != n:
        raise ValueError("bounds, point and outer box must share the dimension")
    lo = [_clip_bound(a) for a in p]
    hi = [_clip_bound(b) for b in q]
    for i in range(n):
        if (lo[i] is not None and not lo[i] < x_hat[i]) or (hi[i] is not None and not x_hat[i] < hi[i]):
            raise ValueError("need p < x_hat < q componentwise")
    fx = _require_dom(f, x_hat)

    def inside_closed(z):
        return all((lo[i] is None or lo[i] <= z[i]) and (hi[i] is None or z[i] <= hi[i])
                   for i in range(n))

    def on_wall(z):
        return any(z[i] == lo[i] or z[i] == hi[i] for i in range(n))

    def outside_open(z):
        return any((lo[i] is not None and z[i] <= lo[i]) or (hi[i] is not None and z[i] >= hi[i])
                   for i in range(n))

    for z in outer.points():
        if inside_closed(z) and on_wall(z) and f(z) < fx:
            return Verdict(True, None, 0, f"wall point {list(z)} is lower; hypothesis fails")
    checked = 0
    for z in outer.points():
        if outside_open(z):
            checked += 1
            v = f(z)
            if v < fx:
                return Verdict(False, Witness(z, x_hat, v, fx), checked)
    return Verdict(True, None, checked)
