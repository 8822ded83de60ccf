"""Named reproductions of worked examples, compared against pinned reports."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Callable

from .classify import (
    check_dmc_at,
    is_globally_dmc,
    is_integrally_convex,
    is_lnat,
    is_locally_dmc,
    restricted_midpoint_insufficiency_demo,
)
from .dmcset import PointSet, check_dmc_set, d0_decompose, d1_decompose, d2_decompose, steps_decompose
from .funcs import CallableFn, QuadraticFn, staircase_fn
from .lattice import Box, format_ext
from .optimize import (
    alpha_local_check,
    brute_force_min,
    distance_to_set,
    scaling_minimize,
    steepest_descent_2n,
)
from .quadratic import quad_2d_closed_form, quad_classify


def dumps(doc) -> str:
    """Canonical report text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def abs_sum_fn(box: Box) -> CallableFn:
    return CallableFn(2, lambda x: abs(x[0] + x[1]), box, name="|x1+x2|")


def signed_max_fn(box: Box) -> CallableFn:
    return CallableFn(3, lambda x: max(x[0], x[1], -x[2]), box, name="max(x1,x2,-x3)")


def _exdicdim2() -> dict:
    rows = []
    for c in ("-6/5", "-1", "-1/2", "0", "1/2", "4/5", "9/10", "1", "11/10"):
        Q = [[1, c], [c, 1]]
        rep = quad_classify(Q).to_json()
        local, glob = quad_2d_closed_form(Q)
        rep.update({"c": str(Fraction(c)), "closed_form": {"locally_dmc": local, "globally_dmc": glob}})
        rows.append(rep)
    return {"example": "exdicdim2", "quadratics": rows}


def _exmdpt1() -> dict:
    box = Box.cube(2, -3, 3)
    f = abs_sum_fn(box)
    value, arg = brute_force_min(f, box)
    return {"example": "exmdpt1",
            "locally": is_locally_dmc(f, box).to_json("dmc2", box),
            "globally": is_globally_dmc(f, box).to_json("dmc-ge2", box),
            "distance3": check_dmc_at(f, box, 3).to_json("dmc(3)", box),
            "intconv": is_integrally_convex(f, box).to_json("intconv", box),
            "argmin": {"value": format_ext(value), "points": [list(p) for p in arg]},
            "argmin_is_dmc_set": check_dmc_set(PointSet.of(arg)).holds}


def _exsign() -> dict:
    box = Box.cube(3, -2, 2)
    f = signed_max_fn(box)
    g = CallableFn(3, lambda x: max(x[0], x[1], x[2]), box, name="max(x1,x2,x3)")
    return {"example": "exsign",
            "signed": is_locally_dmc(f, box).to_json("dmc2", box),
            "unsigned": is_lnat(g, box).to_json("lnat", box)}


def _exquad3() -> dict:
    out = {"example": "exquad3"}
    for name, Q in (("dmc_not_diagdom", [[1, -1, 1], [-1, 2, -1], [1, -1, 2]]),
                    ("diagdom_not_dmc", [[1, 1, 0], [1, 1, 0], [0, 0, 0]])):
        box = Box.cube(3, -3, 3)
        f = QuadraticFn(Q, box)
        rep = quad_classify(Q).to_json()
        rep["enumeration"] = {"locally": is_locally_dmc(f, box).to_json("dmc2", box),
                              "globally": is_globally_dmc(f, box).to_json("dmc-ge2", box)}
        out[name] = rep
    return out


def _exprox() -> dict:
    rows = []
    for n, alpha in ((2, 2), (2, 3), (3, 2), (2, 4)):
        f = staircase_fn(n, alpha)
        origin = (0,) * n
        box = Box.bounding(f.finite_domain())
        value, arg = brute_force_min(f, box)
        dist, nearest = distance_to_set(origin, arg)
        rows.append({"n": n, "alpha": alpha,
                     "alpha_local_at_origin": alpha_local_check(f, origin, alpha).holds,
                     "minimizer": list(nearest), "value": format_ext(value),
                     "distance": dist, "bound": n * (alpha - 1),
                     "descent": steepest_descent_2n(f, origin).to_json(),
                     "scaling": scaling_minimize(f, origin).to_json()})
    return {"example": "exprox", "staircases": rows}


def _extam() -> dict:
    v = (5, 3, -3, -5)
    return {"example": "extam",
            "stages": [d.to_json() for d in (d0_decompose(v), d1_decompose(v, cross_check=True),
                                             d2_decompose(v), steps_decompose(v))]}


def _exsets() -> dict:
    sets = {"two_points": [(1, 0), (0, 1)],
            "antidiagonal": [(t, -t) for t in range(-3, 4)],
            "four_points": [(0, 0, 0, 0), (0, 1, 1, 0), (1, 1, 0, 0), (1, 2, 1, 0)]}
    return {"example": "exsets",
            "sets": {name: check_dmc_set(PointSet.of(pts)).to_json("dmc-set", None)
                     for name, pts in sets.items()}}


def _exg() -> dict:
    v = restricted_midpoint_insufficiency_demo()
    return {"example": "exg", "convexity": v.to_json("dmc(2)", Box((-5,), (5,)))}


EXAMPLES: dict[str, Callable[[], dict]] = {
    "exdicdim2": _exdicdim2,
    "exmdpt1": _exmdpt1,
    "exsign": _exsign,
    "exquad3": _exquad3,
    "exprox": _exprox,
    "extam": _extam,
    "exsets": _exsets,
    "exg": _exg,
}


def run_example(name: str) -> str:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(sorted(EXAMPLES))}")
    return dumps(EXAMPLES[name]())


def pinned(name: str) -> str:
    return resources.files("dmc_kit").joinpath("repro", f"{name}.json").read_text()
