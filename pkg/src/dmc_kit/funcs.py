"""Function oracles f: Z^n -> Q ∪ {+inf}.

Every oracle counts calls to its *base* evaluation.  Wrappers (translate,
scale, sums, ...) do not count themselves; their ``eval_count`` reports the
evaluations spent in the functions they wrap.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .lattice import (
    INF,
    Box,
    DimensionError,
    DmcError,
    ExtValue,
    Point,
    ext_add,
    ext_scale,
    format_ext,
    is_inf,
    linf_norm,
    parse_ext,
    parse_rational,
)


class DocumentError(DmcError, ValueError):
    """A function or set document does not match its schema."""


class _Counter:
    def __init__(self):
        self._n = 0
        self._lock = threading.Lock()

    def bump(self) -> None:
        with self._lock:
            self._n += 1

    @property
    def value(self) -> int:
        return self._n


class FnOracle:
    """Base class.  Subclasses implement ``_eval``."""

    dim: int
    box: Box | None = None

    def __init__(self, dim: int, box: Box | None = None):
        if dim < 1:
            raise DimensionError("dimension must be >= 1")
        if box is not None and box.dim != dim:
            raise DimensionError(f"box dimension {box.dim} != {dim}")
        self.dim = dim
        self.box = box
        self._counter = _Counter()

    def __call__(self, x: Sequence[int]) -> ExtValue:
        x = tuple(x)
        if len(x) != self.dim:
            raise DimensionError(f"expected a point of dimension {self.dim}, got {len(x)}")
        self._counter.bump()
        return self._eval(x)

    def _eval(self, x: Point) -> ExtValue:
        raise NotImplementedError

    @property
    def eval_count(self) -> int:
        return self._counter.value

    def finite_domain(self) -> list[Point] | None:
        """Explicit effective domain when the oracle knows it, else None."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no document form")


class _Wrapper(FnOracle):
    def __init__(self, dim: int, children: Sequence[FnOracle], box: Box | None = None):
        super().__init__(dim, box)
        self.children = tuple(children)

    def __call__(self, x: Sequence[int]) -> ExtValue:
        x = tuple(x)
        if len(x) != self.dim:
            raise DimensionError(f"expected a point of dimension {self.dim}, got {len(x)}")
        return self._eval(x)

    @property
    def eval_count(self) -> int:
        return sum(c.eval_count for c in self.children)


# --------------------------------------------------------------------------
# concrete families


class CallableFn(FnOracle):
    """Wrap a Python callable; it must return ints, Fractions or INF."""

    def __init__(self, dim: int, fn: Callable[[Point], ExtValue], box: Box | None = None,
                 name: str = "callable"):
        super().__init__(dim, box)
        self.fn = fn
        self.name = name

    def _eval(self, x):
        if self.box is not None and x not in self.box:
            return INF
        return self.fn(x)

    def __repr__(self):
        return f"CallableFn({self.name}, dim={self.dim})"


class QuadraticFn(FnOracle):
    """f(x) = x^T Q x with exact rational Q, optionally restricted to a box."""

    def __init__(self, Q: Sequence[Sequence], box: Box | None = None):
        rows = [[parse_rational(v) for v in row] for row in Q]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("Q must be a nonempty square matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"Q is not symmetric at ({i + 1},{j + 1})")
        super().__init__(n, box)
        self.Q = tuple(tuple(r) for r in rows)

    def _eval(self, x):
        if self.box is not None and x not in self.box:
            return INF
        Q = self.Q
        s = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = Q[i]
                s += xi * sum(row[j] * xj for j, xj in enumerate(x) if xj)
        return s

    def to_json(self):
        doc = {"kind": "quadratic", "dim": self.dim,
               "Q": [[format_ext(v) for v in row] for row in self.Q]}
        if self.box is not None:
            doc["box"] = self.box.to_json()
        return doc


class SeparableConvexFn(FnOracle):
    """f(x) = sum_i phi_i(x_i); phi_i tabulated on [lo_i, lo_i + len - 1]."""

    def __init__(self, tables: Sequence[tuple[int, Sequence]]):
        self.tables = []
        for i, (lo, values) in enumerate(tables):
            vals = [parse_ext(v) for v in values]
            finite = [t for t, v in enumerate(vals) if not is_inf(v)]
            if not finite:
                raise ValueError(f"phi_{i + 1} has an empty domain")
            if finite != list(range(finite[0], finite[-1] + 1)):
                raise ValueError(f"phi_{i + 1} has a non-interval domain")
            for t in finite[1:-1]:
                if vals[t - 1] + vals[t + 1] < 2 * vals[t]:
                    raise ValueError(f"phi_{i + 1} is not discrete convex at t={lo + t}")
            self.tables.append((int(lo), tuple(vals)))
        n = len(self.tables)
        box = Box(tuple(lo for lo, _ in self.tables),
                  tuple(lo + len(v) - 1 for lo, v in self.tables))
        super().__init__(n, box)

    def _eval(self, x):
        total: ExtValue = 0
        for xi, (lo, vals) in zip(x, self.tables):
            t = xi - lo
            if not 0 <= t < len(vals):
                return INF
            total = ext_add(total, vals[t])
        return total

    def to_json(self):
        return {"kind": "separable", "dim": self.dim,
                "phi": [{"lo": lo, "values": [format_ext(v) for v in vals]}
                        for lo, vals in self.tables]}


class TableFn(FnOracle):
    """Explicit values on a box; +inf outside the box."""

    def __init__(self, box: Box, values: Mapping[Point, ExtValue]):
        super().__init__(box.dim, box)
        vals = {}
        for p, v in values.items():
            p = tuple(p)
            if p not in box:
                raise ValueError(f"table entry {p} outside box {box}")
            vals[p] = v if is_inf(v) or isinstance(v, (int, Fraction)) else parse_ext(v)
        missing = box.size - len(vals)
        if missing:
            raise ValueError(f"table misses {missing} in-box points")
        self.values = vals

    @classmethod
    def from_oracle(cls, f: FnOracle, box: Box) -> "TableFn":
        return cls(box, {p: f(p) for p in box.points()})

    def _eval(self, x):
        return self.values.get(x, INF)

    def finite_domain(self):
        return [p for p in self.box.points() if not is_inf(self.values[p])]

    def to_json(self):
        return {"kind": "table", "dim": self.dim, "box": self.box.to_json(),
                "entries": [{"x": list(p), "v": format_ext(self.values[p])}
                            for p in self.box.points()]}


class IndicatorFn(FnOracle):
    """delta_S: 0 on S, +inf elsewhere."""

    def __init__(self, points: Iterable[Sequence[int]], dim: int | None = None):
        pts = frozenset(tuple(int(c) for c in p) for p in points)
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise DimensionError("points of mixed dimension")
        if dim is None:
            if not dims:
                raise ValueError("dimension of an empty set must be given")
            dim = dims.pop()
        elif dims and dims != {dim}:
            raise DimensionError("points do not match the declared dimension")
        super().__init__(dim, Box.bounding(pts) if pts else None)
        self.points = pts

    def _eval(self, x):
        return 0 if x in self.points else INF

    def finite_domain(self):
        return sorted(self.points)

    def to_json(self):
        return {"kind": "indicator", "dim": self.dim,
                "points": [list(p) for p in sorted(self.points)]}


class LinearOnSetFn(FnOracle):
    """f(x) = c.x on an explicit finite domain, +inf outside."""

    def __init__(self, c: Sequence, domain: Iterable[Sequence[int]]):
        self.c = tuple(parse_rational(v) for v in c)
        self.domain = frozenset(tuple(p) for p in domain)
        if any(len(p) != len(self.c) for p in self.domain):
            raise DimensionError("domain points do not match len(c)")
        super().__init__(len(self.c), Box.bounding(self.domain) if self.domain else None)

    def _eval(self, x):
        if x not in self.domain:
            return INF
        return sum((ci * xi for ci, xi in zip(self.c, x)), Fraction(0))

    def finite_domain(self):
        return sorted(self.domain)

    def to_json(self):
        return {"kind": "linear_on_set", "dim": self.dim,
                "c": [format_ext(v) for v in self.c],
                "points": [list(p) for p in sorted(self.domain)]}


def staircase_set(n: int, alpha: int) -> list[Point]:
    """{x : 0 <= x_i - x_{i+1} <= alpha-1, 0 <= x_n <= alpha-1}."""
    pts: list[Point] = []

    def rec(prefix: list[int]):
        if len(prefix) == n:
            pts.append(tuple(reversed(prefix)))
            return
        base = prefix[-1] if prefix else 0
        for step in range(alpha):
            rec(prefix + [base + step])

    rec([])
    return sorted(pts)


def staircase_fn(n: int, alpha: int) -> LinearOnSetFn:
    """f(x) = -x_1 on the staircase set; L-natural convex with a far minimizer."""
    return LinearOnSetFn((-1,) + (0,) * (n - 1), staircase_set(n, alpha))


# --------------------------------------------------------------------------
# combinators


class _Translate(_Wrapper):
    def __init__(self, f: FnOracle, z: Point):
        if len(z) != f.dim:
            raise DimensionError("translation vector has the wrong dimension")
        box = None
        if f.box is not None:
            box = Box(tuple(a - b for a, b in zip(f.box.lo, z)),
                      tuple(a - b for a, b in zip(f.box.hi, z)))
        super().__init__(f.dim, [f], box)
        self.f, self.z = f, tuple(z)

    def _eval(self, x):
        return self.f(tuple(a + b for a, b in zip(self.z, x)))

    def finite_domain(self):
        d = self.f.finite_domain()
        return None if d is None else sorted(tuple(a - b for a, b in zip(p, self.z)) for p in d)

    def to_json(self):
        return {"kind": "translate", "dim": self.dim, "z": list(self.z), "fn": self.f.to_json()}


class _Permute(_Wrapper):
    def __init__(self, f: FnOracle, sigma: Sequence[int]):
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(1, f.dim + 1)):
            raise ValueError(f"{sigma} is not a permutation of 1..{f.dim}")
        box = None
        if f.box is not None:
            # result(x) = f(x_sigma); coordinate j of the argument feeds slot inv(j)
            inv = {s: i for i, s in enumerate(sigma)}
            box = Box(tuple(f.box.lo[inv[j + 1]] for j in range(f.dim)),
                      tuple(f.box.hi[inv[j + 1]] for j in range(f.dim)))
        super().__init__(f.dim, [f], box)
        self.f, self.sigma = f, sigma

    def _eval(self, x):
        return self.f(tuple(x[s - 1] for s in self.sigma))

    def finite_domain(self):
        d = self.f.finite_domain()
        if d is None:
            return None
        inv = {s: i for i, s in enumerate(self.sigma)}
        return sorted(tuple(p[inv[j + 1]] for j in range(self.dim)) for p in d)

    def to_json(self):
        return {"kind": "permute", "dim": self.dim, "perm": list(self.sigma), "fn": self.f.to_json()}


class _Negate(_Wrapper):
    def __init__(self, f: FnOracle):
        box = None if f.box is None else Box(tuple(-a for a in f.box.hi), tuple(-a for a in f.box.lo))
        super().__init__(f.dim, [f], box)
        self.f = f

    def _eval(self, x):
        return self.f(tuple(-a for a in x))

    def finite_domain(self):
        d = self.f.finite_domain()
        return None if d is None else sorted(tuple(-a for a in p) for p in d)

    def to_json(self):
        return {"kind": "negate", "dim": self.dim, "fn": self.f.to_json()}


class _WeightedSum(_Wrapper):
    def __init__(self, terms: Sequence[tuple[Fraction, FnOracle]]):
        if not terms:
            raise ValueError("empty sum")
        dims = {f.dim for _, f in terms}
        if len(dims) != 1:
            raise DimensionError("summands have different dimensions")
        ws = [parse_rational(w) for w, _ in terms]
        if any(w < 0 for w in ws):
            raise ValueError("weights must be nonnegative")
        box = None
        for _, f in terms:
            if f.box is not None:
                box = f.box if box is None else box.intersect(f.box)
                if box is None:
                    break
        super().__init__(dims.pop(), [f for _, f in terms], box)
        self.terms = list(zip(ws, self.children))

    def _eval(self, x):
        total: ExtValue = 0
        for w, f in self.terms:
            v = f(x)
            if is_inf(v):
                return INF
            total = total + ext_scale(v, w)
        return total

    def to_json(self):
        return {"kind": "sum", "dim": self.dim,
                "terms": [{"weight": format_ext(w), "fn": f.to_json()} for w, f in self.terms]}


class _Scale(_Wrapper):
    def __init__(self, f: FnOracle, alpha: int):
        box = None
        if f.box is not None:
            lo = tuple(-((-a) // alpha) for a in f.box.lo)
            hi = tuple(b // alpha for b in f.box.hi)
            if all(a <= b for a, b in zip(lo, hi)):
                box = Box(lo, hi)
        super().__init__(f.dim, [f], box)
        self.f, self.alpha = f, alpha

    def _eval(self, x):
        return self.f(tuple(self.alpha * a for a in x))

    def finite_domain(self):
        d = self.f.finite_domain()
        if d is None:
            return None
        a = self.alpha
        return sorted(tuple(c // a for c in p) for p in d if all(c % a == 0 for c in p))

    def to_json(self):
        return {"kind": "scale", "dim": self.dim, "alpha": self.alpha, "fn": self.f.to_json()}


def translate(f: FnOracle, z: Sequence[int]) -> FnOracle:
    """x -> f(z + x)."""
    return _Translate(f, tuple(z))


def permute(f: FnOracle, sigma: Sequence[int]) -> FnOracle:
    """x -> f(x_sigma(1), ..., x_sigma(n)); ``sigma`` is 1-based."""
    return _Permute(f, sigma)


def negate_all(f: FnOracle) -> FnOracle:
    """x -> f(-x)."""
    return _Negate(f)


def weighted_sum(a1, a2, f1: FnOracle, f2: FnOracle) -> FnOracle:
    return _WeightedSum([(a1, f1), (a2, f2)])


def sum_fns(terms: Sequence[tuple]) -> FnOracle:
    """Nonnegative combination of any number of oracles."""
    return _WeightedSum(list(terms))


def scale_fn(f: FnOracle, alpha: int) -> FnOracle:
    """x -> f(alpha * x)."""
    if int(alpha) != alpha or alpha < 1:
        raise ValueError("scaling factor must be a positive integer")
    return _Scale(f, int(alpha))


# --------------------------------------------------------------------------
# documents


def _req(doc: dict, key: str):
    if key not in doc:
        raise DocumentError(f"{doc.get('kind', '?')} document lacks field {key!r}")
    return doc[key]


def _points(raw, dim: int) -> list[Point]:
    if not isinstance(raw, list):
        raise DocumentError("points must be a list")
    out = []
    for p in raw:
        if not isinstance(p, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in p):
            raise DocumentError(f"bad lattice point {p!r}")
        if len(p) != dim:
            raise DocumentError(f"point {p} does not have dimension {dim}")
        out.append(tuple(p))
    return out


def function_from_json(doc: dict) -> FnOracle:
    try:
        return _build(doc)
    except DocumentError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise DocumentError(str(exc)) from exc


def _build(doc: dict) -> FnOracle:
    if not isinstance(doc, dict):
        raise DocumentError("function document must be a JSON object")
    kind = _req(doc, "kind")
    dim = _req(doc, "dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError(f"bad dim {dim!r}")
    box = Box.from_json(doc["box"]) if "box" in doc else None
    if box is not None and box.dim != dim:
        raise DocumentError("box dimension does not match dim")

    if kind == "quadratic":
        Q = _req(doc, "Q")
        if len(Q) != dim:
            raise DocumentError("Q size does not match dim")
        f = QuadraticFn(Q, box)
    elif kind == "separable":
        phi = _req(doc, "phi")
        if len(phi) != dim:
            raise DocumentError("number of phi tables does not match dim")
        f = SeparableConvexFn([(p["lo"], p["values"]) for p in phi])
    elif kind == "table":
        if box is None:
            raise DocumentError("table document needs a box")
        vals = {}
        for e in _req(doc, "entries"):
            (p,) = _points([e["x"]], dim)
            if p not in box:
                raise DocumentError(f"table entry {list(p)} outside the declared box")
            if p in vals:
                raise DocumentError(f"duplicate table entry {list(p)}")
            vals[p] = parse_ext(e["v"])
        if "default" in doc:
            default = parse_ext(doc["default"])
            for p in box.points():
                vals.setdefault(p, default)
        return TableFn(box, vals)
    elif kind == "indicator":
        return IndicatorFn(_points(_req(doc, "points"), dim), dim)
    elif kind == "linear_on_set":
        c = _req(doc, "c")
        if len(c) != dim:
            raise DocumentError("c does not match dim")
        return LinearOnSetFn(c, _points(_req(doc, "points"), dim))
    elif kind == "sum":
        terms = []
        for t in _req(doc, "terms"):
            terms.append((parse_rational(t.get("weight", 1)), _build(t["fn"])))
        f = sum_fns(terms)
    elif kind in ("translate", "permute", "negate", "scale"):
        child = _build(_req(doc, "fn"))
        if child.dim != dim:
            raise DocumentError("child dimension does not match dim")
        if kind == "translate":
            (z,) = _points([_req(doc, "z")], dim)
            f = translate(child, z)
        elif kind == "permute":
            f = permute(child, _req(doc, "perm"))
        elif kind == "negate":
            f = negate_all(child)
        else:
            alpha = _req(doc, "alpha")
            if isinstance(alpha, bool) or not isinstance(alpha, int):
                raise DocumentError("alpha must be an integer")
            f = scale_fn(child, alpha)
    else:
        raise DocumentError(f"unknown function kind {kind!r}")

    if f.dim != dim:
        raise DocumentError("declared dim does not match the function")
    if box is not None and kind != "quadratic":
        f = _Clip(f, box)
    return f


class _Clip(_Wrapper):
    """Restriction of a composite to a declared box."""

    def __init__(self, f: FnOracle, box: Box):
        inner = box if f.box is None else f.box.intersect(box)
        super().__init__(f.dim, [f], inner or box)
        self.f, self.window = f, box

    def _eval(self, x):
        if x not in self.window:
            return INF
        return self.f(x)

    def finite_domain(self):
        d = self.f.finite_domain()
        return None if d is None else [p for p in d if p in self.window]

    def to_json(self):
        doc = dict(self.f.to_json())
        doc["box"] = self.window.to_json()
        return doc


def load_function(document: str | dict) -> FnOracle:
    """Build an oracle from a JSON function document (text or parsed)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
    return function_from_json(document)


def effective_domain(f: FnOracle, box: Box | None = None) -> list[Point]:
    """dom f (within ``box`` when given), lexicographic order."""
    d = f.finite_domain()
    if d is not None:
        return sorted(p for p in d if box is None or p in box)
    if box is None:
        box = f.box
    if box is None:
        raise ValueError("effective domain of an unbounded oracle needs a box")
    return [p for p in box.points() if not is_inf(f(p))]


def linf_diameter(points: Sequence[Point]) -> int:
    if not points:
        raise ValueError("empty point set")
    n = len(points[0])
    return max(max(p[i] for p in points) - min(p[i] for p in points) for i in range(n))


__all__ = [
    "FnOracle", "CallableFn", "QuadraticFn", "SeparableConvexFn", "TableFn", "IndicatorFn",
    "LinearOnSetFn", "translate", "permute", "negate_all", "weighted_sum", "sum_fns",
    "scale_fn", "load_function", "function_from_json", "DocumentError", "staircase_fn",
    "staircase_set", "effective_domain", "linf_diameter", "linf_norm",
]
