"""Functions [a, b] -> X on a uniform grid.

Real (and vector) payloads carry piecewise-linear semantics between
nodes; set payloads (interval, union, max) use per-node step semantics.
Integration always uses the trapezoid rule on convexified endpoint
payloads, which is exact for piecewise-linear real data.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import lspace as ls
from .errors import ModelMismatch, NoDifference, NonIsotropic, NotInvertible
from .modulus import Modulus
from .poly import poly_integral

DEFAULT_GRID = 4096


def eps_tolerance(omega: Modulus, length: float, n_cells: int) -> float:
    """Grid-scaled tolerance for bound-vs-oracle comparisons."""
    return float(omega(2.0 * length / n_cells)) + 1e-9


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Uniform-grid representation of f: [a, b] -> X.

    ``data`` layout: real/max -> (n+1,), vector -> (n+1, d),
    interval -> (n+1, 2), union -> tuple of union payloads.
    """

    a: float
    b: float
    model: str
    data: object

    def __post_init__(self):
        if self.b <= self.a:
            raise ValueError("domain must satisfy a < b")
        if self.n_cells < 2:
            raise ValueError("grid needs at least 2 cells")
        if self.model == ls.INTERVAL:
            d = np.asarray(self.data)
            if np.any(d[:, 0] > d[:, 1] + 1e-12):
                raise ValueError("interval payloads require lo <= hi")

    @property
    def n_cells(self) -> int:
        if self.model == ls.UNION:
            return len(self.data) - 1
        return np.asarray(self.data).shape[0] - 1

    @property
    def step(self) -> float:
        return (self.b - self.a) / self.n_cells

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n_cells + 1)

    def value(self, i: int) -> ls.Element:
        if self.model == ls.REAL:
            return ls.real(float(self.data[i]))
        if self.model == ls.MAX:
            return ls.maxval(float(self.data[i]))
        if self.model == ls.VECTOR:
            return ls.vector(*self.data[i])
        if self.model == ls.INTERVAL:
            return ls.interval(float(self.data[i, 0]), float(self.data[i, 1]))
        return ls.Element(ls.UNION, self.data[i])

    def values(self) -> List[ls.Element]:
        return [self.value(i) for i in range(self.n_cells + 1)]

    def value_at(self, t: float) -> ls.Element:
        """Piecewise-linear evaluation for real/vector; nearest node otherwise."""
        t = float(min(max(t, self.a), self.b))
        if self.model == ls.REAL:
            return ls.real(float(np.interp(t, self.nodes, self.data)))
        if self.model == ls.VECTOR:
            comps = [float(np.interp(t, self.nodes, self.data[:, j])) for j in range(self.data.shape[1])]
            return ls.vector(*comps)
        i = int(round((t - self.a) / self.step))
        return self.value(min(max(i, 0), self.n_cells))


def from_values(values: Sequence[ls.Element], a: float, b: float) -> GridFunction:
    model = values[0].model
    if any(v.model != model for v in values):
        raise ModelMismatch("all node values must share one model")
    if model in (ls.REAL, ls.MAX):
        data = np.array([v.payload for v in values], dtype=float)
    elif model == ls.VECTOR:
        data = np.array([v.payload for v in values], dtype=float)
    elif model == ls.INTERVAL:
        data = np.array([[v.payload[0], v.payload[1]] for v in values], dtype=float)
    else:
        data = tuple(v.payload for v in values)
    return GridFunction(float(a), float(b), model, data)


def real_grid(f, a: float, b: float, n: int = DEFAULT_GRID) -> GridFunction:
    """Sample a real-valued callable (or wrap an array) on a uniform grid."""
    ts = np.linspace(a, b, n + 1)
    if callable(f):
        data = np.array([float(f(t)) for t in ts])
    else:
        data = np.asarray(f, dtype=float)
        if data.shape != ts.shape:
            raise ValueError("array length must be n + 1")
    return GridFunction(float(a), float(b), ls.REAL, data)


def interval_grid(lo, hi, a: float, b: float, n: int = DEFAULT_GRID) -> GridFunction:
    ts = np.linspace(a, b, n + 1)
    lo_v = np.array([float(lo(t)) for t in ts]) if callable(lo) else np.asarray(lo, dtype=float)
    hi_v = np.array([float(hi(t)) for t in ts]) if callable(hi) else np.asarray(hi, dtype=float)
    return GridFunction(float(a), float(b), ls.INTERVAL, np.column_stack([lo_v, hi_v]))


def constant_grid(x: ls.Element, a: float, b: float, n: int = DEFAULT_GRID) -> GridFunction:
    return from_values([x] * (n + 1), a, b)


def _component_arrays(f: GridFunction) -> List[np.ndarray]:
    """Endpoint/coordinate arrays driving vectorized code paths."""
    if f.model in (ls.REAL, ls.MAX):
        return [np.asarray(f.data, dtype=float)]
    if f.model == ls.VECTOR:
        d = np.asarray(f.data, dtype=float)
        return [d[:, j] for j in range(d.shape[1])]
    if f.model == ls.INTERVAL:
        d = np.asarray(f.data, dtype=float)
        return [d[:, 0], d[:, 1]]
    raise ModelMismatch("union-valued functions have no fixed component arrays")


def _pair_dist(f: GridFunction, k: int) -> np.ndarray:
    """Distances dist(f(t_i), f(t_{i+k})) for all i, vectorized per model."""
    if f.model == ls.UNION:
        vals = f.values()
        return np.array([ls.dist(vals[i], vals[i + k]) for i in range(len(vals) - k)])
    comps = _component_arrays(f)
    diffs = [np.abs(c[k:] - c[:-k]) for c in comps]
    if f.model == ls.VECTOR:
        return np.sqrt(sum(d * d for d in diffs))
    return np.maximum.reduce(diffs) if len(diffs) > 1 else diffs[0]


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    defect: float
    witness: Tuple[float, float]
    strict: bool = False

    SLACK = 1e-9


def _span_set(n: int, strict: bool) -> List[int]:
    if strict:
        return list(range(1, n + 1))
    spans = []
    k = 1
    while k < n:
        spans.append(k)
        k *= 2
    spans.append(n)
    return spans


def check_Homega(f: GridFunction, omega: Modulus, strict: bool = False) -> MembershipReport:
    """Membership test for the class of functions with oscillation bounded
    by ``omega``: exhaustive over adjacent and dyadic node spans, all spans
    under ``strict``."""
    n = f.n_cells
    step = f.step
    worst = -math.inf
    witness = (f.a, f.a)
    for k in _span_set(n, strict):
        dists = _pair_dist(f, k)
        defects = dists - float(omega(k * step))
        i = int(np.argmax(defects))
        if defects[i] > worst:
            worst = float(defects[i])
            witness = (f.a + i * step, f.a + (i + k) * step)
    return MembershipReport(worst <= MembershipReport.SLACK, worst, witness, strict)


def omega_seminorm(f: GridFunction, omega: Modulus) -> float:
    """sup of dist(f(t'), f(t'')) / omega(|t' - t''|) over the same pair set
    as ``check_Homega``."""
    n = f.n_cells
    best = 0.0
    for k in _span_set(n, strict=False):
        w = float(omega(k * f.step))
        if w <= 0.0:
            continue
        best = max(best, float(np.max(_pair_dist(f, k))) / w)
    return best


def sup_norm(f: GridFunction) -> float:
    """Max over nodes of dist(f(t), 0)."""
    if f.model == ls.UNION:
        worst = 0.0
        for comps in f.data:
            worst = max(worst, max(abs(comps[0][0]), abs(comps[-1][1])))
        return worst
    comps = _component_arrays(f)
    if f.model == ls.VECTOR:
        return float(np.max(np.sqrt(sum(c * c for c in comps))))
    return float(np.max(np.maximum.reduce([np.abs(c) for c in comps])))


def sup_dist(f: GridFunction, g: GridFunction) -> float:
    """C-metric (max over nodes) between two grid functions on one grid."""
    if f.n_cells != g.n_cells or abs(f.a - g.a) > 1e-12 or abs(f.b - g.b) > 1e-12:
        raise ValueError("grids differ")
    if f.model == ls.UNION or g.model == ls.UNION:
        return max(ls.dist(x, y) for x, y in zip(f.values(), g.values()))
    fc, gc = _component_arrays(f), _component_arrays(g)
    if f.model != g.model:
        if {f.model, g.model} == {ls.INTERVAL, ls.REAL}:
            # promote the real function to degenerate intervals
            if f.model == ls.REAL:
                fc = [fc[0], fc[0]]
            else:
                gc = [gc[0], gc[0]]
        else:
            raise ModelMismatch(f"cannot compare {f.model} with {g.model}")
    diffs = [np.abs(a - b) for a, b in zip(fc, gc)]
    if f.model == ls.VECTOR:
        return float(np.max(np.sqrt(sum(d * d for d in diffs))))
    return float(np.max(np.maximum.reduce(diffs) if len(diffs) > 1 else diffs[0]))


def _convexified_arrays(f: GridFunction) -> List[np.ndarray]:
    """Component arrays after applying the convexifying operator nodewise."""
    if f.model == ls.UNION:
        lo = np.array([comps[0][0] for comps in f.data])
        hi = np.array([comps[-1][1] for comps in f.data])
        return [lo, hi]
    if f.model == ls.MAX:
        return [np.zeros(f.n_cells + 1)]
    return _component_arrays(f)


def _integral_element(f: GridFunction, vals: List[float]) -> ls.Element:
    if f.model == ls.REAL:
        return ls.real(vals[0])
    if f.model == ls.MAX:
        return ls.maxval(0.0)
    if f.model == ls.VECTOR:
        return ls.vector(*vals)
    return ls.interval(vals[0], vals[1])


def integrate(f: GridFunction, c: Optional[float] = None, d: Optional[float] = None) -> ls.Element:
    """Integral over [c, d] (default: full domain); the result is convex."""
    c = f.a if c is None else float(c)
    d = f.b if d is None else float(d)
    if c < f.a - 1e-12 or d > f.b + 1e-12:
        raise ValueError("integration range outside the domain")
    comps = _convexified_arrays(f)
    nodes = f.nodes
    vals = [poly_integral(nodes, arr, c, d) for arr in comps]
    return _integral_element(f, vals)


def lift(f: GridFunction, x: ls.Element) -> GridFunction:
    """Pointwise lift of a real grid function through a convex invertible
    element: t -> f(t)_+ x + f(t)_- x'."""
    if f.model != ls.REAL:
        raise ModelMismatch("lift expects a real grid function")
    if not ls.is_convex(x):
        raise NotInvertible("lift requires a convex element")
    ls.inverse(x)  # raises NotInvertible when x' does not exist
    r = np.asarray(f.data, dtype=float)
    if x.model == ls.REAL:
        return GridFunction(f.a, f.b, ls.REAL, r * x.payload)
    if x.model == ls.VECTOR:
        xv = np.asarray(x.payload)
        return GridFunction(f.a, f.b, ls.VECTOR, np.outer(r, xv))
    if x.model == ls.INTERVAL:
        v = x.payload[0]  # invertible intervals are degenerate
        return GridFunction(f.a, f.b, ls.INTERVAL, np.column_stack([r * v, r * v]))
    if x.model == ls.UNION:
        v = x.payload[0][0]
        data = tuple(((ri * v, ri * v),) for ri in r)
        return GridFunction(f.a, f.b, ls.UNION, data)
    raise NonIsotropic("max-space admits no nontrivial lift")


def hukuhara_derivative(f: GridFunction) -> GridFunction:
    """Node-wise difference quotients of Hukuhara differences.

    Interior nodes average the forward and backward quotient (a central
    quotient for endpoint-linear payloads); endpoints use the one-sided
    quotient.  Raises NoDifference when a required difference is missing.
    """
    if f.model == ls.MAX:
        raise NonIsotropic("Hukuhara derivative requires an isotropic model")
    step = f.step
    if f.model == ls.UNION:
        vals = f.values()
        out = []
        for i in range(len(vals)):
            if i == 0:
                d = ls.hukuhara_diff(vals[1], vals[0])
                out.append(ls.scale(1.0 / step, d))
            elif i == len(vals) - 1:
                d = ls.hukuhara_diff(vals[-1], vals[-2])
                out.append(ls.scale(1.0 / step, d))
            else:
                fwd = ls.hukuhara_diff(vals[i + 1], vals[i])
                bwd = ls.hukuhara_diff(vals[i], vals[i - 1])
                out.append(ls.scale(0.5 / step, ls.add(fwd, bwd)))
        return from_values(out, f.a, f.b)
    if f.model == ls.INTERVAL:
        d = np.asarray(f.data, dtype=float)
        widths = d[:, 1] - d[:, 0]
        if np.any(np.diff(widths) < -1e-9):
            i = int(np.argmax(np.diff(widths) < -1e-9))
            raise NoDifference(f"interval width decreases across node {i}")
    comps = _component_arrays(f)
    out_comps = []
    for c in comps:
        dc = np.empty_like(c)
        dc[1:-1] = (c[2:] - c[:-2]) / (2.0 * step)
        dc[0] = (c[1] - c[0]) / step
        dc[-1] = (c[-1] - c[-2]) / step
        out_comps.append(dc)
    if f.model == ls.INTERVAL:
        lo, hi = out_comps
        hi = np.maximum(lo, hi)  # clamp float noise on equal widths
        return GridFunction(f.a, f.b, ls.INTERVAL, np.column_stack([lo, hi]))
    if f.model == ls.VECTOR:
        return GridFunction(f.a, f.b, ls.VECTOR, np.column_stack(out_comps))
    return GridFunction(f.a, f.b, ls.REAL, out_comps[0])


def scale_fn(lam: float, f: GridFunction) -> GridFunction:
    if f.model == ls.UNION:
        return from_values([ls.scale(lam, v) for v in f.values()], f.a, f.b)
    if f.model == ls.INTERVAL and lam < 0:
        d = np.asarray(f.data, dtype=float)
        return GridFunction(f.a, f.b, ls.INTERVAL, np.column_stack([lam * d[:, 1], lam * d[:, 0]]))
    if f.model == ls.MAX:
        return GridFunction(f.a, f.b, ls.MAX, abs(lam) * np.asarray(f.data, dtype=float))
    return GridFunction(f.a, f.b, f.model, lam * np.asarray(f.data, dtype=float))


def add_fn(f: GridFunction, g: GridFunction) -> GridFunction:
    if f.n_cells != g.n_cells:
        raise ValueError("grids differ")
    if f.model == ls.UNION or g.model == ls.UNION or f.model != g.model:
        return from_values([ls.add(x, y) for x, y in zip(f.values(), g.values())], f.a, f.b)
    if f.model == ls.MAX:
        return GridFunction(f.a, f.b, ls.MAX, np.maximum(f.data, g.data))
    return GridFunction(f.a, f.b, f.model, np.asarray(f.data) + np.asarray(g.data))


def to_csv(f: GridFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if f.model == ls.REAL:
        w.writerow(["t", "v"])
        for t, v in zip(f.nodes, f.data):
            w.writerow([f"{t:.12g}", f"{v:.12g}"])
    elif f.model == ls.INTERVAL:
        w.writerow(["t", "lo", "hi"])
        for t, (lo, hi) in zip(f.nodes, np.asarray(f.data)):
            w.writerow([f"{t:.12g}", f"{lo:.12g}", f"{hi:.12g}"])
    else:
        raise ModelMismatch("CSV export supports real and interval models")
    return buf.getvalue()


def from_csv(text: str) -> GridFunction:
    rows = list(csv.reader(io.StringIO(text.strip())))
    header, body = rows[0], rows[1:]
    ts = np.array([float(r[0]) for r in body])
    if header[:2] == ["t", "v"]:
        data = np.array([float(r[1]) for r in body])
        return GridFunction(float(ts[0]), float(ts[-1]), ls.REAL, data)
    if header[:3] == ["t", "lo", "hi"]:
        data = np.array([[float(r[1]), float(r[2])] for r in body])
        return GridFunction(float(ts[0]), float(ts[-1]), ls.INTERVAL, data)
    raise ValueError(f"unrecognized CSV header {header}")


def to_json(f: GridFunction) -> str:
    return json.dumps(
        {
            "a": f.a,
            "b": f.b,
            "model": f.model,
            "values": [ls.to_json(v)["payload"] for v in f.values()],
        }
    )


def from_json(text: str) -> GridFunction:
    obj = json.loads(text)
    vals = [ls.from_json({"model": obj["model"], "payload": p}) for p in obj["values"]]
    return from_values(vals, obj["a"], obj["b"])
