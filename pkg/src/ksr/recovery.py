"""Optimal recovery from mean values and from node values.

Covers: recovery of the pointwise convexification and of the integral
from n cell means of half-width h; recovery of the identity and of the
Hukuhara derivative from values at partition nodes; the corresponding
optimal error values in closed form; and the lower-bound extremal
functions whose cell means (resp. node values) vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import gridfn as gf
from . import lspace as ls
from .errors import KnotViolation, NonConcave, SearchFailed
from .modulus import Modulus
from .ostrowski import point_vs_mean_bound

__all__ = [
    "optimal_knots",
    "tau_of",
    "validate_knots",
    "MeanInfo",
    "mean_info",
    "recover_convexify",
    "error_convexify",
    "recover_integral",
    "error_integral",
    "lower_extremal_mean",
    "lower_extremal_integral",
    "polyline",
    "polyline_error",
    "polyline_uniform_error",
    "chain_bound",
    "omega_spline",
    "polyline_derivative",
    "derivative_error_bound",
    "derivative_recovery_value",
    "derivative_extremal",
    "RecoveryReport",
]


# ---------------------------------------------------------------------------
# knots and mean-value information


def optimal_knots(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Optimal knot vector t*_k = a + (2k-1)(b-a)/(2n) and its cell
    boundaries tau."""
    if n < 1:
        raise KnotViolation("need at least one knot")
    k = np.arange(1, n + 1)
    tstar = a + (2 * k - 1) * (b - a) / (2 * n)
    return tstar, tau_of(tstar, a, b)


def tau_of(knots: np.ndarray, a: float, b: float) -> np.ndarray:
    knots = np.asarray(knots, dtype=float)
    mids = 0.5 * (knots[:-1] + knots[1:])
    return np.concatenate(([a], mids, [b]))


def validate_knots(knots: np.ndarray, h: float, a: float, b: float):
    knots = np.asarray(knots, dtype=float)
    if h <= 0.0:
        raise KnotViolation("half-width h must be positive")
    if knots[0] - h < a - 1e-12 or knots[-1] + h > b + 1e-12:
        raise KnotViolation("mean windows must stay inside [a, b]")
    if np.any((knots[1:] - h) - (knots[:-1] + h) < -1e-12):
        raise KnotViolation("mean windows must not overlap")


@dataclass(frozen=True)
class MeanInfo:
    a: float
    b: float
    knots: np.ndarray
    h: float
    means: Tuple[ls.Element, ...]


def mean_info(f: gf.GridFunction, knots: Sequence[float], h: float) -> MeanInfo:
    """Cell means (1/2h) int_{t_k - h}^{t_k + h} f."""
    knots = np.asarray(knots, dtype=float)
    validate_knots(knots, h, f.a, f.b)
    means = tuple(
        ls.scale(1.0 / (2.0 * h), gf.integrate(f, t - h, t + h)) for t in knots
    )
    return MeanInfo(f.a, f.b, knots, float(h), means)


# ---------------------------------------------------------------------------
# recovery of the convexifying operator


def recover_convexify(info: MeanInfo, n: int = gf.DEFAULT_GRID) -> gf.GridFunction:
    """Piecewise-constant method: on each tau-cell, output the cell mean."""
    tau = tau_of(info.knots, info.a, info.b)
    ts = np.linspace(info.a, info.b, n + 1)
    idx = np.clip(np.searchsorted(tau, ts, side="right") - 1, 0, len(info.knots) - 1)
    return gf.from_values([info.means[i] for i in idx], info.a, info.b)


def error_convexify(n: int, h: float, omega: Modulus, length: float) -> float:
    """Optimal error of recovering P(f) from n means of half-width h."""
    half_cell = length / (2 * n)
    if not 0.0 < h <= half_cell + 1e-12:
        raise KnotViolation("need 0 < h <= (b-a)/(2n)")
    h = min(h, half_cell)
    return omega.primitive(half_cell - h, half_cell + h) / (2.0 * h)


# ---------------------------------------------------------------------------
# recovery of the integral


def recover_integral(info: MeanInfo) -> ls.Element:
    """Method ((b-a)/n) * sum of cell means."""
    acc = info.means[0]
    for m in info.means[1:]:
        acc = ls.add(acc, m)
    return ls.scale((info.b - info.a) / len(info.knots), acc)


def error_integral(n: int, h: float, omega: Modulus, length: float) -> float:
    half_cell = length / (2 * n)
    if not 0.0 < h <= half_cell + 1e-12:
        raise KnotViolation("need 0 < h <= (b-a)/(2n)")
    h = min(h, half_cell)
    return 2.0 * n * (1.0 - 2.0 * n * h / length) * omega.primitive(0.0, half_cell)


# ---------------------------------------------------------------------------
# lower-bound extremal functions (vanishing cell means)


def lower_extremal_mean(
    knots: Sequence[float], h: float, omega: Modulus, a: float, b: float, n: int = gf.DEFAULT_GRID
) -> gf.GridFunction:
    """Real function with zero mean on every information window whose sup
    norm is at least the optimal convexification-recovery error.

    Built from a centered profile C - w(|u - p|) around the tau-point of
    a longest knot cell, mirrored window by window across the rest of
    the domain (mirroring preserves the zero means).
    """
    knots = np.asarray(knots, dtype=float)
    validate_knots(knots, h, a, b)
    nk = len(knots)
    tau = tau_of(knots, a, b)
    # the 2n cells (tau_i, t_i), (t_i, tau_{i+1}); pick the longest
    best = None
    for i in range(nk):
        left_len = knots[i] - tau[i]
        right_len = tau[i + 1] - knots[i]
        if best is None or left_len > best[0] + 1e-15:
            best = (left_len, "left", i)
        if right_len > best[0] + 1e-15:
            best = (right_len, "right", i)
    d, side, istar = best
    p = tau[istar] if side == "left" else tau[istar + 1]
    C = omega.primitive(d - h, d + h) / (2.0 * h)

    def raw(u):
        return C - np.asarray(omega(np.abs(np.asarray(u) - p)), dtype=float)

    # windows covered by the raw profile (those adjacent to p)
    if side == "left":
        covered = [istar] if istar == 0 else [istar - 1, istar]
    else:
        covered = [istar] if istar == nk - 1 else [istar, istar + 1]

    window_fn: dict = {k: raw for k in covered}
    for k in range(covered[-1] + 1, nk):
        prev = window_fn[k - 1]
        t_prev, t_k = knots[k - 1], knots[k]
        window_fn[k] = (lambda f, s: (lambda u: f(s - np.asarray(u))))(prev, t_prev + t_k)
    for k in range(covered[0] - 1, -1, -1):
        nxt = window_fn[k + 1]
        t_k, t_next = knots[k], knots[k + 1]
        window_fn[k] = (lambda f, s: (lambda u: f(s - np.asarray(u))))(nxt, t_k + t_next)

    lo_raw = a if (side == "left" and istar == 0) else knots[covered[0]] - h
    hi_raw = b if (side == "right" and istar == nk - 1) else knots[covered[-1]] + h

    ts = np.linspace(a, b, n + 1)
    vals = np.empty_like(ts)
    for j, u in enumerate(ts):
        k = int(np.argmin(np.abs(knots - u)))
        if knots[k] - h <= u <= knots[k] + h:
            vals[j] = window_fn[k](u)
        elif lo_raw <= u <= hi_raw:
            vals[j] = raw(u)
        elif u < knots[0] - h:
            vals[j] = window_fn[0](knots[0] - h)
        elif u > knots[-1] + h:
            vals[j] = window_fn[nk - 1](knots[-1] + h)
        else:
            k = int(np.searchsorted(knots, u)) - 1  # gap between windows k, k+1
            vals[j] = window_fn[k](knots[k] + h)
    return gf.GridFunction(a, b, ls.REAL, vals)


def lower_extremal_integral(
    knots: Sequence[float], h: float, omega: Modulus, a: float, b: float, n: int = gf.DEFAULT_GRID
) -> gf.GridFunction:
    """Real function with vanishing window means whose integral reaches
    the optimal integral-recovery error (concave modulus)."""
    if not omega.concave:
        raise NonConcave("the integral lower bound requires a concave modulus")
    knots = np.asarray(knots, dtype=float)
    validate_knots(knots, h, a, b)
    nk = len(knots)
    length = b - a
    mu = 2.0 * nk * h / length
    half_cell = length / (2.0 * nk)
    if mu > 1.0 + 1e-12:
        raise KnotViolation("need h <= (b-a)/(2n)")
    mu = min(mu, 1.0)

    def y0(t):
        t = np.abs(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        m1 = t <= h
        out[m1] = -mu * np.asarray(omega((h - t[m1]) / mu), dtype=float)
        m2 = (t > h) & (t <= half_cell)
        if mu < 1.0:
            out[m2] = (1.0 - mu) * np.asarray(omega((t[m2] - h) / (1.0 - mu)), dtype=float)
            cap = (1.0 - mu) * float(omega((half_cell - h) / (1.0 - mu)))
        else:
            out[m2] = 0.0
            cap = 0.0
        out[t > half_cell] = cap
        return out

    C = mu * mu * omega.primitive(0.0, half_cell) / h
    ts = np.linspace(a, b, n + 1)
    nearest = knots[np.argmin(np.abs(ts[:, None] - knots[None, :]), axis=1)]
    vals = y0(ts - nearest) + C
    return gf.GridFunction(a, b, ls.REAL, vals)


# ---------------------------------------------------------------------------
# polyline interpolation on a partition


def _check_partition(partition: np.ndarray, a: Optional[float] = None, b: Optional[float] = None) -> np.ndarray:
    partition = np.asarray(partition, dtype=float)
    if np.any(np.diff(partition) <= 0):
        raise ValueError("partition nodes must be strictly increasing")
    if a is not None and (abs(partition[0] - a) > 1e-12 or abs(partition[-1] - b) > 1e-12):
        raise ValueError("partition must span [a, b]")
    return partition


def polyline(values: Sequence[ls.Element], partition: Sequence[float], n: int = gf.DEFAULT_GRID) -> gf.GridFunction:
    """Interpolating polygonal function through convex node values."""
    partition = _check_partition(np.asarray(partition, dtype=float))
    if len(values) != len(partition):
        raise ValueError("one value per partition node required")
    for v in values:
        if not ls.is_convex(v):
            raise ValueError("polyline interpolation requires convex node values")
    model = values[0].model
    a, b = float(partition[0]), float(partition[-1])
    ts = np.linspace(a, b, n + 1)
    if model == ls.REAL:
        ys = np.array([v.payload for v in values], dtype=float)
        return gf.GridFunction(a, b, ls.REAL, np.interp(ts, partition, ys))
    if model == ls.VECTOR:
        ys = np.array([v.payload for v in values], dtype=float)
        cols = [np.interp(ts, partition, ys[:, j]) for j in range(ys.shape[1])]
        return gf.GridFunction(a, b, ls.VECTOR, np.column_stack(cols))
    if model == ls.INTERVAL or model == ls.UNION:
        los = np.array([v.payload[0] if model == ls.INTERVAL else v.payload[0][0] for v in values])
        his = np.array([v.payload[1] if model == ls.INTERVAL else v.payload[0][1] for v in values])
        lo = np.interp(ts, partition, los)
        hi = np.interp(ts, partition, his)
        return gf.GridFunction(a, b, ls.INTERVAL, np.column_stack([lo, hi]))
    raise ValueError("max-space values are not convex")


def polyline_error(t: float, t_lo: float, t_hi: float, omega: Modulus) -> float:
    """Pointwise deviation bound at t inside the segment [t_lo, t_hi]."""
    if not (t_lo <= t <= t_hi):
        raise ValueError("t must lie in the segment")
    d = t_hi - t_lo
    return (t_hi - t) * (t - t_lo) / d ** 2 * omega.primitive(0.0, d)


def polyline_uniform_error(n: int, omega: Modulus, length: float) -> float:
    """Optimal identity-recovery error from n+1 uniform node values."""
    return 0.25 * omega.primitive(0.0, length / n)


def chain_bound(t: float, a: float, b: float, omega: Modulus) -> float:
    """Deviation bound of f(t) from the linear blend of f(a), f(b)."""
    return (b - t) * (t - a) / (b - a) ** 2 * omega.primitive(0.0, b - a)


# ---------------------------------------------------------------------------
# the node-vanishing slope construction (omega-spline)


def _spline_slope_fn(etas: np.ndarray, signs: np.ndarray, omega: Modulus) -> Callable:
    def g(u):
        u = np.asarray(u, dtype=float)
        d = np.min(np.abs(u[..., None] - etas[None, :]), axis=-1)
        idx = np.searchsorted(etas, u, side="left")
        s = signs[np.clip(idx, 0, len(signs) - 1)]
        return s * 0.5 * np.asarray(omega(2.0 * d), dtype=float)

    return g


def _spline_G(etas: np.ndarray, signs: np.ndarray, omega: Modulus, pts: np.ndarray, a: float) -> np.ndarray:
    """Exact cumulative integral of the slope function at given points."""

    def hprim(z: float) -> float:
        return math.copysign(0.25 * omega.primitive(0.0, 2.0 * abs(z)), z)

    mids = 0.5 * (etas[:-1] + etas[1:])
    breaks = np.unique(np.concatenate(([a], etas, mids, pts)))
    cum = 0.0
    table_x = [breaks[0]]
    table_v = [0.0]
    for x0, x1 in zip(breaks, breaks[1:]):
        mid = 0.5 * (x0 + x1)
        j = int(np.argmin(np.abs(etas - mid)))
        idx = int(np.searchsorted(etas, mid, side="left"))
        s = signs[min(max(idx, 0), len(signs) - 1)]
        cum += s * (hprim(x1 - etas[j]) - hprim(x0 - etas[j]))
        table_x.append(x1)
        table_v.append(cum)
    return np.interp(pts, np.asarray(table_x), np.asarray(table_v))


def omega_spline(
    partition: Sequence[float],
    omega: Modulus,
    n: int = gf.DEFAULT_GRID,
    max_iters: int = 10_000,
    residual_tol: float = 1e-7,
) -> gf.GridFunction:
    """Function in the derivative-bounded class vanishing at all partition
    nodes with sup norm >= (1/4) int_0^{(b-a)/n} w (equality for uniform
    partitions).

    The slope alternates in sign between break positions eta; for a
    uniform partition the cell midpoints solve the node conditions in
    closed form, otherwise a bounded coordinate-bisection search is run
    (n <= 6) and the residuals are verified post hoc.
    """
    if not omega.concave:
        raise NonConcave("the node-vanishing construction requires a concave modulus")
    partition = _check_partition(np.asarray(partition, dtype=float))
    a, b = float(partition[0]), float(partition[-1])
    m = len(partition) - 1
    signs = np.array([(-1.0) ** i for i in range(m + 1)])
    uniform = np.max(np.abs(np.diff(partition) - (b - a) / m)) <= 1e-12
    if uniform:
        etas = 0.5 * (partition[:-1] + partition[1:])
    else:
        if m > 6:
            raise SearchFailed("bounded search is limited to partitions with n <= 6")
        etas = _search_etas(partition, signs, omega, max_iters)
    resid = np.abs(_spline_G(etas, signs, omega, partition[1:], a))
    if np.max(resid) > residual_tol:
        raise SearchFailed(f"node residuals {np.max(resid):.2e} exceed {residual_tol}")
    ts = np.linspace(a, b, n + 1)
    return gf.GridFunction(a, b, ls.REAL, _spline_G(etas, signs, omega, ts, a))


def _search_etas(partition: np.ndarray, signs: np.ndarray, omega: Modulus, max_iters: int) -> np.ndarray:
    a, b = float(partition[0]), float(partition[-1])
    m = len(partition) - 1
    etas = 0.5 * (partition[:-1] + partition[1:]).copy()
    budget = max_iters
    for sweep in range(200):
        moved = 0.0
        for i in range(m):
            lo = a if i == 0 else etas[i - 1]
            hi = b if i == m - 1 else etas[i + 1]
            lo, hi = lo + 1e-12, hi - 1e-12
            target = partition[i + 1]

            def resid(x):
                trial = etas.copy()
                trial[i] = x
                return float(_spline_G(np.sort(trial), signs, omega, np.array([target]), a)[0])

            r_lo, r_hi = resid(lo), resid(hi)
            if r_lo == 0.0 or r_hi == 0.0 or r_lo * r_hi > 0.0:
                x_new = lo if abs(r_lo) < abs(r_hi) else hi
                # no sign change: nudge toward the better endpoint
                x_new = 0.5 * (etas[i] + x_new)
            else:
                x0, x1 = lo, hi
                f0 = r_lo
                for _ in range(60):
                    budget -= 1
                    if budget <= 0:
                        raise SearchFailed("iteration budget exhausted")
                    xm = 0.5 * (x0 + x1)
                    fm = resid(xm)
                    if f0 * fm <= 0.0:
                        x1 = xm
                    else:
                        x0, f0 = xm, fm
                x_new = 0.5 * (x0 + x1)
            moved = max(moved, abs(x_new - etas[i]))
            etas[i] = x_new
        if moved < 1e-13:
            break
    return np.sort(etas)


# ---------------------------------------------------------------------------
# derivative recovery


def polyline_derivative(
    values: Sequence[ls.Element], partition: Sequence[float], n: int = gf.DEFAULT_GRID
) -> gf.GridFunction:
    """Step-function derivative of the interpolating polygonal function:
    the per-segment Hukuhara difference quotient."""
    partition = _check_partition(np.asarray(partition, dtype=float))
    quotients = [
        ls.scale(1.0 / (t1 - t0), ls.hukuhara_diff(v1, v0))
        for (t0, t1, v0, v1) in zip(partition, partition[1:], values, values[1:])
    ]
    a, b = float(partition[0]), float(partition[-1])
    ts = np.linspace(a, b, n + 1)
    idx = np.clip(np.searchsorted(partition, ts, side="right") - 1, 0, len(quotients) - 1)
    return gf.from_values([quotients[i] for i in idx], a, b)


def derivative_error_bound(t: float, t_lo: float, t_hi: float, omega: Modulus) -> float:
    """Deviation bound of the derivative from the segment quotient at t."""
    return point_vs_mean_bound(t, t_lo, t_hi, omega)


def derivative_recovery_value(n: int, omega: Modulus, length: float) -> float:
    return n / length * omega.primitive(0.0, length / n)


def derivative_extremal(n: int, omega: Modulus, a: float, b: float, grid_n: int = gf.DEFAULT_GRID) -> gf.GridFunction:
    """Antiderivative of g0 - mean(g0), where g0 is the lower envelope of
    cones centered at the even-index uniform nodes; vanishes at every
    uniform node and its slope at a attains the recovery value."""
    length = b - a
    delta = length / n
    nodes = a + delta * np.arange(n + 1)
    mean = derivative_recovery_value(n, omega, length)

    def cumint_g0(t: float) -> float:
        # per cell, g0 is w(dist to the even end); each full cell carries I(0, delta)
        k = min(int((t - a) / delta), n - 1)
        acc = k * omega.primitive(0.0, delta)
        t0 = nodes[k]
        if k % 2 == 0:
            acc += omega.primitive(0.0, t - t0)
        else:
            acc += omega.primitive(nodes[k + 1] - t, delta)
        return acc

    ts = np.linspace(a, b, grid_n + 1)
    vals = np.array([cumint_g0(t) for t in ts]) - mean * (ts - a)
    return gf.GridFunction(a, b, ls.REAL, vals)


@dataclass(frozen=True)
class RecoveryReport:
    """Certification summary for one recovery problem."""

    problem: str
    theoretical: float
    empirical_upper: float
    lower_bound: float
    trials: int
    tolerance: float

    @property
    def sound(self) -> bool:
        return self.empirical_upper <= self.theoretical + self.tolerance

    @property
    def attained(self) -> bool:
        return self.lower_bound >= self.theoretical - self.tolerance

    def as_dict(self) -> dict:
        return {
            "problem": self.problem,
            "theoretical": self.theoretical,
            "empirical_upper": self.empirical_upper,
            "lower_bound": self.lower_bound,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "sound": self.sound,
            "attained": self.attained,
        }
