"""Internal piecewise-linear (polyline) helpers.

A polyline is a pair of 1-D arrays ``(xs, ys)`` with ``xs`` strictly
increasing; the function is linear between consecutive breakpoints.
All routines here are exact for polylines (no quadrature).
"""

from __future__ import annotations

import numpy as np


def poly_eval(xs: np.ndarray, ys: np.ndarray, t) -> np.ndarray:
    return np.interp(t, xs, ys)


def poly_integral(xs: np.ndarray, ys: np.ndarray, c: float | None = None, d: float | None = None) -> float:
    """Exact integral of the polyline over [c, d] (defaults to full range)."""
    a, b = float(xs[0]), float(xs[-1])
    c = a if c is None else float(c)
    d = b if d is None else float(d)
    if not (a - 1e-12 <= c <= d <= b + 1e-12):
        raise ValueError(f"integration range [{c}, {d}] outside [{a}, {b}]")
    c, d = max(c, a), min(d, b)
    if d <= c:
        return 0.0
    inner = (xs > c) & (xs < d)
    pts = np.concatenate(([c], xs[inner], [d]))
    vals = np.interp(pts, xs, ys)
    return float(np.trapezoid(vals, pts))


def poly_cumint(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Values of t -> int_{xs[0]}^t at every breakpoint."""
    seg = 0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)
    return np.concatenate(([0.0], np.cumsum(seg)))


def merge_breakpoints(*xss, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    allx = np.unique(np.concatenate([np.asarray(x, dtype=float) for x in xss]))
    if lo is not None or hi is not None:
        lo = allx[0] if lo is None else lo
        hi = allx[-1] if hi is None else hi
        allx = allx[(allx >= lo - 1e-15) & (allx <= hi + 1e-15)]
    # collapse breakpoints closer than float noise
    keep = [0]
    for i in range(1, len(allx)):
        if allx[i] - allx[keep[-1]] > 1e-13 * max(1.0, abs(allx[i])):
            keep.append(i)
    return allx[keep]


def insert_zero_crossings(xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Add breakpoints (with value exactly 0) where the polyline crosses 0."""
    out_x = [xs[0]]
    out_y = [ys[0]]
    for i in range(len(xs) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if (y0 > 0.0 > y1) or (y0 < 0.0 < y1):
            xc = xs[i] + (xs[i + 1] - xs[i]) * (0.0 - y0) / (y1 - y0)
            if xs[i] < xc < xs[i + 1]:
                out_x.append(xc)
                out_y.append(0.0)
        out_x.append(xs[i + 1])
        out_y.append(y1)
    return np.asarray(out_x), np.asarray(out_y)


def decreasing_rearrangement(xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact nonincreasing rearrangement of a nonnegative polyline.

    Returns a polyline on [0, xs[-1] - xs[0]] equimeasurable with the
    input.  The distribution function m(y) = mes{f > y} is piecewise
    linear between consecutive breakpoint values of f (with jumps at
    plateau levels), so its generalized inverse is again a polyline whose
    knots sit at the measures of the superlevel sets, with flat pieces of
    length mes{f = v} at each plateau level v.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(ys < -1e-12):
        raise ValueError("rearrangement requires a nonnegative polyline")
    ys = np.maximum(ys, 0.0)
    total = float(xs[-1] - xs[0])
    dx = np.diff(xs)
    ylo = np.minimum(ys[:-1], ys[1:])
    yhi = np.maximum(ys[:-1], ys[1:])
    flat = yhi - ylo <= 0.0

    def mes_above(y: float) -> float:
        cross = (~flat) & (yhi > y)
        part = np.where(ylo[cross] >= y, 1.0, (yhi[cross] - y) / (yhi[cross] - ylo[cross]))
        return float(np.sum(dx[cross] * part) + np.sum(dx[flat & (ylo > y)]))

    def mes_at(y: float) -> float:
        return float(np.sum(dx[flat & (ylo == y)]))

    r_x: list[float] = []
    r_y: list[float] = []
    for v in np.unique(ys)[::-1]:  # descending levels
        above = mes_above(v)
        at = mes_at(v)
        for x in (above, above + at):
            if not r_x or x > r_x[-1] + 1e-15:
                r_x.append(x)
                r_y.append(float(v))
    if not r_x or r_x[0] > 0.0:
        r_x.insert(0, 0.0)
        r_y.insert(0, float(np.max(ys)))
    if r_x[-1] < total - 1e-15:
        r_x.append(total)
        r_y.append(float(np.min(ys)))
    return np.asarray(r_x), np.asarray(r_y)
