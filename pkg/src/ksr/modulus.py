"""Validated moduli of continuity.

Three closed-form families are supported:

* ``PowerModulus``: w(t) = K t^alpha with K > 0, 0 < alpha <= 1,
* ``PiecewiseLinearConcave``: a concave nondecreasing polyline through
  (0, 0) with nonincreasing slopes, extended by its last slope,
* ``MinLinearConstant``: w(t) = min(K t, C).

All evaluation, a.e. differentiation and the primitive
I(alpha, beta) = int_alpha^beta w(s) ds are exact closed forms, so that
bound computations downstream carry no quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidModulus, UnboundedDerivative

__all__ = [
    "Modulus",
    "PowerModulus",
    "PiecewiseLinearConcave",
    "MinLinearConstant",
    "power",
    "plconcave",
    "minlin",
    "parse_modulus",
    "validate",
    "ValidationReport",
]


def _nonneg(t):
    """Validate arguments; float dust barely below zero is clamped."""
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-12):
        raise ValueError("modulus arguments must be >= 0")
    return np.maximum(t, 0.0)


class Modulus:
    """Common interface; concrete families override the four primitives."""

    concave: bool = True

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t: float) -> float:
        """Right derivative (a.e. derivative; right value at kinks)."""
        raise NotImplementedError

    def primitive(self, alpha: float, beta: float) -> float:
        """I(alpha, beta) = int_alpha^beta w(s) ds, exact."""
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()!r})"


@dataclass(frozen=True, repr=False)
class PowerModulus(Modulus):
    K: float = 1.0
    alpha: float = 1.0

    @property
    def concave(self) -> bool:
        return 0.0 < self.alpha <= 1.0

    def __call__(self, t):
        t = _nonneg(t)
        out = self.K * np.power(t, self.alpha)
        return float(out) if out.ndim == 0 else out

    def derivative(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("modulus derivative requires t >= 0")
        if self.alpha == 1.0:
            return self.K
        if t == 0.0:
            raise UnboundedDerivative("w'(0+) is infinite for alpha < 1")
        return self.K * self.alpha * t ** (self.alpha - 1.0)

    def primitive(self, alpha: float, beta: float) -> float:
        _check_range(alpha, beta)
        p = self.alpha + 1.0
        return self.K * (beta ** p - alpha ** p) / p

    def spec(self) -> str:
        return f"power:K={_fmt(self.K)},alpha={_fmt(self.alpha)}"


@dataclass(frozen=True, repr=False)
class PiecewiseLinearConcave(Modulus):
    #: polyline knots ((t0, v0), ..., (tm, vm)); t0 = 0, v0 = 0
    points: Tuple[Tuple[float, float], ...]

    @property
    def concave(self) -> bool:
        return all(s2 <= s1 + 1e-12 for s1, s2 in zip(self._slopes(), self._slopes()[1:]))

    def _slopes(self):
        pts = self.points
        return tuple(
            (v2 - v1) / (t2 - t1) for (t1, v1), (t2, v2) in zip(pts, pts[1:])
        )

    def __call__(self, t):
        ts = np.array([p[0] for p in self.points])
        vs = np.array([p[1] for p in self.points])
        t = _nonneg(t)
        last_slope = self._slopes()[-1] if len(self.points) > 1 else 0.0
        out = np.where(
            t <= ts[-1],
            np.interp(t, ts, vs),
            vs[-1] + last_slope * (t - ts[-1]),
        )
        return float(out) if out.ndim == 0 else out

    def derivative(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("modulus derivative requires t >= 0")
        slopes = self._slopes()
        # right derivative: at a knot, the slope of the next piece applies
        for i, (tk, _) in enumerate(self.points[1:], start=1):
            if t < tk:
                return slopes[i - 1]
        return slopes[-1]

    def primitive(self, alpha: float, beta: float) -> float:
        _check_range(alpha, beta)

        def antider(t: float) -> float:
            acc = 0.0
            pts = self.points
            for (t1, v1), (t2, v2) in zip(pts, pts[1:]):
                if t <= t1:
                    return acc
                hi = min(t, t2)
                s = (v2 - v1) / (t2 - t1)
                acc += v1 * (hi - t1) + 0.5 * s * (hi - t1) ** 2
            t_last, v_last = pts[-1]
            if t > t_last:
                s = self._slopes()[-1]
                acc += v_last * (t - t_last) + 0.5 * s * (t - t_last) ** 2
            return acc

        return antider(beta) - antider(alpha)

    def spec(self) -> str:
        return "plconcave:" + ";".join(f"{_fmt(t)},{_fmt(v)}" for t, v in self.points)


@dataclass(frozen=True, repr=False)
class MinLinearConstant(Modulus):
    K: float = 1.0
    C: float = 1.0

    concave = True

    @property
    def knee(self) -> float:
        return self.C / self.K

    def __call__(self, t):
        t = _nonneg(t)
        out = np.minimum(self.K * t, self.C)
        return float(out) if out.ndim == 0 else out

    def derivative(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("modulus derivative requires t >= 0")
        return self.K if t < self.knee else 0.0

    def primitive(self, alpha: float, beta: float) -> float:
        _check_range(alpha, beta)

        def antider(t: float) -> float:
            if t <= self.knee:
                return 0.5 * self.K * t * t
            return 0.5 * self.K * self.knee ** 2 + self.C * (t - self.knee)

        return antider(beta) - antider(alpha)

    def spec(self) -> str:
        return f"minlin:K={_fmt(self.K)},C={_fmt(self.C)}"


def _check_range(alpha: float, beta: float):
    if alpha < 0.0 or beta < alpha:
        raise ValueError(f"primitive requires 0 <= alpha <= beta, got ({alpha}, {beta})")


def _fmt(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str = ""
    witness: Optional[Tuple[float, float]] = None


def validate(omega: Modulus, t_max: Optional[float] = None, grid_n: int = 64) -> ValidationReport:
    """Check w(0) = 0, monotonicity and subadditivity on a validation grid.

    Subadditivity is checked as w(s + t) <= w(s) + w(t) + 1e-10 over all
    grid pairs; the first violating pair is reported as a witness.
    Concave families are additionally checked for a nonincreasing
    a.e. derivative.
    """
    if isinstance(omega, PowerModulus) and (omega.K <= 0.0 or omega.alpha <= 0.0):
        return ValidationReport(False, "power family requires K > 0 and alpha > 0")
    if isinstance(omega, MinLinearConstant) and (omega.K <= 0.0 or omega.C <= 0.0):
        return ValidationReport(False, "min-linear family requires K > 0 and C > 0")
    if isinstance(omega, PiecewiseLinearConcave):
        pts = omega.points
        if pts[0] != (0.0, 0.0):
            return ValidationReport(False, "polyline must start at (0, 0)")
        if any(t2 <= t1 for (t1, _), (t2, _) in zip(pts, pts[1:])):
            return ValidationReport(False, "polyline knots must be strictly increasing")
        if any(s < -1e-12 for s in omega._slopes()):
            return ValidationReport(False, "polyline must be nondecreasing")

    if t_max is None:
        t_max = _default_scale(omega)
    ts = np.linspace(0.0, t_max, grid_n)
    vals = np.asarray(omega(ts), dtype=float)

    if abs(float(omega(0.0))) > 1e-12:
        return ValidationReport(False, "w(0) != 0")
    if np.any(np.diff(vals) < -1e-10):
        i = int(np.argmax(np.diff(vals) < -1e-10))
        return ValidationReport(False, "not nondecreasing", (float(ts[i]), float(ts[i + 1])))

    half = ts[ts <= t_max / 2.0 + 1e-15]
    vh = np.asarray(omega(half), dtype=float)
    sums = vh[:, None] + vh[None, :]
    direct = np.asarray(omega(half[:, None] + half[None, :]), dtype=float)
    bad = direct > sums + 1e-10
    if np.any(bad):
        i, j = map(int, np.argwhere(bad)[0])
        return ValidationReport(False, "not subadditive", (float(half[i]), float(half[j])))

    if omega.concave:
        pos = ts[ts > 1e-9]
        dv = np.array([omega.derivative(float(t)) for t in pos])
        if np.any(np.diff(dv) > 1e-9):
            i = int(np.argmax(np.diff(dv) > 1e-9))
            return ValidationReport(
                False, "declared concave but derivative increases", (float(pos[i]), float(pos[i + 1]))
            )
    return ValidationReport(True)


def _default_scale(omega: Modulus) -> float:
    if isinstance(omega, PiecewiseLinearConcave):
        return max(2.0, 2.0 * omega.points[-1][0])
    if isinstance(omega, MinLinearConstant):
        return max(2.0, 2.0 * omega.knee)
    return 2.0


def _validated(omega: Modulus) -> Modulus:
    report = validate(omega)
    if not report.ok:
        raise InvalidModulus(f"{report.reason}" + (f", witness {report.witness}" if report.witness else ""))
    return omega


def power(K: float = 1.0, alpha: float = 1.0) -> PowerModulus:
    # alpha > 1 is rejected by the generic validator with a witness pair
    return _validated(PowerModulus(float(K), float(alpha)))


def plconcave(points) -> PiecewiseLinearConcave:
    pts = tuple((float(t), float(v)) for t, v in points)
    return _validated(PiecewiseLinearConcave(pts))


def minlin(K: float = 1.0, C: float = 1.0) -> MinLinearConstant:
    return _validated(MinLinearConstant(float(K), float(C)))


def parse_modulus(text: str) -> Modulus:
    """Parse CLI/config syntax.

    ``power:K=1,alpha=0.5`` | ``plconcave:0,0;0.5,0.4;1,0.6`` |
    ``minlin:K=1,C=0.5``
    """
    text = text.strip()
    if ":" not in text:
        raise InvalidModulus(f"malformed modulus spec {text!r}")
    family, body = text.split(":", 1)
    family = family.strip().lower()
    if family == "power":
        kv = _parse_kv(body)
        return power(K=kv.get("k", 1.0), alpha=kv.get("alpha", 1.0))
    if family == "minlin":
        kv = _parse_kv(body)
        return minlin(K=kv.get("k", 1.0), C=kv.get("c", 1.0))
    if family == "plconcave":
        pts = []
        for chunk in body.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            t, v = chunk.split(",")
            pts.append((float(t), float(v)))
        return plconcave(pts)
    raise InvalidModulus(f"unknown modulus family {family!r}")


def _parse_kv(body: str) -> dict:
    out = {}
    for chunk in body.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise InvalidModulus(f"malformed parameter {chunk!r}")
        k, v = chunk.split("=", 1)
        out[k.strip().lower()] = float(v)
    return out
