"""Closed-form sharp bounds for the deviation between two interval means
(and their point/symmetrized-pair specializations), with extremal
function generators.

All values are exact expressions in the modulus primitive
I(alpha, beta) = int_alpha^beta w; the two-interval extremal is produced
by gluing the per-hat extremals of the indicator-difference profile
rather than by per-case formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import gridfn as gf
from . import kscore as ks
from . import lspace as ls
from .modulus import Modulus

NESTED = "nested"
OVERLAP = "overlap"
DISJOINT = "disjoint"


@dataclass(frozen=True)
class TwoIntervalConfig:
    """Ordered pair of segments [a, b], [c, d] with a <= c (inputs are
    swapped into this normal form)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.b <= self.a or self.d <= self.c:
            raise ValueError("segments must have positive length")
        if self.a > self.c:
            raise ValueError("normal form requires a <= c; use two_interval_config")

    @property
    def M(self) -> float:
        return max(self.b - self.a, self.d - self.c)

    @property
    def m(self) -> float:
        return min(self.b - self.a, self.d - self.c)

    @property
    def case(self) -> str:
        if self.c >= self.b:
            return DISJOINT
        if self.d <= self.b:
            return NESTED
        return OVERLAP

    @property
    def span(self) -> Tuple[float, float]:
        return (self.a, max(self.b, self.d))


def two_interval_config(a: float, b: float, c: float, d: float) -> TwoIntervalConfig:
    if a > c:
        a, b, c, d = c, d, a, b
    return TwoIntervalConfig(float(a), float(b), float(c), float(d))


def two_interval_bound(cfg: TwoIntervalConfig, omega: Modulus) -> float:
    """Sharp bound for dist(mean of f over [a,b], mean over [c,d]) on the
    oscillation class of ``omega``; three closed-form cases that match
    continuously at the case boundaries."""
    M, m = cfg.M, cfg.m
    a, b, c, d = cfg.a, cfg.b, cfg.c, cfg.d
    I = omega.primitive
    if cfg.case == DISJOINT:
        return (I(c - b, d - a)) / (M + m)
    if cfg.case == NESTED:
        if M - m <= 1e-15:
            return 0.0  # identical segments
        q = M / (M - m)
        return (M - m) / M ** 2 * (I(0.0, q * (c - a)) + I(0.0, q * (b - d)))
    first = I(M * (b - c) / m, d - a) / (M + m)
    if M - m <= 1e-15:
        return first
    return first + (M - m) / M ** 2 * I(0.0, M * (b - c) / m)


def two_interval_weights(cfg: TwoIntervalConfig) -> Tuple[ks.StepWeight, ks.StepWeight]:
    lo, hi = cfg.span
    w1 = ks.indicator_weight(cfg.a, cfg.b, 1.0 / (cfg.b - cfg.a), domain=(lo, hi))
    w2 = ks.indicator_weight(cfg.c, cfg.d, 1.0 / (cfg.d - cfg.c), domain=(lo, hi))
    return w1, w2


def two_interval_extremal(cfg: TwoIntervalConfig, omega: Modulus, n: int = gf.DEFAULT_GRID) -> gf.GridFunction:
    """Real extremal attaining the two-interval bound (concave modulus),
    built by gluing the per-hat extremals of the indicator difference."""
    w1, w2 = two_interval_weights(cfg)
    decomp = ks.decompose_weights(w1, w2)
    return ks.glue_extremal(decomp, omega, n=n)


def symmetric_bound(a: float, b: float, c: float, d: float, omega: Modulus) -> float:
    """Concentric case: sharp bound for
    dist(int_a^b f, ((b-a)/(d-c)) int_c^d f) when the midpoints agree."""
    if abs((c + d) - (a + b)) > 1e-12:
        raise ValueError("segments must share their midpoint")
    if c < a - 1e-12 or d > b + 1e-12:
        raise ValueError("inner segment must lie inside the outer one")
    return 4.0 * (c - a) / (b - a) * omega.primitive(0.0, 0.5 * (b - a))


def point_vs_mean_bound(t: float, c: float, d: float, omega: Modulus) -> float:
    """Sharp bound for dist(P f(t), mean of f over [c, d]), any modulus."""
    if d <= c:
        raise ValueError("segment [c, d] must have positive length")
    I = omega.primitive
    if t <= c:
        return I(c - t, d - t) / (d - c)
    if t >= d:
        return I(t - d, t - c) / (d - c)
    return (I(0.0, t - c) + I(0.0, d - t)) / (d - c)


def point_vs_mean_extremal(
    t: float, omega: Modulus, a: float, b: float, n: int = gf.DEFAULT_GRID
) -> gf.GridFunction:
    """The cone u -> w(|u - t|); attains the point-vs-mean bound for any
    modulus once lifted by a unit convex element."""
    ts = np.linspace(a, b, n + 1)
    return gf.GridFunction(a, b, ls.REAL, np.asarray(omega(np.abs(ts - t)), dtype=float))


def symmetrized_pair_bound(t: float, a: float, b: float, omega: Modulus) -> float:
    """Sharp bound for dist of the average of P f(t) and P f(a+b-t) from
    the mean of f over [a, b], for t in [a, (a+b)/2)."""
    if not (a <= t < 0.5 * (a + b)):
        raise ValueError("t must lie in [a, (a+b)/2)")
    I = omega.primitive
    return 2.0 / (b - a) * (I(0.0, t - a) + I(0.0, 0.5 * (a + b) - t))


def symmetrized_pair_extremal(
    t: float, a: float, b: float, omega: Modulus, n: int = gf.DEFAULT_GRID
) -> gf.GridFunction:
    """min of the two cones centered at t and at its mirror point a+b-t."""
    ts = np.linspace(a, b, n + 1)
    vals = np.minimum(
        np.asarray(omega(np.abs(ts - t)), dtype=float),
        np.asarray(omega(np.abs(ts - (a + b - t))), dtype=float),
    )
    return gf.GridFunction(a, b, ls.REAL, vals)
