"""Speed measures: fully supported Radon measures on the state interval.

A measure is carried by its cumulative function (normalized to vanish at the
base point) plus an optional finite list of atoms.  Cumulative functions are
closed-form for the whitelisted densities and for Lebesgue-Stieltjes
measures of a monotone profile composed with a scale function; one density
("rational") exercises the adaptive-quadrature fallback.
"""
from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

import numpy as np

from .interval import INF, Interval, REAL_LINE
from .scale import ScaleFunction, certified_limit


class SpeedMeasure:
    """Radon measure m with full support; mass queries use open intervals."""

    def __init__(self, interval: Interval, cum: Callable[[float], float],
                 atoms: Sequence[tuple[float, float]] = (), name: str = "custom"):
        self.interval = interval
        self._cum = cum
        self.atoms = tuple(sorted((float(x), float(w)) for x, w in atoms))
        for x, w in self.atoms:
            if w <= 0:
                raise ValueError(f"atom at {x} must have positive mass")
        self.name = name

    def mass(self, c: float, d: float) -> float:
        """m((c, d)); endpoints may be infinite, the result may be +inf.

        Atoms strictly inside (c, d) contribute; atoms at the endpoints do
        not (open interval).
        """
        if d <= c:
            return 0.0
        c = max(c, self.interval.a)
        d = min(d, self.interval.b)
        if d <= c:
            return 0.0
        smooth = self._cum(d) - self._cum(c)
        atom = sum(w for x, w in self.atoms if c < x < d)
        return smooth + atom

    def cumulative(self, x: float) -> float:
        """M(x) = m((e, x]) for x >= e and -m((x, e]) below; M(e) = 0."""
        e = self.interval.e
        base = self._cum(x) - self._cum(e)
        if x >= e:
            return base + sum(w for loc, w in self.atoms if e < loc <= x)
        return base - sum(w for loc, w in self.atoms if x < loc <= e)

    def one_sided_masses(self) -> tuple[float, float]:
        """(m((a, e]), m((e, b))), infinite values exact."""
        e = self.interval.e
        return self.mass(self.interval.a, e), self.mass(e, self.interval.b)

    def is_finite(self) -> bool:
        lo, hi = self.one_sided_masses()
        return math.isfinite(lo) and math.isfinite(hi)

    def with_atoms(self, atoms: Sequence[tuple[float, float]]) -> "SpeedMeasure":
        return SpeedMeasure(self.interval, self._cum, tuple(self.atoms) + tuple(atoms),
                            self.name)

    def __repr__(self):
        return f"SpeedMeasure({self.name}, atoms={len(self.atoms)})"


# ---------------------------------------------------------------------------
# whitelisted measures

def lebesgue(interval: Interval = REAL_LINE) -> SpeedMeasure:
    return SpeedMeasure(interval, lambda x: x, name="lebesgue")


def cauchy(interval: Interval = REAL_LINE) -> SpeedMeasure:
    """Density 1/(1+x^2); total mass pi."""
    return SpeedMeasure(interval, math.atan, name="cauchy")


def gaussian(interval: Interval = REAL_LINE) -> SpeedMeasure:
    """Density exp(-x^2); total mass sqrt(pi)."""
    from scipy.special import erf

    half = math.sqrt(math.pi) / 2.0
    def cum(x: float) -> float:
        if math.isinf(x):
            return half if x > 0 else -half
        return half * float(erf(x))
    return SpeedMeasure(interval, cum, name="gaussian")


def rational(interval: Interval = REAL_LINE) -> SpeedMeasure:
    """Density 1/(1+x^4), evaluated by adaptive quadrature.

    Exercises the quadrature path; end limits go through the doubling
    certification.
    """
    from scipy.integrate import quad

    dens = lambda t: 1.0 / (1.0 + t ** 4)
    def cum(x: float) -> float:
        if math.isinf(x):
            sign = 1.0 if x > 0 else -1.0
            tail = certified_limit(lambda t: quad(dens, 0.0, t, limit=200)[0],
                                   1.0, INF, "rational density tail")
            return sign * tail
        if x >= 0:
            return quad(dens, 0.0, x, limit=200)[0]
        return -quad(dens, x, 0.0, limit=200)[0]
    return SpeedMeasure(interval, cum, name="rational")


class IncreasingProfile:
    """Strictly increasing profile F on an open range, diverging at its ends.

    Used for Lebesgue-Stieltjes measures dF(s(x)).  The default shape is a
    power blow-up of exponent ``alpha`` near each end of the range, joined
    affinely on the middle third, offset so F(0) = 0.
    """

    def __init__(self, lo: float, hi: float, alpha: float = 0.5):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < 0.0 < hi):
            raise ValueError("profile range must be finite and contain 0")
        if not 0.0 < alpha < 1.0:
            raise ValueError("blow-up exponent must lie in (0, 1)")
        self.lo, self.hi, self.alpha = lo, hi, alpha
        width = hi - lo
        self.y_lo = lo + width / 3.0
        self.y_hi = hi - width / 3.0
        self._offset = 0.0
        self._offset = self._raw(0.0)

    @property
    def third(self) -> float:
        return (self.hi - self.lo) / 3.0

    def _raw(self, y: float) -> float:
        if y <= self.lo:
            return -INF
        if y >= self.hi:
            return INF
        if y < self.y_lo:
            return self.value_from_lower_gap(y - self.lo) + self._offset
        if y > self.y_hi:
            return self.value_from_upper_gap(self.hi - y) + self._offset
        return y

    def value_from_lower_gap(self, gap: float) -> float:
        """F at distance ``gap`` above the lower range end (cancellation-free)."""
        a = self.alpha
        if gap <= 0.0:
            return -INF
        if gap >= self.third:
            return self.lo + gap - self._offset
        return self.y_lo + (self.third ** (-a) - gap ** (-a)) - self._offset

    def value_from_upper_gap(self, gap: float) -> float:
        """F at distance ``gap`` below the upper range end."""
        a = self.alpha
        if gap <= 0.0:
            return INF
        if gap >= self.third:
            return self.hi - gap - self._offset
        return self.y_hi + (gap ** (-a) - self.third ** (-a)) - self._offset

    def __call__(self, y: float) -> float:
        v = self._raw(y)
        return v - self._offset if math.isfinite(v) else v

    def abs_integral_lower(self, upto: float = 0.0) -> float:
        """Integral of |F| from the lower range end to ``upto`` (quadrature)."""
        from scipy.integrate import quad

        pts = [p for p in (self.y_lo, self.y_hi) if self.lo < p < upto]
        val, _ = quad(lambda y: abs(self(y)), self.lo, upto,
                      points=pts or None, limit=400)
        return val


def stieltjes_of_scale(scale: ScaleFunction, alpha: float = 0.5,
                       profile: Optional[IncreasingProfile] = None) -> SpeedMeasure:
    """Lebesgue-Stieltjes measure of F composed with the scale function.

    F blows up at the ends of the scale's range, so both one-sided masses
    are infinite while the measure stays Radon on the open interval.
    """
    lo, hi = scale.limits
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("stieltjes composition needs a scale with finite range")
    prof = profile or IncreasingProfile(lo, hi, alpha)
    a, b = scale.interval.a, scale.interval.b
    third = prof.third

    def cum(x: float) -> float:
        # evaluate from the nearer range end: one-sided scale tails are sums
        # of small positive cell masses, so no cancellation near the ends
        if math.isinf(x):
            return -INF if x < 0 else INF
        gap_lo = scale.increment(a, x)
        if gap_lo < third:
            return prof.value_from_lower_gap(gap_lo)
        gap_hi = scale.increment(x, b)
        if gap_hi < third:
            return prof.value_from_upper_gap(gap_hi)
        return prof(scale(x))

    m = SpeedMeasure(scale.interval, cum, name=f"stieltjes(alpha={alpha})")
    m.profile = prof
    m.base_scale = scale
    return m


def measure_of(m: SpeedMeasure, c: float, d: float) -> float:
    return m.mass(c, d)


def speeds_agree(m1: SpeedMeasure, m2: SpeedMeasure,
                 probes: int = 12, rtol: float = 1e-9) -> bool:
    """Sampled equality of two measures on a probe grid."""
    if m1 is m2:
        return True
    if m1.interval != m2.interval:
        return False
    lo, hi = m1.interval.clip_window(8.0)
    xs = np.linspace(lo, hi, probes + 1)
    for c, d in zip(xs[:-1], xs[1:]):
        a, b = m1.mass(c, d), m2.mass(c, d)
        if not math.isclose(a, b, rel_tol=rtol, abs_tol=1e-12):
            return False
    return True
