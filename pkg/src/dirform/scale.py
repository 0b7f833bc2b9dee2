"""Scale functions: strictly increasing continuous coordinates on an interval.

A scale function is represented through its density with respect to the
natural coordinate, s(x) = integral from e to x of the density.  Three density
kinds are supported: the identity (natural scale), the indicator of a
characteristic set (regular-subspace scales), and nonnegative piecewise-smooth
densities.  Value limits at the interval ends are certified finite or
infinite with a deterministic doubling scheme.
"""
from __future__ import annotations

import math
from functools import cached_property
from typing import Callable, Optional, Protocol, Sequence

from .errors import NotConverged, NotHomeomorphism, OutOfDomain
from .interval import INF, Interval

# Divergence certification policy: a monotone limit over doubling cut points
# is declared infinite once the partial value exceeds DIVERGENCE_CAP or still
# grows by more than CONVERGENCE_ATOL after MAX_DOUBLINGS; it is declared
# finite when successive increments fall below CONVERGENCE_ATOL.
DIVERGENCE_CAP = 1e9
CONVERGENCE_ATOL = 1e-12
MAX_DOUBLINGS = 60


class MeasureLike(Protocol):
    """Anything exposing interval measure with extended-real endpoints."""

    def measure(self, c: float, d: float) -> float: ...


def certified_limit(partial: Callable[[float], float], start: float,
                    toward: float, what: str = "limit") -> float:
    """Certify lim of a nondecreasing partial(x) as x runs toward a boundary.

    `partial(x)` must be nondecreasing as x moves from `start` toward
    `toward` (which may be +-inf).  Returns the finite limit or +inf.
    """
    prev = partial(start)
    x = start
    for _ in range(MAX_DOUBLINGS):
        x = _double_toward(x, start, toward)
        cur = partial(x)
        if math.isinf(cur) or cur > DIVERGENCE_CAP:
            return INF
        inc = cur - prev
        if inc < 0:
            raise NotConverged(f"{what}: partial values not monotone")
        if inc <= CONVERGENCE_ATOL:
            return cur
        prev = cur
    # still growing after the full budget: declared infinite per policy
    return INF


def _double_toward(x: float, start: float, toward: float) -> float:
    if math.isinf(toward):
        step = max(1.0, abs(x - start))
        return x + step if toward > 0 else x - step
    return 0.5 * (x + toward)


# ---------------------------------------------------------------------------
# densities

class IdentityDensity:
    """Density 1: s is the natural coordinate shifted to vanish at e."""

    kind = "identity"

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        return d - c

    def density_range(self, c: float, d: float) -> tuple[float, float]:
        return 1.0, 1.0


class SetIndicatorDensity:
    """Density 1_G for a characteristic set G."""

    kind = "set_indicator"

    def __init__(self, charset: MeasureLike):
        self.charset = charset

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        return self.charset.measure(c, d)


class SmoothDensity:
    """Nonnegative piecewise-smooth density with optional antiderivative.

    Without an antiderivative, interval masses fall back to adaptive
    quadrature and end limits to the certification scheme.
    """

    kind = "smooth"

    def __init__(self, fn: Callable[[float], float],
                 antiderivative: Optional[Callable[[float], float]] = None,
                 knots: Sequence[float] = ()):
        self.fn = fn
        self.antiderivative = antiderivative
        self.knots = tuple(knots)

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        if self.antiderivative is not None:
            return self.antiderivative(d) - self.antiderivative(c)
        return self._quad(c, d)

    def _quad(self, c: float, d: float) -> float:
        from scipy.integrate import quad

        if math.isinf(c) or math.isinf(d):
            # improper integral: certify by doubling on the unbounded side(s)
            lo = c if math.isfinite(c) else None
            hi = d if math.isfinite(d) else None
            anchor = 0.0
            if lo is None and hi is None:
                return (certified_limit(lambda t: self._quad(t, anchor), anchor - 1.0, -INF)
                        + certified_limit(lambda t: self._quad(anchor, t), anchor + 1.0, INF))
            if lo is None:
                return certified_limit(lambda t: self._quad(t, d), d - 1.0, -INF)
            return certified_limit(lambda t: self._quad(c, t), c + 1.0, INF)
        pts = [k for k in self.knots if c < k < d]
        val, _ = quad(self.fn, c, d, points=pts or None, limit=200)
        return val


# ---------------------------------------------------------------------------

class ScaleFunction:
    """Strictly increasing continuous coordinate s with s(e) = 0."""

    def __init__(self, interval: Interval, density, name: str = ""):
        self.interval = interval
        self.density = density
        self.name = name or density.kind

    def __call__(self, x: float) -> float:
        self.interval.require(x)
        return self.increment(self.interval.e, x)

    def increment(self, c: float, d: float) -> float:
        """Signed scale distance s(d) - s(c); endpoints may be infinite."""
        if c == d:
            return 0.0
        if c < d:
            return self.density.measure(c, d)
        return -self.density.measure(d, c)

    @cached_property
    def limits(self) -> tuple[float, float]:
        """(s(a+), s(b-)); infinite values certified by the doubling policy."""
        return (-self._one_sided(lower=True), self._one_sided(lower=False))

    def _one_sided(self, lower: bool) -> float:
        e = self.interval.e
        end = self.interval.a if lower else self.interval.b
        if lower:
            return self.density.measure(end, e)
        return self.density.measure(e, end)

    @property
    def image(self) -> Interval:
        """J = s(I) as an open interval containing 0."""
        lo, hi = self.limits
        return Interval(lo, hi, 0.0)

    def invert(self, y: float, lo: Optional[float] = None,
               hi: Optional[float] = None) -> float:
        """Monotone bisection solve of s(x) = y on a finite bracket."""
        slo, shi = self.limits
        if not slo < y < shi:
            raise OutOfDomain(f"y={y} outside scale range ({slo}, {shi})")
        if lo is None or hi is None:
            lo0, hi0 = self._bracket(y)
            lo = lo0 if lo is None else lo
            hi = hi0 if hi is None else hi
        span = max(1.0, abs(lo), abs(hi))
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi or hi - lo <= 1e-14 * span:
                break
            if self(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def _bracket(self, y: float) -> tuple[float, float]:
        # bisection only evaluates interior midpoints, so finite endpoints
        # are themselves valid bracket ends
        e = self.interval.e
        if y == 0.0:
            return e - 1e-12, e + 1e-12
        lo, hi = e, e
        if y < 0:
            lo = self.interval.a
            if math.isinf(lo):
                lo = e - 1.0
                while self(lo) > y:
                    lo = e - 2 * (e - lo)
        else:
            hi = self.interval.b
            if math.isinf(hi):
                hi = e + 1.0
                while self(hi) < y:
                    hi = e + 2 * (hi - e)
        return lo, hi

    def require_homeomorphism(self, probes: int = 64) -> None:
        """Reject maps with flat segments (sampled strict-increase check)."""
        lo, hi = self.interval.clip_window(16.0)
        step = (hi - lo) / probes
        for i in range(probes):
            if self.increment(lo + i * step, lo + (i + 1) * step) <= 0.0:
                raise NotHomeomorphism(
                    f"flat segment near [{lo + i * step}, {lo + (i + 1) * step}]")

    def __repr__(self):
        return f"ScaleFunction({self.name}, e={self.interval.e})"


def natural_scale(interval: Interval) -> ScaleFunction:
    return ScaleFunction(interval, IdentityDensity(), "natural")


def eval_scale(s: ScaleFunction, x: float) -> float:
    return s(x)


def scale_limits(s: ScaleFunction) -> tuple[float, float]:
    return s.limits
