"""Boundary classification for a scale/speed pair.

A side is approachable when the scale limit there is finite, regular when in
addition the measure is finite near the boundary, and approachable in finite
time when the integral of m((x, c)) against the scale is finite.  That
integral is evaluated with certified two-sided brackets: on a piece [u, v]
the integrand is monotone, so

    m((v, c)) * ds([u, v])  <=  contribution  <=  m((u, c)) * ds([u, v])

and pieces are split until the enclosure is tight.  Rings of pieces double
toward the boundary under the same policy as scale limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .interval import INF
from .scale import (CONVERGENCE_ATOL, DIVERGENCE_CAP, MAX_DOUBLINGS,
                    ScaleFunction)
from .speed import SpeedMeasure


class Side(Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class BoundaryClassification:
    side: Side
    s_approachable: bool
    s_regular: bool
    finite_time_approachable: bool
    feller_value: float

    def __post_init__(self):
        # structural sanity: regular boundaries are approachable, and
        # approachable in finite time
        assert not self.s_regular or self.s_approachable
        assert not self.s_regular or self.finite_time_approachable


def boundary_classify(scale: ScaleFunction, speed: SpeedMeasure, side: Side,
                      cut: float | None = None) -> BoundaryClassification:
    interval = scale.interval
    cut = interval.e if cut is None else interval.require(cut)
    slo, shi = scale.limits
    approachable = math.isfinite(slo) if side is Side.LOWER else math.isfinite(shi)
    if side is Side.LOWER:
        nearby_mass = speed.mass(interval.a, cut)
    else:
        nearby_mass = speed.mass(cut, interval.b)
    regular = approachable and math.isfinite(nearby_mass)
    feller = feller_integral(scale, speed, side, cut)
    return BoundaryClassification(
        side=side,
        s_approachable=approachable,
        s_regular=regular,
        finite_time_approachable=math.isfinite(feller),
        feller_value=feller,
    )


def feller_integral(scale: ScaleFunction, speed: SpeedMeasure, side: Side,
                    cut: float | None = None, rel_tol: float = 1e-4,
                    max_pieces: int = 96) -> float:
    """Integral of m((x, c)) ds(x) toward the boundary (m((c, x)) above).

    Returns the certified value or +inf.  When the side is not approachable
    the integral diverges outright: the integrand is bounded below by a
    positive constant over an infinite stretch of scale.
    """
    interval = scale.interval
    cut = interval.e if cut is None else cut
    slo, shi = scale.limits
    lower = side is Side.LOWER
    if lower and math.isinf(slo):
        return INF
    if not lower and math.isinf(shi):
        return INF

    boundary = interval.a if lower else interval.b

    def ring_value(u: float, v: float) -> tuple[float, float]:
        """Certified bracket of the contribution of x in [u, v]."""
        pieces = [(u, v)]
        brackets = [_piece_bracket(scale, speed, u, v, cut, lower)]
        # split the widest-enclosure piece until the total bracket is tight
        while len(pieces) < max_pieces:
            total_lo = sum(b[0] for b in brackets)
            total_hi = sum(b[1] for b in brackets)
            if total_hi - total_lo <= max(1e-13, rel_tol * max(total_lo, 1e-13)):
                break
            widths = [h - l for (l, h) in brackets]
            i = widths.index(max(widths))
            p, q = pieces[i]
            mid = 0.5 * (p + q)
            if not (p < mid < q):
                break
            pieces[i: i + 1] = [(p, mid), (mid, q)]
            brackets[i: i + 1] = [
                _piece_bracket(scale, speed, p, mid, cut, lower),
                _piece_bracket(scale, speed, mid, q, cut, lower),
            ]
        return (sum(b[0] for b in brackets), sum(b[1] for b in brackets))

    total = 0.0
    x = cut
    for _ in range(MAX_DOUBLINGS):
        nxt = _step_toward(x, cut, boundary)
        u, v = (nxt, x) if lower else (x, nxt)
        lo_r, hi_r = ring_value(u, v)
        total += 0.5 * (lo_r + hi_r)
        if total > DIVERGENCE_CAP:
            return INF
        if hi_r <= CONVERGENCE_ATOL:
            return total
        x = nxt
        if math.isfinite(boundary) and abs(x - boundary) <= 1e-15 * max(1.0, abs(boundary)):
            return total
    # ring contributions still above tolerance after the budget
    return INF


def _piece_bracket(scale, speed, p, q, cut, lower) -> tuple[float, float]:
    ds = scale.increment(p, q)
    if ds <= 0.0:
        return 0.0, 0.0
    if lower:
        m_far, m_near = speed.mass(p, cut), speed.mass(q, cut)
    else:
        m_far, m_near = speed.mass(cut, q), speed.mass(cut, p)
    lo = m_near * ds
    hi = m_far * ds
    if math.isinf(hi):
        hi = DIVERGENCE_CAP * 2
    return lo, hi


def _step_toward(x: float, anchor: float, boundary: float) -> float:
    if math.isinf(boundary):
        step = max(1.0, abs(x - anchor))
        return x - step if boundary < 0 else x + step
    return 0.5 * (x + boundary)
