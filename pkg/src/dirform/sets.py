"""Characteristic sets: ds-a.e. classes with positive measure in every
subinterval, their interval-measure oracles, and the bijection with
indicator-density scale functions.

Representations
---------------
* ``IntervalUnionSet``     finite unions of disjoint open intervals
* ``FatCantorSet``         per unit cell [k, k+1], the open complement of a
                           Smith-Volterra-Cantor closed set; removed lengths
                           are chosen in closed form so the cell retains
                           exactly ``1 - mass(k)`` of closed-set measure
* ``UnionSet``             a union of one exotic part with interval-like
                           parts (used for comb and window sequences)

All measure queries are exact up to float rounding: the Cantor oracle walks
the construction tree along the query point (cost is linear in the depth),
and cell ranges plus infinite tails are summed in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import (AdmissibilityError, InvalidMass, OracleToleranceError,
                     RequiresOpenSet, UnsupportedRepresentation)
from .interval import INF, Interval, REAL_LINE
from .scale import ScaleFunction, SetIndicatorDensity, IdentityDensity


def _clip(lo: float, hi: float, c: float, d: float) -> float:
    return max(0.0, min(hi, d) - max(lo, c))


# ---------------------------------------------------------------------------
# cell masses for the Cantor-complement lattice

@dataclass(frozen=True)
class CellMasses:
    """Per-cell open-set masses eps_k = base * ratio**max(0, |k| - plateau).

    The plateau keeps cells near the origin at the full base mass; the
    geometric tail makes the total finite.  base=0.25, ratio=0.5, plateau=0
    reproduces eps_k = 2**(-|k| - 2).
    """

    base: float = 0.25
    ratio: float = 0.5
    plateau: int = 0

    def __post_init__(self):
        if not 0.0 < self.base < 1.0:
            raise InvalidMass(f"base mass {self.base} outside (0,1)")
        if not 0.0 < self.ratio < 1.0:
            raise InvalidMass(f"ratio {self.ratio} outside (0,1); total mass must be finite")
        if self.plateau < 0:
            raise InvalidMass("plateau must be >= 0")

    def __call__(self, k: int) -> float:
        t = abs(k) - self.plateau
        return self.base if t <= 0 else self.base * self.ratio ** t

    def sum_range(self, k0: float, k1: float) -> float:
        """Sum of eps_k over integer k0 <= k <= k1; endpoints may be infinite."""
        if k1 < k0:
            return 0.0
        if math.isinf(k0) and math.isinf(k1):
            return self.total()
        if math.isinf(k0):
            # symmetry eps_{-k} = eps_k
            return self._upper_tail(-int(k1))
        if math.isinf(k1):
            return self._upper_tail(int(k0))
        return sum(self(k) for k in range(int(k0), int(k1) + 1))

    def _upper_tail(self, k0: int) -> float:
        """Closed-form sum of eps_k over k >= k0."""
        b, r, p = self.base, self.ratio, self.plateau
        geo = b * r / (1 - r)          # sum over k > p of eps_k
        if k0 > p:
            return b * r ** (k0 - p) / (1 - r)
        if k0 >= -p:
            return (p - k0 + 1) * b + geo
        # k0 < -p: total minus sum over k <= k0 - 1, which mirrors k >= 1 - k0
        return self.total() - b * r ** (1 - k0 - p) / (1 - r)

    def total(self) -> float:
        p, r = self.plateau, self.ratio
        return self.base * (2 * p + 1 + 2 * r / (1 - r))


class ExplicitCellMasses:
    """Masses given per cell; only the listed cells exist (bounded intervals)."""

    def __init__(self, masses: dict[int, float]):
        for k, eps in masses.items():
            if not 0.0 < eps < 1.0:
                raise InvalidMass(f"mass {eps} for cell {k} outside (0,1)")
        self.masses = dict(masses)

    def __call__(self, k: int) -> float:
        try:
            return self.masses[k]
        except KeyError:
            raise InvalidMass(f"no mass declared for cell {k}")

    def sum_range(self, k0: float, k1: float) -> float:
        return sum(eps for k, eps in self.masses.items() if k0 <= k <= k1)

    def total(self) -> float:
        return sum(self.masses.values())


# ---------------------------------------------------------------------------

class CharacteristicSet:
    """Base class; concrete sets implement the interval-measure oracle."""

    interval: Interval
    is_open: bool = True

    @property
    def tolerance(self) -> float:
        return 1e-14

    def measure(self, c: float, d: float) -> float:
        raise NotImplementedError

    def complement_measure(self, c: float, d: float) -> float:
        """Natural-scale measure of the complement F = G^c on a finite (c, d)."""
        if math.isinf(c) or math.isinf(d):
            raise ValueError("complement measure needs finite query bounds")
        return max(0.0, (d - c) - self.measure(c, d))

    def components(self, c: float, d: float) -> Iterator[tuple[float, float]]:
        """Maximal open-interval components for interval-like parts only."""
        raise UnsupportedRepresentation(f"{type(self).__name__} is not interval-like")

    def refinement_points(self, c: float, d: float, cap: int = 256) -> list[float]:
        """A few structural break points inside (c, d), for grid refinement."""
        return []

    def complement_probes(self, c: float, d: float, cap: int = 256) -> list[tuple[float, float]]:
        """Sample intervals where the complement concentrates.

        Used by membership tests: the derivative of a subspace member must
        be flat across these, and a nowhere-dense complement is invisible
        to uniformly placed probe cells.
        """
        return []

    def scale(self, name: str = "") -> ScaleFunction:
        return scale_from_set(self)

    def is_admissible(self, window: Optional[tuple[float, float]] = None,
                      depth: int = 20, probes_per_level: int = 8) -> bool:
        """Sampled admissibility: positive measure on a fixed probe grid of
        dyadic subintervals down to length 2**-depth."""
        if window is None:
            window = self.interval.clip_window(8.0)
        lo, hi = window
        for level in range(depth + 1):
            length = (hi - lo) * 2.0 ** (-level)
            for i in range(probes_per_level):
                start = lo + (hi - lo - length) * (i / max(1, probes_per_level - 1))
                if self.measure(start, start + length) <= 0.0:
                    return False
        return True


class IntervalUnionSet(CharacteristicSet):
    """Finite union of disjoint open intervals (endpoints may be infinite)."""

    def __init__(self, intervals: Sequence[tuple[float, float]],
                 interval: Interval = REAL_LINE):
        pieces = sorted((float(lo), float(hi)) for lo, hi in intervals)
        merged: list[tuple[float, float]] = []
        for lo, hi in pieces:
            if hi <= lo:
                raise ValueError(f"empty piece ({lo}, {hi})")
            if merged and lo < merged[-1][1]:
                raise ValueError("pieces must be disjoint")
            if merged and lo == merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self.intervals = tuple(merged)
        self.interval = interval

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        tot = 0.0
        for lo, hi in self.intervals:
            if math.isinf(_clip(lo, hi, c, d)):
                return INF
            tot += _clip(lo, hi, c, d)
        return tot

    def components(self, c: float, d: float):
        for lo, hi in self.intervals:
            l, h = max(lo, c), min(hi, d)
            if h > l:
                yield (l, h)

    def refinement_points(self, c: float, d: float, cap: int = 256) -> list[float]:
        pts = []
        for lo, hi in self.intervals:
            pts.extend(p for p in (lo, hi) if c < p < d and math.isfinite(p))
        return pts[:cap]

    def complement_probes(self, c: float, d: float, cap: int = 256) -> list[tuple[float, float]]:
        out = []
        cur = c
        for lo, hi in self.intervals:
            if lo > cur and min(lo, d) > cur:
                out.append((cur, min(lo, d)))
            cur = max(cur, hi)
        if d > cur:
            out.append((cur, d))
        return [p for p in out if p[1] > p[0]][:cap]


def full_set(interval: Interval = REAL_LINE) -> IntervalUnionSet:
    return IntervalUnionSet([(interval.a, interval.b)], interval)


class _LatticeWindows(CharacteristicSet):
    """Open windows (k - w, k + w) around every integer k (comb teeth)."""

    def __init__(self, halfwidth: float, interval: Interval = REAL_LINE):
        if not 0.0 < halfwidth:
            raise ValueError("halfwidth must be positive")
        self.halfwidth = halfwidth
        self.interval = interval

    @property
    def covers_line(self) -> bool:
        return self.halfwidth >= 0.5

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        if self.covers_line:
            return d - c
        if math.isinf(d - c):
            return INF
        tot = 0.0
        for lo, hi in self.components(c, d):
            tot += hi - lo
        return tot

    def components(self, c: float, d: float):
        if math.isinf(c) or math.isinf(d):
            raise ValueError("window components need finite query bounds")
        w = self.halfwidth
        if self.covers_line:
            yield (c, d)
            return
        for k in range(math.floor(c - w), math.ceil(d + w) + 1):
            lo, hi = max(k - w, c), min(k + w, d)
            if hi > lo:
                yield (lo, hi)

    def refinement_points(self, c: float, d: float, cap: int = 256) -> list[float]:
        pts: list[float] = []
        if self.covers_line:
            return pts
        w = self.halfwidth
        for k in range(math.floor(c), math.ceil(d) + 1):
            for p in (k - w, k + w):
                if c < p < d:
                    pts.append(p)
            if len(pts) >= cap:
                break
        return pts[:cap]


class FatCantorSet(CharacteristicSet):
    """Open dense set whose complement is a Smith-Volterra-Cantor lattice.

    Within cell [k, k+1], generation j removes from each of the 2**j
    surviving closed pieces a centered open interval of length
    eps_k / 2 * 4**-j, so the removed (open, kept-in-G) total is eps_k and
    the closed remainder is nowhere dense with measure 1 - eps_k.  A
    measure query recurses only along the pieces containing the query
    endpoints, so its truncation error is bounded by eps_k * 4**-depth.
    """

    def __init__(self, masses: CellMasses | ExplicitCellMasses | dict = CellMasses(),
                 depth: int = 48, interval: Interval = REAL_LINE):
        if isinstance(masses, dict):
            masses = ExplicitCellMasses(masses)
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.masses = masses
        self.depth = depth
        self.interval = interval
        if isinstance(masses, ExplicitCellMasses):
            lo = min(masses.masses) if masses.masses else 0
            hi = max(masses.masses) + 1 if masses.masses else 0
            if interval.a < lo or interval.b > hi:
                raise InvalidMass(
                    "explicit cell masses must cover the whole interval")

    @property
    def tolerance(self) -> float:
        return self.masses.total() * 4.0 ** (-self.depth) + 1e-15

    def total(self) -> float:
        return self.masses.total()

    def _cell_cum(self, eps: float, t: float) -> float:
        """Measure of the cell's open part within [0, t], t in [0, 1]."""
        if t <= 0.0:
            return 0.0
        if t >= 1.0:
            return eps
        lo, hi = 0.0, 1.0
        acc = 0.0
        child = eps
        for j in range(self.depth):
            removed = eps * 0.5 * 0.25 ** j
            child = eps * 0.25 ** (j + 1)
            c1 = lo + 0.5 * ((hi - lo) - removed)
            c2 = c1 + removed
            if t >= c2:
                acc += child + removed
                lo = c2
            elif t > c1:
                return acc + child + (t - c1)
            else:
                hi = c1
        if hi > lo:
            acc += child * (t - lo) / (hi - lo)
        return acc

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        c = max(c, self.interval.a)
        d = min(d, self.interval.b)
        if d <= c:
            return 0.0
        if math.isinf(c) and math.isinf(d):
            return self.masses.total()
        if math.isinf(d):
            kc = math.floor(c)
            head = self(kc) - self._cell_cum(self.masses(kc), c - kc)
            return head + self.masses.sum_range(kc + 1, INF)
        kd = math.floor(d)
        if kd == d:
            kd -= 1  # query ends exactly on a cell edge
        if math.isinf(c):
            return self.masses.sum_range(-INF, kd - 1) + self._cell_cum(self.masses(kd), d - kd)
        kc = math.floor(c)
        if kc == kd:
            eps = self.masses(kc)
            return self._cell_cum(eps, d - kc) - self._cell_cum(eps, c - kc)
        tot = self(kc) - self._cell_cum(self.masses(kc), c - kc)
        tot += self.masses.sum_range(kc + 1, kd - 1)
        tot += self._cell_cum(self.masses(kd), d - kd)
        return tot

    def __call__(self, k: int) -> float:
        return self.masses(k)

    def removed_intervals(self, c: float, d: float, depth: int = 6,
                          cap: int = 512) -> list[tuple[float, float]]:
        """Explicit removed (open) intervals down to a shallow depth."""
        out: list[tuple[float, float]] = []
        for k in range(math.floor(c), math.floor(d) + 1):
            eps = self.masses(k)
            pieces = [(float(k), float(k + 1))]
            for j in range(depth):
                removed = eps * 0.5 * 0.25 ** j
                nxt = []
                for lo, hi in pieces:
                    c1 = lo + 0.5 * ((hi - lo) - removed)
                    c2 = c1 + removed
                    if c < c2 and c1 < d:
                        out.append((max(c1, c), min(c2, d)))
                    nxt.extend(((lo, c1), (c2, hi)))
                pieces = nxt
                if len(out) >= cap:
                    return out[:cap]
        return out[:cap]

    def refinement_points(self, c: float, d: float, cap: int = 256) -> list[float]:
        pts: list[float] = []
        for lo, hi in self.removed_intervals(c, d, depth=3, cap=cap // 2):
            pts.extend((lo, hi))
        return pts[:cap]

    def complement_probes(self, c: float, d: float, cap: int = 256) -> list[tuple[float, float]]:
        """Surviving closed pieces deep enough that the open part is a
        minority, one walk per cell from each cell's left edge."""
        out: list[tuple[float, float]] = []
        for k in range(math.floor(c), math.floor(d) + 1):
            eps = self.masses(k)
            # depth at which G occupies at most ~1/4 of a surviving piece:
            # G per piece = eps 4^-j, piece length ~ (1-eps) 2^-j + eps 4^-j
            j = 1
            while j < 24 and eps * 4.0 ** -j > 0.25 * ((1 - eps) * 2.0 ** -j):
                j += 1
            lo, hi = float(k), float(k + 1)
            for jj in range(j):
                removed = eps * 0.5 * 0.25 ** jj
                c1 = lo + 0.5 * ((hi - lo) - removed)
                # keep descending into the left piece
                hi = c1
            if c < hi and lo < d and hi > lo:
                out.append((max(lo, c), min(hi, d)))
            if len(out) >= cap:
                break
        return out[:cap]


class UnionSet(CharacteristicSet):
    """Union of at most one exotic set with interval-like parts.

    Measure uses exact subtraction: the interval-like parts are merged into
    disjoint components, and the exotic part is measured on the gaps.
    """

    def __init__(self, exotic: Optional[CharacteristicSet],
                 interval_parts: Sequence[CharacteristicSet],
                 interval: Optional[Interval] = None):
        self.exotic = exotic
        self.interval_parts = tuple(interval_parts)
        self.interval = interval or (exotic.interval if exotic else REAL_LINE)
        self.is_open = (exotic is None or exotic.is_open) and \
            all(p.is_open for p in self.interval_parts)

    def _merged(self, c: float, d: float) -> list[tuple[float, float]]:
        comps: list[tuple[float, float]] = []
        for part in self.interval_parts:
            comps.extend(part.components(c, d))
        comps.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in comps:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return merged

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        c = max(c, self.interval.a)
        d = min(d, self.interval.b)
        if math.isinf(c) or math.isinf(d):
            return self._measure_unbounded(c, d)
        merged = self._merged(c, d)
        tot = sum(hi - lo for lo, hi in merged)
        if self.exotic is not None:
            cur = c
            for lo, hi in merged:
                if lo > cur:
                    tot += self.exotic.measure(cur, lo)
                cur = max(cur, hi)
            if d > cur:
                tot += self.exotic.measure(cur, d)
        return tot

    def _measure_unbounded(self, c: float, d: float) -> float:
        for part in self.interval_parts:
            if isinstance(part, _LatticeWindows):
                return INF
            if isinstance(part, IntervalUnionSet) and math.isinf(part.measure(c, d)):
                return INF
        # finite interval parts: split off a bounded middle
        pivots = [1.0, -1.0]
        for part in self.interval_parts:
            if isinstance(part, IntervalUnionSet):
                for lo, hi in part.intervals:
                    pivots.extend(p for p in (lo, hi) if math.isfinite(p))
        lo_p, hi_p = min(pivots) - 1.0, max(pivots) + 1.0
        tot = 0.0
        if math.isinf(c):
            tot += self.exotic.measure(c, lo_p) if self.exotic else 0.0
            c = lo_p
        if math.isinf(d):
            tot += self.exotic.measure(hi_p, d) if self.exotic else 0.0
            d = hi_p
        if d > c:
            tot += self.measure(c, d)
        return tot

    def refinement_points(self, c: float, d: float, cap: int = 256) -> list[float]:
        pts: list[float] = []
        for part in self.interval_parts:
            pts.extend(part.refinement_points(c, d, cap))
        if self.exotic is not None:
            pts.extend(self.exotic.refinement_points(c, d, cap - len(pts)))
        return pts[:cap]

    def complement_probes(self, c: float, d: float, cap: int = 256) -> list[tuple[float, float]]:
        # candidate complement regions of the exotic part; probes covered by
        # the interval parts are harmless (the union's own measure is used
        # when testing against them)
        if self.exotic is not None:
            return self.exotic.complement_probes(c, d, cap)
        merged = self._merged(c, d)
        out = []
        cur = c
        for lo, hi in merged:
            if lo > cur:
                out.append((cur, lo))
            cur = max(cur, hi)
        if d > cur:
            out.append((cur, d))
        return out[:cap]


# ---------------------------------------------------------------------------
# constructors named after their roles

def fat_cantor(masses: CellMasses | ExplicitCellMasses | dict = CellMasses(),
               depth: int = 48, interval: Interval = REAL_LINE,
               tolerance: float | None = None) -> FatCantorSet:
    """Open dense lattice set with |G| = sum of cell masses (finite).

    ``tolerance`` requests a guaranteed oracle accuracy; the enumeration
    depth must be deep enough to honor it.
    """
    out = FatCantorSet(masses, depth, interval)
    if tolerance is not None and out.tolerance > tolerance:
        raise OracleToleranceError(
            f"depth {depth} guarantees {out.tolerance:.2e}, worse than the "
            f"requested {tolerance:.2e}")
    return out


def comb_sequence(base: CharacteristicSet, n: int) -> UnionSet:
    """G_n = base union of windows (k - 1/n, k + 1/n) around the integers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    windows = _LatticeWindows(1.0 / n, base.interval)
    return UnionSet(base if not isinstance(base, IntervalUnionSet) else None,
                    [windows] + ([base] if isinstance(base, IntervalUnionSet) else []),
                    base.interval)


def window_sequence(base: CharacteristicSet, n: int) -> UnionSet:
    """U_n = base union (-n, n); requires an open base set."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not base.is_open:
        raise RequiresOpenSet("window sequences require an open base set")
    win = IntervalUnionSet([(-float(n), float(n))], base.interval)
    return UnionSet(base if not isinstance(base, IntervalUnionSet) else None,
                    [win] + ([base] if isinstance(base, IntervalUnionSet) else []),
                    base.interval)


# ---------------------------------------------------------------------------
# the bijection with indicator scales

def scale_from_set(charset: CharacteristicSet, check: bool = False) -> ScaleFunction:
    """s(x) = measure of the set between the base point and x."""
    if check and not charset.is_admissible():
        raise AdmissibilityError("set has a sampled subinterval of zero measure")
    return ScaleFunction(charset.interval, SetIndicatorDensity(charset), "indicator")


def set_from_scale(s: ScaleFunction) -> CharacteristicSet:
    """Inverse of scale_from_set.  The identity density maps to the full set."""
    if isinstance(s.density, SetIndicatorDensity):
        return s.density.charset
    if isinstance(s.density, IdentityDensity):
        return full_set(s.interval)
    raise UnsupportedRepresentation(
        "only indicator (or identity) densities correspond to characteristic sets")


def is_admissible_scaling(candidate: ScaleFunction, base: ScaleFunction,
                          probes: int = 48) -> bool:
    """True when candidate is an indicator-density rescaling of base.

    Exact for indicator-vs-natural pairs; otherwise a sampled density and
    dominance check on dyadic probe intervals.
    """
    if candidate.interval != base.interval:
        return False
    cd, bd = candidate.density, base.density
    if isinstance(cd, (SetIndicatorDensity, IdentityDensity)) and isinstance(bd, IdentityDensity):
        return True
    lo, hi = base.interval.clip_window(8.0)
    for level in (1, 2, 4, 8):
        count = probes // 4 * level
        step = (hi - lo) / count
        for i in range(count):
            c = lo + i * step
            mc = candidate.increment(c, c + step)
            mb = base.increment(c, c + step)
            if mc > mb + 1e-12 * (1 + abs(mb)):
                return False
    if not isinstance(cd, (SetIndicatorDensity, IdentityDensity)):
        return _zero_one_density(candidate, base, lo, hi)
    return True


def _zero_one_density(candidate: ScaleFunction, base: ScaleFunction,
                      lo: float, hi: float, cells: int = 4096) -> bool:
    """Sampled check that d(candidate)/d(base) is {0,1}-valued."""
    bad = 0.0
    step = (hi - lo) / cells
    for i in range(cells):
        c = lo + i * step
        mb = base.increment(c, c + step)
        if mb <= 0:
            continue
        ratio = candidate.increment(c, c + step) / mb
        if 0.02 < ratio < 0.98:
            bad += mb
    return bad <= 1e-6 * base.increment(lo, hi)
