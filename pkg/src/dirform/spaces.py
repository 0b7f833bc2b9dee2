"""Dirichlet space specifications and their operations.

A specification is a (scale, speed, boundary condition) triple.  The
absorbing condition pins functions to zero at regular boundaries; the full
condition imposes nothing.  The two describe the same space exactly when no
boundary is regular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np

from .boundary import BoundaryClassification, Side, boundary_classify
from .errors import MismatchedSpeed, NotAbsolutelyContinuous, UnsupportedRepresentation
from .interval import Interval
from .scale import IdentityDensity, ScaleFunction
from .sets import is_admissible_scaling, set_from_scale
from .speed import SpeedMeasure, speeds_agree


class BoundaryCondition(Enum):
    ABSORBING = "absorbing"   # minimal space, zero at regular boundaries
    FULL = "full"


class DirichletSpaceSpec:
    """One Dirichlet space in scale/speed form."""

    def __init__(self, scale: ScaleFunction, speed: SpeedMeasure,
                 bc: BoundaryCondition = BoundaryCondition.ABSORBING):
        if scale.interval != speed.interval:
            raise ValueError("scale and speed must share one interval")
        self.scale = scale
        self.speed = speed
        self.bc = bc
        self._boundaries: dict[Side, BoundaryClassification] = {}

    @property
    def interval(self) -> Interval:
        return self.scale.interval

    def boundary(self, side: Side) -> BoundaryClassification:
        if side not in self._boundaries:
            self._boundaries[side] = boundary_classify(self.scale, self.speed, side)
        return self._boundaries[side]

    def has_regular_boundary(self) -> bool:
        return self.boundary(Side.LOWER).s_regular or self.boundary(Side.UPPER).s_regular

    def with_bc(self, bc: BoundaryCondition) -> "DirichletSpaceSpec":
        other = DirichletSpaceSpec(self.scale, self.speed, bc)
        other._boundaries = self._boundaries
        return other

    def same_form(self, other: "DirichletSpaceSpec") -> bool:
        """Specs describe one space when data agree and the boundary
        condition either matches or is irrelevant (no regular boundary)."""
        if self.scale is not other.scale and not _scales_agree(self.scale, other.scale):
            return False
        if not speeds_agree(self.speed, other.speed):
            return False
        if self.bc == other.bc:
            return True
        return not self.has_regular_boundary() and not other.has_regular_boundary()

    def __repr__(self):
        return f"DirichletSpaceSpec({self.scale!r}, {self.speed!r}, {self.bc.value})"


def _scales_agree(s1: ScaleFunction, s2: ScaleFunction, probes: int = 16) -> bool:
    if s1.interval != s2.interval:
        return False
    lo, hi = s1.interval.clip_window(8.0)
    xs = np.linspace(lo, hi, probes + 1)
    return all(math.isclose(s1.increment(c, d), s2.increment(c, d),
                            rel_tol=1e-9, abs_tol=1e-12)
               for c, d in zip(xs[:-1], xs[1:]))


# ---------------------------------------------------------------------------
# test functions

@dataclass(frozen=True)
class Profile:
    """Compactly supported profile on the scale range, with derivative."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]
    knots: tuple[float, ...] = ()
    lipschitz: float = 1.0


def bump_profile(center: float = 0.0, halfwidth: float = 1.0) -> Profile:
    """Smooth bump exp(1 - 1/(1 - t^2)) on |t| < 1, t = (y-c)/h."""
    c, h = center, halfwidth

    def fn(y):
        t = (np.asarray(y, float) - c) / h
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        ti = t[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
        return out

    def deriv(y):
        t = (np.asarray(y, float) - c) / h
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        ti = t[inside]
        g = 1.0 - ti * ti
        out[inside] = np.exp(1.0 - 1.0 / g) * (-2.0 * ti / (g * g)) / h
        return out

    return Profile("bump", fn, deriv, (c - h, c + h), (c - h, c, c + h),
                   lipschitz=2.5 / h)


def tent_profile(center: float = 0.0, halfwidth: float = 1.0) -> Profile:
    c, h = center, halfwidth

    def fn(y):
        return np.maximum(0.0, 1.0 - np.abs((np.asarray(y, float) - c) / h))

    def deriv(y):
        t = (np.asarray(y, float) - c) / h
        return np.where((t > -1.0) & (t < 0.0), 1.0 / h,
                        np.where((t >= 0.0) & (t < 1.0), -1.0 / h, 0.0))

    return Profile("tent", fn, deriv, (c - h, c + h), (c - h, c, c + h),
                   lipschitz=1.0 / h)


def smoothstep_bump(center: float = 0.0, halfwidth: float = 1.0,
                    shoulder: float = 0.25) -> Profile:
    """Plateau of height 1 with cubic smoothstep shoulders."""
    c, h, w = center, halfwidth, shoulder * halfwidth
    lo, hi = c - h, c + h

    def ramp(t):
        t = np.clip(t, 0.0, 1.0)
        return t * t * (3.0 - 2.0 * t)

    def dramp(t):
        inside = (t > 0.0) & (t < 1.0)
        return np.where(inside, 6.0 * t * (1.0 - t), 0.0)

    def fn(y):
        y = np.asarray(y, float)
        return ramp((y - lo) / w) * ramp((hi - y) / w)

    def deriv(y):
        y = np.asarray(y, float)
        a, b = (y - lo) / w, (hi - y) / w
        return (dramp(a) * ramp(b) - ramp(a) * dramp(b)) / w

    return Profile("smoothstep", fn, deriv, (lo, hi),
                   (lo, lo + w, hi - w, hi), lipschitz=1.5 / w)


@dataclass(frozen=True)
class CoreComposite:
    """u = profile composed with a scale function; member of the core."""

    profile: Profile
    scale: ScaleFunction

    def __post_init__(self):
        ylo, yhi = self.scale.limits
        plo, phi = self.profile.support
        if not (ylo < plo and phi < yhi):
            raise ValueError("profile support must sit inside the scale range")

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, float))
        ys = np.array([self.scale(v) for v in xs])
        out = self.profile.fn(ys)
        return out if np.ndim(x) else float(out[0])

    def x_support(self) -> tuple[float, float]:
        plo, phi = self.profile.support
        return self.scale.invert(plo), self.scale.invert(phi)


@dataclass(frozen=True)
class SmoothFunction:
    """Plain smooth function of the natural coordinate, with derivative."""

    fn: Callable
    deriv: Callable
    support: tuple[float, float]
    lipschitz: float = 1.0

    def __call__(self, x):
        return self.fn(np.asarray(x, float))

    def x_support(self) -> tuple[float, float]:
        return self.support


@dataclass
class GridSampled:
    """Function known through its values on a node set."""

    nodes: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        return np.interp(np.asarray(x, float), self.nodes, self.values)

    def x_support(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])


def _eval1(u, x: float) -> float:
    return float(np.atleast_1d(u(np.array([x])))[0])


# ---------------------------------------------------------------------------
# energy

def energy(u, spec: DirichletSpaceSpec, cells: int = 8192) -> float:
    """Dirichlet energy 1/2 * integral of (du/ds)^2 ds for the spec's scale.

    Composites against the spec's own scale integrate the profile derivative
    over the scale range by adaptive quadrature.  A composite against a
    finer admissible scale (a subspace member evaluated in the ambient
    space) is integrated by midpoint Riemann-Stieltjes sums against the
    finer scale's measure oracle, Richardson extrapolated; the chain rule
    makes both integrals the same number, so the two evaluation paths
    cross-check each other.
    """
    if isinstance(u, GridSampled):
        return _grid_energy(u, spec)
    if isinstance(u, CoreComposite):
        if u.scale.density is spec.scale.density:
            return _profile_energy(u.profile)
        if not is_admissible_scaling(u.scale, spec.scale):
            raise NotAbsolutelyContinuous(
                "composite's scale is not an admissible rescaling of the spec scale")
        fine = _stieltjes_energy(u, cells)
        coarse = _stieltjes_energy(u, cells // 2)
        return (4.0 * fine - coarse) / 3.0
    if isinstance(u, SmoothFunction) and isinstance(spec.scale.density, IdentityDensity):
        return _smooth_energy(u)
    raise NotAbsolutelyContinuous(
        f"no scale-derivative available for {type(u).__name__} against this spec")


def _profile_energy(profile: Profile) -> float:
    from scipy.integrate import quad

    lo, hi = profile.support
    pts = sorted({lo, hi, *profile.knots})
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = quad(lambda y: profile.deriv(np.array([y]))[0] ** 2, a, b, limit=100)
        total += val
    return 0.5 * total


def _smooth_energy(u: SmoothFunction) -> float:
    from scipy.integrate import quad

    lo, hi = u.support
    val, _ = quad(lambda x: u.deriv(np.array([x]))[0] ** 2, lo, hi, limit=200)
    return 0.5 * val


def _stieltjes_energy(u: CoreComposite, cells: int) -> float:
    """Midpoint sums of (du/ds)^2 against the composite scale's own measure,
    anchored in the natural coordinate through the interval oracle."""
    plo, phi = u.profile.support
    xlo, xhi = u.x_support()
    xs = np.array([u.scale.invert(y, xlo, xhi)
                   for y in np.linspace(plo, phi, cells + 1)])
    total = 0.0
    y_left = plo
    for i in range(cells):
        dy = u.scale.increment(float(xs[i]), float(xs[i + 1]))
        mid = y_left + 0.5 * dy
        val = float(u.profile.deriv(np.array([mid]))[0])
        total += val * val * dy
        y_left += dy
    return 0.5 * total


def _grid_energy(u: GridSampled, spec: DirichletSpaceSpec,
                 jump_tol: float = 1e-9) -> float:
    nodes, vals = u.nodes, u.values
    total = 0.0
    srange = spec.scale.increment(float(nodes[0]), float(nodes[-1]))
    for i in range(len(nodes) - 1):
        ds = spec.scale.increment(float(nodes[i]), float(nodes[i + 1]))
        du = float(vals[i + 1] - vals[i])
        if ds <= 1e-14 * max(1.0, srange):
            if abs(du) > jump_tol:
                raise NotAbsolutelyContinuous(
                    f"jump {du:.3e} across a zero-scale gap at node {i}")
            continue
        total += du * du / ds
    return 0.5 * total


# ---------------------------------------------------------------------------
# subspace relations and membership

class SubspaceRelation(NamedTuple):
    is_subspace: bool
    proper: bool


def is_subspace(sub: DirichletSpaceSpec, base: DirichletSpaceSpec,
                probes: int = 24) -> SubspaceRelation:
    """Subspace test plus properness report (scales differ in measure)."""
    if sub.interval != base.interval:
        raise ValueError("specs must share one interval")
    if not speeds_agree(sub.speed, base.speed):
        raise MismatchedSpeed("subspace comparison keeps the speed measure fixed")
    ok = is_admissible_scaling(sub.scale, base.scale)
    if not ok:
        return SubspaceRelation(False, False)
    lo, hi = base.interval.clip_window(8.0)
    xs = np.linspace(lo, hi, probes + 1)
    proper = any(
        sub.scale.increment(c, d) < base.scale.increment(c, d) - 1e-10 * max(1.0, base.scale.increment(c, d))
        for c, d in zip(xs[:-1], xs[1:]))
    return SubspaceRelation(True, proper)


def membership(u, sub: DirichletSpaceSpec, base: DirichletSpaceSpec,
               cells: int = 1024, tol: float = 1e-6) -> bool:
    """Does u belong to the subspace?  The scale derivative must vanish off
    the characteristic set (in sampled measure) and u must vanish at any
    regular boundary when the subspace is absorbing."""
    rel = is_subspace(sub, base)
    if not rel.is_subspace:
        return False
    if isinstance(u, CoreComposite) and u.scale.density is sub.scale.density:
        lip = u.profile.lipschitz
    else:
        lip = getattr(u, "lipschitz", 1.0)
    try:
        charset = set_from_scale(sub.scale)
    except UnsupportedRepresentation:
        return False
    xlo, xhi = u.x_support()
    if not (math.isfinite(xlo) and math.isfinite(xhi)):
        return False
    xs = np.linspace(xlo, xhi, cells + 1)
    probes = list(zip(xs[:-1], xs[1:]))
    # uniform probes are blind to a nowhere-dense complement; add intervals
    # where the representation concentrates its complement
    probes.extend(charset.complement_probes(xlo, xhi, cap=cells))
    bad_measure = 0.0
    for c, d in probes:
        c, d = float(c), float(d)
        du = abs(_eval1(u, d) - _eval1(u, c))
        allowed = lip * charset.measure(c, d) + 1e-12
        if du > allowed + tol * (d - c):
            bad_measure += charset.complement_measure(c, d)
    if bad_measure > tol * (xhi - xlo):
        return False
    if sub.bc is BoundaryCondition.ABSORBING:
        for side in Side:
            if sub.boundary(side).s_regular and not _vanishes_toward(u, sub, side):
                return False
    return True


def _vanishes_toward(u, spec: DirichletSpaceSpec, side: Side,
                     tol: float = 1e-8) -> bool:
    xlo, xhi = u.x_support()
    a, b = spec.interval.a, spec.interval.b
    if side is Side.LOWER:
        if a < xlo:
            return True  # support stays away from the boundary
        return abs(_eval1(u, xlo)) <= tol
    if xhi < b:
        return True
    return abs(_eval1(u, xhi)) <= tol


# ---------------------------------------------------------------------------
# global classification

class Transience(Enum):
    RECURRENT = "recurrent"
    TRANSIENT = "transient"
    NOT_CLASSIFIED = "not_classified"


@dataclass(frozen=True)
class GlobalClassification:
    transience: Transience
    conservative: Optional[bool]
    lower: BoundaryClassification
    upper: BoundaryClassification


def classify_global(spec: DirichletSpaceSpec) -> GlobalClassification:
    """Transience/recurrence and conservativeness of the minimal diffusion.

    The criteria hold for absorbing specs; a full spec at a regular boundary
    is a different object, so it is reported unclassified rather than
    guessed.
    """
    low = spec.boundary(Side.LOWER)
    up = spec.boundary(Side.UPPER)
    if spec.bc is BoundaryCondition.FULL and (low.s_regular or up.s_regular):
        return GlobalClassification(Transience.NOT_CLASSIFIED, None, low, up)
    transient = low.s_approachable or up.s_approachable
    conservative = not (low.finite_time_approachable or up.finite_time_approachable)
    return GlobalClassification(
        Transience.TRANSIENT if transient else Transience.RECURRENT,
        conservative, low, up)


# ---------------------------------------------------------------------------
# spatial transform

class TransformGeometry:
    """Shared machinery for one homeomorphism: inverse with memoization."""

    def __init__(self, j: ScaleFunction):
        j.require_homeomorphism()
        self.j = j
        self._inv_cache: dict[float, float] = {}
        lo, hi = j.limits
        self.image = Interval(lo, hi, j(j.interval.e))

    def inverse(self, y: float) -> float:
        if y <= self.image.a:
            return self.j.interval.a
        if y >= self.image.b:
            return self.j.interval.b
        hit = self._inv_cache.get(y)
        if hit is None:
            hit = self.j.invert(y)
            self._inv_cache[y] = hit
        return hit


class _PullbackDensity:
    """Density of s composed with the inverse transform."""

    kind = "pullback"

    def __init__(self, scale: ScaleFunction, geo: TransformGeometry):
        self.scale = scale
        self.geo = geo

    def measure(self, c: float, d: float) -> float:
        if d <= c:
            return 0.0
        xc = self.geo.inverse(c)
        xd = self.geo.inverse(d)
        return self.scale.increment(xc, xd)


def spatial_transform(spec: DirichletSpaceSpec, j: ScaleFunction,
                      geo: Optional[TransformGeometry] = None) -> DirichletSpaceSpec:
    """Image spec under a strictly increasing homeomorphism of the interval.

    The image scale is s o j^{-1} and the image speed is the pushforward
    m o j^{-1}; resolvent quantities correspond under composition with j.
    """
    geo = geo or TransformGeometry(j)
    new_scale = ScaleFunction(geo.image, _PullbackDensity(spec.scale, geo),
                              name=f"{spec.scale.name}.pullback")
    speed = spec.speed

    def cum(yhat: float) -> float:
        return speed.cumulative(geo.inverse(yhat))

    atoms = tuple((j(x), w) for x, w in speed.atoms)
    new_speed = SpeedMeasure(geo.image, cum, atoms, name=f"{speed.name}.pushforward")
    out = DirichletSpaceSpec(new_scale, new_speed, spec.bc)
    out.transform_geometry = geo
    return out
