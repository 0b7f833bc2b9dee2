"""Resolvent-convergence experiments for sequences of regular subspaces.

A scenario pairs a speed measure with an indexed family of characteristic
sets and a limit (another set, or the full set for the natural scale).  The
runner discretizes every member on one common node skeleton, computes
resolvents for a battery of rates and test functions, and reports the error
sequences

    e_n = || G_alpha^n f  -  G_alpha f ||_m

against both the absorbing and the full realization of the limit.  Strong
resolvent convergence is the machine-checkable face of form convergence, so
the verdict is "convergence observed", never a claim of the limit notion
itself.  Structural hypotheses (nesting of the sets, the two sufficient
conditions on the measure/sets) are checked alongside and gate the verdict.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AdmissibilityError
from .grids import GridConfig, build_grid, node_skeleton, _dedupe
from .interval import Interval
from .scale import ScaleFunction, natural_scale
from .sets import CharacteristicSet, scale_from_set
from .solver import GeneratorMatrix, l2m_norm
from .spaces import (BoundaryCondition, DirichletSpaceSpec, TransformGeometry,
                     spatial_transform)
from .speed import SpeedMeasure


class Direction(Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"


class Verdict(Enum):
    CONVERGENCE_OBSERVED = "ConvergenceObserved"
    NO_CONVERGENCE = "NoConvergence"
    INCONCLUSIVE = "Inconclusive"


class CorollaryCondition(Enum):
    CONDITION1 = "condition1"       # both one-sided speed masses infinite
    CONDITION2 = "condition2"       # finite set tails inherited by some index
    NEITHER = "neither"


# default test battery: smooth, kinked, near-discontinuous
def _gauss(x):
    return np.exp(-np.asarray(x, float) ** 2)


def _tent(x):
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(x, float)))


def _mollified_indicator(x):
    t = np.clip((1.25 - np.abs(np.asarray(x, float))) / 0.5, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


DEFAULT_BATTERY: dict[str, Callable] = {
    "gauss": _gauss,
    "tent": _tent,
    "mollified_indicator": _mollified_indicator,
}

DEFAULT_INDICES = (1, 2, 4, 8, 16, 32)
DEFAULT_ALPHAS = (0.5, 1.0, 2.0)


@dataclass
class Scenario:
    name: str
    speed: SpeedMeasure
    set_for: Callable[[int], CharacteristicSet]
    limit_set: Optional[CharacteristicSet]          # None -> full set
    direction: Direction
    bc_sequence: BoundaryCondition = BoundaryCondition.ABSORBING
    bc_limit: BoundaryCondition = BoundaryCondition.ABSORBING
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    test_functions: dict[str, Callable] = field(default_factory=lambda: dict(DEFAULT_BATTERY))
    indices: tuple[int, ...] = DEFAULT_INDICES
    grid: GridConfig = field(default_factory=GridConfig)
    tolerance: float = 1e-2
    delta_floor: float = 1e-3
    transform: Optional[ScaleFunction] = None

    def __post_init__(self):
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("indices must be strictly increasing")
        if any(a <= 0 for a in self.alphas):
            raise ValueError("alphas must be positive")
        if not self.test_functions:
            raise ValueError("at least one test function required")

    @property
    def interval(self) -> Interval:
        return self.speed.interval

    def limit_scale(self) -> ScaleFunction:
        if self.limit_set is None:
            return natural_scale(self.interval)
        return scale_from_set(self.limit_set)


@dataclass(frozen=True)
class NestingReport:
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SeriesSummary:
    alpha: float
    test_fn: str
    column: str                     # "F0" or "F"
    errors: tuple[float, ...]
    final_error: float
    monotone_tail: bool
    verdict: Verdict


@dataclass
class ConvergenceReport:
    scenario: str
    indices: tuple[int, ...]
    alphas: tuple[float, ...]
    test_fns: tuple[str, ...]
    series: list[SeriesSummary]
    verdict: Verdict
    nesting: NestingReport
    corollary: Optional[CorollaryCondition]
    n_nodes: int
    radius: float
    merged_cells: int
    tolerance: float
    delta_floor: float

    def errors(self, alpha: float, test_fn: str, column: str) -> tuple[float, ...]:
        for s in self.series:
            if s.alpha == alpha and s.test_fn == test_fn and s.column == column:
                return s.errors
        raise KeyError((alpha, test_fn, column))

    def column_verdicts(self, column: str) -> list[Verdict]:
        return [s.verdict for s in self.series if s.column == column]

    def csv_rows(self) -> list[tuple]:
        rows = []
        for alpha in self.alphas:
            for fn in self.test_fns:
                e0 = self.errors(alpha, fn, "F0")
                e1 = self.errors(alpha, fn, "F")
                for i, n in enumerate(self.indices):
                    rows.append((n, alpha, fn, e0[i], e1[i],
                                 self.n_nodes, self.radius))
        return rows


CSV_HEADER = ("n", "alpha", "test_fn", "error_to_limit_F0", "error_to_limit_F",
              "N", "R")


# ---------------------------------------------------------------------------
# structural hypothesis checks

def _probe_intervals(window: tuple[float, float],
                     scales: Sequence[int] = (4, 16, 64),
                     per_scale: int = 8) -> list[tuple[float, float]]:
    lo, hi = window
    out = []
    for s in scales:
        length = (hi - lo) / s
        for i in range(per_scale):
            start = lo + (hi - lo - length) * i / max(1, per_scale - 1)
            out.append((start, start + length))
    return out


def check_nested_domains(sets: Sequence[CharacteristicSet],
                         limit: Optional[CharacteristicSet],
                         direction: Direction,
                         window: tuple[float, float]) -> NestingReport:
    """Sampled inclusion chain on probe intervals.

    Decreasing: limit <= G_{n+1} <= G_n in measure.  Increasing:
    G_n <= G_{n+1}, and the final member covers fixed windows around the
    base point.
    """
    probes = _probe_intervals(window)
    slack = 1e-9

    def dominates(big: CharacteristicSet, small) -> Optional[tuple]:
        for c, d in probes:
            mb = big.measure(c, d)
            ms = small.measure(c, d) if small is not None else (d - c)
            if ms > mb + slack * (1.0 + abs(mb)):
                return (c, d, ms, mb)
        return None

    if direction is Direction.DECREASING:
        chain = list(sets) + ([limit] if limit is not None else [])
        for a, b in zip(chain[:-1], chain[1:]):
            bad = dominates(a, b)
            if bad:
                return NestingReport(False, f"measure increased along the chain on {bad[:2]}")
        return NestingReport(True)
    # increasing
    for a, b in zip(sets[:-1], sets[1:]):
        bad = dominates(b, a)
        if bad:
            return NestingReport(False, f"sequence not increasing on {bad[:2]}")
    lo, hi = window
    e = 0.5 * (lo + hi)
    last = sets[-1]
    for half in (1.0, 2.0):
        c, d = e - half, e + half
        if c < lo or d > hi:
            continue
        cover = last.measure(c, d)
        if (d - c) - cover > 1e-6 * (d - c):
            return NestingReport(False, f"final member does not cover ({c}, {d})")
    return NestingReport(True)


def corollary31_check(speed: SpeedMeasure, limit: Optional[CharacteristicSet],
                      sets: Sequence[CharacteristicSet],
                      cut: Optional[float] = None) -> CorollaryCondition:
    """Which sufficient condition (if any) a decreasing scenario satisfies."""
    lo_mass, hi_mass = speed.one_sided_masses()
    if math.isinf(lo_mass) and math.isinf(hi_mass):
        return CorollaryCondition.CONDITION1
    interval = speed.interval
    cut = interval.e if cut is None else cut
    if limit is None:
        return CorollaryCondition.CONDITION2  # full set: nothing to inherit
    for side_tail in ((interval.a, cut), (cut, interval.b)):
        g_tail = limit.measure(*side_tail)
        if math.isfinite(g_tail):
            if not any(math.isfinite(s.measure(*side_tail)) for s in sets):
                return CorollaryCondition.NEITHER
    return CorollaryCondition.CONDITION2


# ---------------------------------------------------------------------------

def run_convergence(scn: Scenario, threads: int = 1) -> ConvergenceReport:
    sets = [scn.set_for(n) for n in scn.indices]
    for n, g in zip(scn.indices, sets):
        if not g.is_admissible(depth=16, probes_per_level=6):
            raise AdmissibilityError(f"sequence member n={n} failed the sampled check")
    if scn.limit_set is not None and not scn.limit_set.is_admissible(
            depth=16, probes_per_level=6):
        raise AdmissibilityError("limit set failed the sampled check")

    limit_scale = scn.limit_scale()
    lim_f0 = DirichletSpaceSpec(limit_scale, scn.speed, BoundaryCondition.ABSORBING)
    lim_f = lim_f0.with_bc(BoundaryCondition.FULL)

    skeleton = _common_skeleton(lim_f0, sets, scn.grid)
    window = (float(skeleton[0]), float(skeleton[-1]))
    nesting = check_nested_domains(sets, scn.limit_set, scn.direction, window)
    corollary = (corollary31_check(scn.speed, scn.limit_set, sets)
                 if scn.direction is Direction.DECREASING else None)

    # test functions are sampled on the untransformed skeleton; under a
    # spatial transform those same vectors represent f o j^{-1} on the image
    fvals = {name: np.asarray(fn(skeleton), float)
             for name, fn in scn.test_functions.items()}

    geo = None
    grid_nodes = skeleton
    if scn.transform is not None:
        geo = TransformGeometry(scn.transform)
        grid_nodes = np.array([scn.transform(float(x)) for x in skeleton])
        # seed the inverse cache with the known node preimages; dual-cell
        # midpoints still go through bisection once each
        for x, y in zip(skeleton, grid_nodes):
            geo._inv_cache[float(y)] = float(x)

    def realize(spec: DirichletSpaceSpec) -> DirichletSpaceSpec:
        if geo is None:
            return spec
        return spatial_transform(spec, scn.transform, geo)

    lim_f0_r, lim_f_r = realize(lim_f0), realize(lim_f)
    grid_f0 = build_grid(lim_f0_r, scn.grid, skeleton=grid_nodes)
    grid_f = build_grid(lim_f_r, scn.grid, skeleton=grid_nodes)
    mat_f0, mat_f = GeneratorMatrix(grid_f0), GeneratorMatrix(grid_f)
    weights_grid = grid_f0

    keys = [(alpha, name) for alpha in scn.alphas for name in scn.test_functions]
    u_lim_f0 = {k: mat_f0.resolvent(k[0], fvals[k[1]]) for k in keys}
    u_lim_f = {k: mat_f.resolvent(k[0], fvals[k[1]]) for k in keys}

    def solve_index(pos: int):
        spec_n = realize(DirichletSpaceSpec(scale_from_set(sets[pos]), scn.speed,
                                            scn.bc_sequence))
        grid_n = build_grid(spec_n, scn.grid, skeleton=grid_nodes)
        mat_n = GeneratorMatrix(grid_n)
        out = {}
        for k in keys:
            u_n = mat_n.resolvent(k[0], fvals[k[1]])
            out[k] = (l2m_norm(weights_grid, u_n - u_lim_f0[k]),
                      l2m_norm(weights_grid, u_n - u_lim_f[k]))
        return grid_n.merged_cells, out

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve_index, range(len(scn.indices))))
    else:
        results = [solve_index(i) for i in range(len(scn.indices))]

    merged = max([grid_f0.merged_cells] + [r[0] for r in results])
    target_col = "F0" if scn.bc_limit is BoundaryCondition.ABSORBING else "F"
    series: list[SeriesSummary] = []
    for k in keys:
        per_col = {col: tuple(r[1][k][pick] for r in results)
                   for col, pick in (("F0", 0), ("F", 1))}
        # the off-target column is judged against a separation level tied to
        # the target column's final error, not the scenario tolerance
        target_final = per_col[target_col][-1]
        separation = max(scn.delta_floor, 10.0 * target_final)
        for col, errs in per_col.items():
            series.append(_summarize(k, col, errs, scn, nesting.ok,
                                     None if col == target_col else separation))
    verdict = _aggregate([s.verdict for s in series if s.column == target_col])
    return ConvergenceReport(
        scenario=scn.name, indices=scn.indices, alphas=scn.alphas,
        test_fns=tuple(scn.test_functions), series=series, verdict=verdict,
        nesting=nesting, corollary=corollary, n_nodes=len(skeleton),
        radius=scn.grid.radius, merged_cells=merged,
        tolerance=scn.tolerance, delta_floor=scn.delta_floor)


def _common_skeleton(limit_spec: DirichletSpaceSpec,
                     sets: Sequence[CharacteristicSet],
                     cfg: GridConfig) -> np.ndarray:
    base = node_skeleton(limit_spec, cfg)
    lo, hi = float(base[0]), float(base[-1])
    extras: list[float] = []
    cap = max(cfg.n_nodes // 8, 32)
    for g in sets:
        extras.extend(g.refinement_points(lo, hi, cap))
    if not extras:
        return base
    nodes = np.unique(np.concatenate([base, np.array(extras)]))
    nodes = _dedupe(nodes, (hi - lo) * 1e-7)
    nodes[0], nodes[-1] = lo, hi
    return nodes


def _summarize(key, column: str, errs: tuple[float, ...], scn: Scenario,
               nesting_ok: bool, separation: Optional[float] = None) -> SeriesSummary:
    half = len(errs) // 2
    tail = errs[half:]
    monotone = all(tail[i + 1] <= tail[i] * 1.05 + 1e-14
                   for i in range(len(tail) - 1))
    final = errs[-1]
    no_conv_level = scn.tolerance if separation is None else max(scn.tolerance,
                                                                 separation)
    if final <= scn.tolerance and monotone and nesting_ok:
        verdict = Verdict.CONVERGENCE_OBSERVED
    elif min(tail) >= no_conv_level:
        verdict = Verdict.NO_CONVERGENCE
    else:
        verdict = Verdict.INCONCLUSIVE
    return SeriesSummary(alpha=key[0], test_fn=key[1], column=column,
                         errors=errs, final_error=final,
                         monotone_tail=monotone, verdict=verdict)


def _aggregate(verdicts: Sequence[Verdict]) -> Verdict:
    if all(v is Verdict.CONVERGENCE_OBSERVED for v in verdicts):
        return Verdict.CONVERGENCE_OBSERVED
    if all(v is Verdict.NO_CONVERGENCE for v in verdicts):
        return Verdict.NO_CONVERGENCE
    return Verdict.INCONCLUSIVE


def self_convergence_errors(speed: SpeedMeasure, charset: CharacteristicSet,
                            cfg: GridConfig, alphas=DEFAULT_ALPHAS) -> list[float]:
    """Errors of a constant sequence against itself; zero up to solver noise.

    Only the column matching the sequence's boundary condition is returned;
    the other column carries the absorbing/full gap when boundaries are
    regular.
    """
    scn = Scenario(name="self", speed=speed, set_for=lambda n: charset,
                   limit_set=charset, direction=Direction.DECREASING,
                   alphas=tuple(alphas), indices=(1, 2, 4), grid=cfg)
    rep = run_convergence(scn)
    return [max(s.errors) for s in rep.series if s.column == "F0"]
