"""Declarative scenario configuration: a small versioned TOML schema.

The schema mirrors the scenario structure: an interval, a speed measure
from a fixed whitelist, a base characteristic set, an optional sequence
(comb, window, or constant), the limit and its boundary condition, solver
knobs, and the run battery.  Parsing is strict: unknown keys and
out-of-range values raise ConfigError naming the offending key.  A parsed
configuration serializes back to canonical text, and parse(serialize(x))
equals x.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .convergence import DEFAULT_ALPHAS, DEFAULT_BATTERY, DEFAULT_INDICES, Direction, Scenario
from .errors import ConfigError
from .grids import GridConfig
from .interval import Interval
from .scale import ScaleFunction, natural_scale
from .sets import (CellMasses, CharacteristicSet, IntervalUnionSet, comb_sequence,
                   fat_cantor, window_sequence)
from .spaces import BoundaryCondition, DirichletSpaceSpec
from .speed import SpeedMeasure, cauchy, gaussian, lebesgue, rational, stieltjes_of_scale

SCHEMA_VERSION = 1

SPEED_KINDS = ("lebesgue", "cauchy", "gaussian", "rational", "stieltjes")
SET_KINDS = ("fat_cantor", "interval_union", "full")
SEQUENCE_KINDS = ("comb", "window", "constant")
BOUNDARIES = ("absorbing", "full")
LIMIT_SETS = ("base", "full")
FN_NAMES = tuple(DEFAULT_BATTERY)


@dataclass(frozen=True)
class IntervalConfig:
    a: float = -math.inf
    b: float = math.inf
    e: float = 0.0


@dataclass(frozen=True)
class SpeedConfig:
    kind: str = "lebesgue"
    alpha: float = 0.5
    atoms: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class SetConfig:
    kind: str = "fat_cantor"
    base: float = 0.25
    ratio: float = 0.5
    plateau: int = 0
    depth: int = 48
    pieces: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class SequenceConfig:
    kind: str = "comb"
    indices: tuple[int, ...] = DEFAULT_INDICES


@dataclass(frozen=True)
class LimitConfig:
    set: str = "base"
    boundary: str = "absorbing"


@dataclass(frozen=True)
class SolverConfig:
    n_nodes: int = 1200
    radius: float = 10.0
    uniform_fraction: float = 0.5
    steps: int = 200


@dataclass(frozen=True)
class RunConfig:
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    test_functions: tuple[str, ...] = FN_NAMES
    tolerance: float = 1e-2
    boundary: str = "absorbing"


@dataclass(frozen=True)
class ScenarioConfig:
    interval: IntervalConfig = IntervalConfig()
    speed: SpeedConfig = SpeedConfig()
    set: SetConfig = SetConfig()
    sequence: Optional[SequenceConfig] = None
    limit: LimitConfig = LimitConfig()
    solver: SolverConfig = SolverConfig()
    run: RunConfig = RunConfig()


# ---------------------------------------------------------------------------
# parsing

def parse_config(text: str) -> ScenarioConfig:
    try:
        raw = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"not valid TOML: {exc}") from exc
    version = raw.pop("version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"version: expected {SCHEMA_VERSION}, got {version!r}")
    known = {"interval", "speed", "set", "sequence", "limit", "solver", "run"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown table {key!r}")
    return ScenarioConfig(
        interval=_parse_interval(raw.get("interval", {})),
        speed=_parse_speed(raw.get("speed", {})),
        set=_parse_set(raw.get("set", {})),
        sequence=_parse_sequence(raw["sequence"]) if "sequence" in raw else None,
        limit=_parse_limit(raw.get("limit", {})),
        solver=_parse_solver(raw.get("solver", {})),
        run=_parse_run(raw.get("run", {})),
    )


def load_config(path: str) -> ScenarioConfig:
    with open(path, "rb") as fh:
        return parse_config(fh.read().decode("utf-8"))


def _take(table: dict, table_name: str, key: str, default, caster):
    if key in table:
        try:
            return caster(table.pop(key))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{table_name}.{key}: {exc}") from exc
    return default


def _finish(table: dict, table_name: str):
    if table:
        raise ConfigError(f"unknown key {table_name}.{sorted(table)[0]}")


def _parse_interval(t: dict) -> IntervalConfig:
    t = dict(t)
    a = _take(t, "interval", "a", -math.inf, float)
    b = _take(t, "interval", "b", math.inf, float)
    e = _take(t, "interval", "e", 0.0, float)
    _finish(t, "interval")
    if not a < e < b:
        raise ConfigError("interval: need a < e < b")
    return IntervalConfig(a, b, e)


def _parse_speed(t: dict) -> SpeedConfig:
    t = dict(t)
    kind = _take(t, "speed", "kind", "lebesgue", str)
    if kind not in SPEED_KINDS:
        raise ConfigError(f"speed.kind: {kind!r} not in {SPEED_KINDS}")
    alpha = _take(t, "speed", "alpha", 0.5, float)
    if not 0.0 < alpha < 1.0:
        raise ConfigError("speed.alpha: must lie in (0, 1)")
    atoms_raw = _take(t, "speed", "atoms", [], list)
    atoms = []
    for i, pair in enumerate(atoms_raw):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ConfigError(f"speed.atoms[{i}]: expected [x, mass]")
        x, w = float(pair[0]), float(pair[1])
        if w <= 0:
            raise ConfigError(f"speed.atoms[{i}]: mass must be positive")
        atoms.append((x, w))
    _finish(t, "speed")
    return SpeedConfig(kind, alpha, tuple(atoms))


def _parse_set(t: dict) -> SetConfig:
    t = dict(t)
    kind = _take(t, "set", "kind", "fat_cantor", str)
    if kind not in SET_KINDS:
        raise ConfigError(f"set.kind: {kind!r} not in {SET_KINDS}")
    base = _take(t, "set", "base", 0.25, float)
    ratio = _take(t, "set", "ratio", 0.5, float)
    plateau = _take(t, "set", "plateau", 0, int)
    depth = _take(t, "set", "depth", 48, int)
    pieces_raw = _take(t, "set", "pieces", [], list)
    pieces = []
    for i, pair in enumerate(pieces_raw):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ConfigError(f"set.pieces[{i}]: expected [lo, hi]")
        lo, hi = float(pair[0]), float(pair[1])
        if not lo < hi:
            raise ConfigError(f"set.pieces[{i}]: need lo < hi")
        pieces.append((lo, hi))
    _finish(t, "set")
    if kind == "fat_cantor" and not (0.0 < base < 1.0 and 0.0 < ratio < 1.0):
        raise ConfigError("set.base/set.ratio: must lie in (0, 1)")
    if kind == "fat_cantor" and depth < 1:
        raise ConfigError("set.depth: must be >= 1")
    if kind == "interval_union" and not pieces:
        raise ConfigError("set.pieces: required for interval_union")
    return SetConfig(kind, base, ratio, plateau, depth, tuple(pieces))


def _parse_sequence(t: dict) -> SequenceConfig:
    t = dict(t)
    kind = _take(t, "sequence", "kind", "comb", str)
    if kind not in SEQUENCE_KINDS:
        raise ConfigError(f"sequence.kind: {kind!r} not in {SEQUENCE_KINDS}")
    indices = tuple(_take(t, "sequence", "indices", list(DEFAULT_INDICES),
                          lambda v: [int(x) for x in v]))
    _finish(t, "sequence")
    if list(indices) != sorted(set(indices)) or any(i < 1 for i in indices):
        raise ConfigError("sequence.indices: must be strictly increasing positive integers")
    return SequenceConfig(kind, indices)


def _parse_limit(t: dict) -> LimitConfig:
    t = dict(t)
    which = _take(t, "limit", "set", "base", str)
    boundary = _take(t, "limit", "boundary", "absorbing", str)
    _finish(t, "limit")
    if which not in LIMIT_SETS:
        raise ConfigError(f"limit.set: {which!r} not in {LIMIT_SETS}")
    if boundary not in BOUNDARIES:
        raise ConfigError(f"limit.boundary: {boundary!r} not in {BOUNDARIES}")
    return LimitConfig(which, boundary)


def _parse_solver(t: dict) -> SolverConfig:
    t = dict(t)
    n_nodes = _take(t, "solver", "n_nodes", 1200, int)
    radius = _take(t, "solver", "radius", 10.0, float)
    frac = _take(t, "solver", "uniform_fraction", 0.5, float)
    steps = _take(t, "solver", "steps", 200, int)
    _finish(t, "solver")
    if n_nodes < 16:
        raise ConfigError("solver.n_nodes: must be >= 16")
    if radius <= 0:
        raise ConfigError("solver.radius: must be positive")
    if not 0.0 <= frac <= 1.0:
        raise ConfigError("solver.uniform_fraction: must lie in [0, 1]")
    if steps < 1:
        raise ConfigError("solver.steps: must be >= 1")
    return SolverConfig(n_nodes, radius, frac, steps)


def _parse_run(t: dict) -> RunConfig:
    t = dict(t)
    alphas = tuple(_take(t, "run", "alphas", list(DEFAULT_ALPHAS),
                         lambda v: [float(x) for x in v]))
    fns = tuple(_take(t, "run", "test_functions", list(FN_NAMES),
                      lambda v: [str(x) for x in v]))
    tol = _take(t, "run", "tolerance", 1e-2, float)
    boundary = _take(t, "run", "boundary", "absorbing", str)
    _finish(t, "run")
    if not alphas or any(a <= 0 for a in alphas):
        raise ConfigError("run.alphas: must be positive")
    for fn in fns:
        if fn not in FN_NAMES:
            raise ConfigError(f"run.test_functions: {fn!r} not in {FN_NAMES}")
    if not fns:
        raise ConfigError("run.test_functions: at least one required")
    if tol <= 0:
        raise ConfigError("run.tolerance: must be positive")
    if boundary not in BOUNDARIES:
        raise ConfigError(f"run.boundary: {boundary!r} not in {BOUNDARIES}")
    return RunConfig(alphas, fns, tol, boundary)


# ---------------------------------------------------------------------------
# serialization (canonical form; parse o serialize is the identity)

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def dumps_config(cfg: ScenarioConfig) -> str:
    lines = [f"version = {SCHEMA_VERSION}", ""]

    def table(name: str, items: list[tuple[str, object]]):
        lines.append(f"[{name}]")
        for k, v in items:
            lines.append(f"{k} = {_fmt(v)}")
        lines.append("")

    table("interval", [("a", cfg.interval.a), ("b", cfg.interval.b),
                       ("e", cfg.interval.e)])
    table("speed", [("kind", cfg.speed.kind), ("alpha", cfg.speed.alpha),
                    ("atoms", [list(p) for p in cfg.speed.atoms])])
    table("set", [("kind", cfg.set.kind), ("base", cfg.set.base),
                  ("ratio", cfg.set.ratio), ("plateau", cfg.set.plateau),
                  ("depth", cfg.set.depth),
                  ("pieces", [list(p) for p in cfg.set.pieces])])
    if cfg.sequence is not None:
        table("sequence", [("kind", cfg.sequence.kind),
                           ("indices", list(cfg.sequence.indices))])
    table("limit", [("set", cfg.limit.set), ("boundary", cfg.limit.boundary)])
    table("solver", [("n_nodes", cfg.solver.n_nodes),
                     ("radius", cfg.solver.radius),
                     ("uniform_fraction", cfg.solver.uniform_fraction),
                     ("steps", cfg.solver.steps)])
    table("run", [("alphas", list(cfg.run.alphas)),
                  ("test_functions", list(cfg.run.test_functions)),
                  ("tolerance", cfg.run.tolerance),
                  ("boundary", cfg.run.boundary)])
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# builders

def build_interval(cfg: ScenarioConfig) -> Interval:
    ic = cfg.interval
    return Interval(ic.a, ic.b, ic.e)


def build_base_set(cfg: ScenarioConfig) -> Optional[CharacteristicSet]:
    interval = build_interval(cfg)
    sc = cfg.set
    if sc.kind == "full":
        return None
    if sc.kind == "interval_union":
        return IntervalUnionSet(sc.pieces, interval)
    masses = CellMasses(base=sc.base, ratio=sc.ratio, plateau=sc.plateau)
    return fat_cantor(masses, depth=sc.depth, interval=interval)


def build_speed(cfg: ScenarioConfig,
                base: Optional[CharacteristicSet]) -> SpeedMeasure:
    interval = build_interval(cfg)
    kind = cfg.speed.kind
    if kind == "stieltjes":
        if base is None:
            raise ConfigError("speed.kind: stieltjes needs set.kind != 'full'")
        m = stieltjes_of_scale(base.scale(), alpha=cfg.speed.alpha)
    else:
        m = {"lebesgue": lebesgue, "cauchy": cauchy,
             "gaussian": gaussian, "rational": rational}[kind](interval)
    if cfg.speed.atoms:
        m = m.with_atoms(cfg.speed.atoms)
    return m


def build_base_scale(cfg: ScenarioConfig) -> ScaleFunction:
    base = build_base_set(cfg)
    if base is None:
        return natural_scale(build_interval(cfg))
    return base.scale()


def build_limit_spec(cfg: ScenarioConfig) -> DirichletSpaceSpec:
    base = build_base_set(cfg)
    speed = build_speed(cfg, base)
    if cfg.limit.set == "full" or base is None:
        scale = natural_scale(build_interval(cfg))
    else:
        scale = base.scale()
    bc = BoundaryCondition(cfg.limit.boundary)
    return DirichletSpaceSpec(scale, speed, bc)


def build_scenario(cfg: ScenarioConfig, name: str = "config") -> Scenario:
    if cfg.sequence is None:
        raise ConfigError("sequence: required for convergence runs")
    base = build_base_set(cfg)
    if base is None:
        raise ConfigError("set.kind: a sequence needs a base set (not 'full')")
    speed = build_speed(cfg, base)
    seq_kind = cfg.sequence.kind
    if seq_kind == "comb":
        set_for = lambda n: comb_sequence(base, n)
        direction = Direction.DECREASING
    elif seq_kind == "window":
        set_for = lambda n: window_sequence(base, n)
        direction = Direction.INCREASING
    else:
        set_for = lambda n: base
        direction = Direction.DECREASING
    limit_set = None if cfg.limit.set == "full" else base
    battery = {nm: DEFAULT_BATTERY[nm] for nm in cfg.run.test_functions}
    return Scenario(
        name=name,
        speed=speed,
        set_for=set_for,
        limit_set=limit_set,
        direction=direction,
        bc_sequence=BoundaryCondition(cfg.run.boundary),
        bc_limit=BoundaryCondition(cfg.limit.boundary),
        alphas=cfg.run.alphas,
        test_functions=battery,
        indices=cfg.sequence.indices,
        grid=GridConfig(n_nodes=cfg.solver.n_nodes, radius=cfg.solver.radius,
                        uniform_fraction=cfg.solver.uniform_fraction),
        tolerance=cfg.run.tolerance,
    )
