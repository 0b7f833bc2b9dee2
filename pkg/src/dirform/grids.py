"""Grids for the generator of a scale/speed pair.

Nodes blend a uniform partition of the working window with nodes
equidistributed in the spec's scale coordinate, plus structural break points
of the characteristic set.  Scale increments come from the exact oracle;
mass weights are dual-cell masses of the speed measure (atoms land in the
cell that contains them, half-open to the right at dual boundaries).

Cells whose scale increment falls below a relative floor carry no diffusion
across them; they are merged into node clusters at solve time.  The merge
error is bounded by the floor times the number of merged cells.

Boundary rows
-------------
At each end of the (possibly truncated) window one row kind is chosen:

* the true boundary is regular and the omitted scale gap beyond the window
  is a small fraction of the window's scale range: the boundary condition
  decides (absorbing -> Dirichlet row, full -> zero-flux row);
* otherwise the omitted tail decides: infinite tail mass means excursions
  past the window are lost on resolvent time scales (Dirichlet row), finite
  tail mass means they return quickly (zero-flux row, with the tail mass
  lumped onto the edge cell).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegenerateGrid
from .scale import IdentityDensity, ScaleFunction, SetIndicatorDensity
from .spaces import BoundaryCondition, DirichletSpaceSpec, Side

ADJACENT_GAP_FRACTION = 0.1


class RowKind(Enum):
    DIRICHLET = "dirichlet"
    FLUX_ZERO = "flux_zero"


@dataclass(frozen=True)
class GridConfig:
    n_nodes: int = 1200
    radius: float = 10.0
    uniform_fraction: float = 0.5
    merge_rel: float = 1e-9
    refine: bool = True
    min_nodes: int = 16


@dataclass
class Grid:
    spec: DirichletSpaceSpec
    nodes: np.ndarray
    ds: np.ndarray                 # scale increments per cell, len N-1
    dm: np.ndarray                 # dual-cell masses per node, len N
    row_lo: RowKind
    row_hi: RowKind
    edge_lump: tuple[float, float]  # omitted tail mass added to edge cells
    merge_floor: float
    cluster: np.ndarray = field(init=False)   # node -> cluster id
    n_clusters: int = field(init=False)

    def __post_init__(self):
        cl = np.zeros(len(self.nodes), dtype=np.int64)
        c = 0
        for i in range(1, len(self.nodes)):
            if self.ds[i - 1] > self.merge_floor:
                c += 1
            cl[i] = c
        self.cluster = cl
        self.n_clusters = int(c + 1)
        if self.n_clusters < 16:
            raise DegenerateGrid(
                f"only {self.n_clusters} nondegenerate cells after merging")

    @property
    def merged_cells(self) -> int:
        return len(self.nodes) - self.n_clusters

    def window(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])


def build_grid(spec: DirichletSpaceSpec, cfg: GridConfig,
               skeleton: Optional[np.ndarray] = None) -> Grid:
    """Assemble a grid; with a skeleton, reuse those nodes (common grids)."""
    if cfg.n_nodes < cfg.min_nodes:
        raise DegenerateGrid(f"n_nodes={cfg.n_nodes} below minimum {cfg.min_nodes}")
    if skeleton is not None:
        nodes = np.asarray(skeleton, dtype=float)
    else:
        nodes = node_skeleton(spec, cfg)
    ds = np.array([spec.scale.increment(float(nodes[i]), float(nodes[i + 1]))
                   for i in range(len(nodes) - 1)])
    scale_range = float(np.sum(ds))
    if scale_range <= 0:
        raise DegenerateGrid("window has zero scale range")
    dm = _mass_weights(spec, nodes)
    row_lo, lump_lo = _boundary_row(spec, Side.LOWER, float(nodes[0]), scale_range)
    row_hi, lump_hi = _boundary_row(spec, Side.UPPER, float(nodes[-1]), scale_range)
    return Grid(spec, nodes, ds, dm, row_lo, row_hi, (lump_lo, lump_hi),
                merge_floor=cfg.merge_rel * scale_range)


def node_skeleton(spec: DirichletSpaceSpec, cfg: GridConfig) -> np.ndarray:
    """Node positions for a spec: uniform/scale-graded blend plus set points."""
    lo, hi = spec.interval.clip_window(cfg.radius)
    n_uni = int(round(cfg.n_nodes * cfg.uniform_fraction))
    n_scale = cfg.n_nodes - n_uni
    parts = []
    if n_uni >= 2:
        parts.append(np.linspace(lo, hi, n_uni))
    if n_scale >= 2:
        parts.append(_scale_graded(spec.scale, lo, hi, n_scale))
    if cfg.refine:
        pts = _set_points(spec.scale, lo, hi, cap=cfg.n_nodes // 4)
        if pts:
            parts.append(np.array(pts))
    nodes = np.unique(np.concatenate(parts))
    nodes = _dedupe(nodes, (hi - lo) * 1e-7)
    nodes[0], nodes[-1] = lo, hi
    return nodes


def _scale_graded(scale: ScaleFunction, lo: float, hi: float, n: int) -> np.ndarray:
    if isinstance(scale.density, IdentityDensity):
        return np.linspace(lo, hi, n)
    ylo = scale(lo)
    ys = np.linspace(0.0, scale.increment(lo, hi), n) + ylo
    return np.array([lo] + [scale.invert(float(y), lo, hi) for y in ys[1:-1]] + [hi])


def _set_points(scale: ScaleFunction, lo: float, hi: float, cap: int) -> list[float]:
    if not isinstance(scale.density, SetIndicatorDensity):
        return []
    pts = scale.density.charset.refinement_points(lo, hi, cap)
    return [p for p in pts if lo < p < hi]


def _dedupe(nodes: np.ndarray, tol: float) -> np.ndarray:
    keep = [float(nodes[0])]
    for x in nodes[1:]:
        if x - keep[-1] > tol:
            keep.append(float(x))
    return np.array(keep)


def _mass_weights(spec: DirichletSpaceSpec, nodes: np.ndarray) -> np.ndarray:
    mids = 0.5 * (nodes[1:] + nodes[:-1])
    edges = np.concatenate([[nodes[0]], mids, [nodes[-1]]])
    cum = np.array([spec.speed.cumulative(float(x)) for x in edges])
    dm = np.diff(cum)  # m((edge_i, edge_{i+1}]): atoms at an edge go left
    # the cumulative convention drops an atom sitting exactly on nodes[0]
    bad = dm <= 0
    if np.any(bad):
        # full support makes true zeros impossible; guard float underflow
        tiny = max(1e-300, float(np.max(dm)) * 1e-15)
        dm = np.where(bad, tiny, dm)
    return dm


def _boundary_row(spec: DirichletSpaceSpec, side: Side, edge: float,
                  scale_range: float) -> tuple[RowKind, float]:
    interval = spec.interval
    bclass = spec.boundary(side)
    if side is Side.LOWER:
        gap = spec.scale.increment(interval.a, edge)
        tail_mass = spec.speed.mass(interval.a, edge)
    else:
        gap = spec.scale.increment(edge, interval.b)
        tail_mass = spec.speed.mass(edge, interval.b)
    if bclass.s_regular and gap <= ADJACENT_GAP_FRACTION * scale_range:
        if spec.bc is BoundaryCondition.ABSORBING:
            return RowKind.DIRICHLET, 0.0
        return RowKind.FLUX_ZERO, tail_mass
    if math.isinf(tail_mass):
        return RowKind.DIRICHLET, 0.0
    return RowKind.FLUX_ZERO, tail_mass
