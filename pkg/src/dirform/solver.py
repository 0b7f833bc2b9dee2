"""Tridiagonal generator matrices, resolvents, and semigroups.

The generator acts on node values as

    (L u)_i = [ (u_{i+1} - u_i)/ds_i - (u_i - u_{i-1})/ds_{i-1} ] / (2 dm_i)

which is symmetric in the mass-weighted inner product.  Resolvent systems
are solved in the equivalent symmetric-positive form

    (alpha W + Q) u = W f,     W = diag(dm),
    Q u . u = 1/2 * sum (u_{i+1} - u_i)^2 / ds_i,

with Dirichlet rows pinning edge values to zero and zero-flux rows left as
the natural first/last row of Q.  Degenerate cells (scale increment below
the grid's merge floor) are glued into clusters before solving and the
cluster value is broadcast back to the member nodes.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_banded
from numpy.linalg import LinAlgError

from .errors import SingularSystem
from .grids import Grid, RowKind


class GeneratorMatrix:
    """Clustered tridiagonal realization of the generator for one grid."""

    def __init__(self, grid: Grid):
        self.grid = grid
        cl = grid.cluster
        m = grid.n_clusters
        cdm = np.zeros(m)
        np.add.at(cdm, cl, grid.dm)
        cdm[0] += grid.edge_lump[0]
        cdm[-1] += grid.edge_lump[1]
        # connecting scale increments: one non-degenerate cell between
        # consecutive clusters; intra-cluster increments are dropped
        cds = np.zeros(max(m - 1, 0))
        for i in range(len(grid.nodes) - 1):
            if cl[i + 1] > cl[i]:
                cds[cl[i]] = grid.ds[i]
        self.cdm = cdm
        self.cds = cds
        self.cl = cl
        self._w = 0.5 / cds if m > 1 else np.zeros(0)

    # -- assembly ----------------------------------------------------------

    def _banded(self, alpha: float) -> tuple[np.ndarray, np.ndarray]:
        m = len(self.cdm)
        w = self._w
        diag = alpha * self.cdm.copy()
        diag[:-1] += w
        diag[1:] += w
        upper = np.zeros(m)
        lower = np.zeros(m)
        upper[1:] = -w
        lower[:-1] = -w
        return np.vstack([upper, diag, lower]), diag

    def _apply_rows(self, ab: np.ndarray, rhs: np.ndarray) -> None:
        if self.grid.row_lo is RowKind.DIRICHLET:
            ab[1, 0] = 1.0
            ab[0, 1] = 0.0
            rhs[0] = 0.0
        if self.grid.row_hi is RowKind.DIRICHLET:
            ab[1, -1] = 1.0
            ab[2, -2] = 0.0
            rhs[-1] = 0.0

    def restrict(self, values: np.ndarray) -> np.ndarray:
        """Mass-weighted averages of node values per cluster."""
        num = np.zeros(len(self.cdm))
        den = np.zeros(len(self.cdm))
        np.add.at(num, self.cl, self.grid.dm * values)
        np.add.at(den, self.cl, self.grid.dm)
        return num / den

    def expand(self, cluster_values: np.ndarray) -> np.ndarray:
        return cluster_values[self.cl]

    # -- operations ----------------------------------------------------------

    def resolvent(self, alpha: float, f: np.ndarray) -> np.ndarray:
        """u = (alpha - L)^{-1} f as node values."""
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        fc = self.restrict(np.asarray(f, float))
        ab, _ = self._banded(alpha)
        rhs = self.cdm * fc
        self._apply_rows(ab, rhs)
        try:
            uc = solve_banded((1, 1), ab, rhs)
        except (LinAlgError, ValueError) as exc:
            raise SingularSystem(str(exc)) from exc
        # pivoting can leave the pinned entries at rounding level; make the
        # boundary contract exact
        if self.grid.row_lo is RowKind.DIRICHLET:
            uc[0] = 0.0
        if self.grid.row_hi is RowKind.DIRICHLET:
            uc[-1] = 0.0
        return self.expand(uc)

    def semigroup(self, t: float, f: np.ndarray, steps: int) -> np.ndarray:
        """Crank-Nicolson propagation of exp(tL) f over uniform substeps."""
        if t <= 0:
            raise ValueError("t must be positive")
        if steps < 1:
            raise ValueError("steps must be >= 1")
        tau = t / steps
        m = len(self.cdm)
        w = self._w
        diag_q = np.zeros(m)
        diag_q[:-1] += w
        diag_q[1:] += w
        d_a = self.cdm + 0.5 * tau * diag_q
        d_b = self.cdm - 0.5 * tau * diag_q
        off_a = 0.5 * tau * (-w)
        upper = np.zeros(m)
        lower = np.zeros(m)
        upper[1:] = off_a
        lower[:-1] = off_a
        ab = np.vstack([upper, d_a, lower])
        dir_lo = self.grid.row_lo is RowKind.DIRICHLET
        dir_hi = self.grid.row_hi is RowKind.DIRICHLET
        if dir_lo:
            ab[1, 0] = 1.0
            ab[0, 1] = 0.0
        if dir_hi:
            ab[1, -1] = 1.0
            ab[2, -2] = 0.0
        u = self.restrict(np.asarray(f, float))
        if dir_lo:
            u[0] = 0.0
        if dir_hi:
            u[-1] = 0.0
        for _ in range(steps):
            rhs = d_b * u
            rhs[:-1] += 0.5 * tau * w * u[1:]
            rhs[1:] += 0.5 * tau * w * u[:-1]
            if dir_lo:
                rhs[0] = 0.0
            if dir_hi:
                rhs[-1] = 0.0
            try:
                u = solve_banded((1, 1), ab, rhs)
            except (LinAlgError, ValueError) as exc:
                raise SingularSystem(str(exc)) from exc
            if dir_lo:
                u[0] = 0.0
            if dir_hi:
                u[-1] = 0.0
        return self.expand(u)

    def apply_generator(self, values: np.ndarray) -> np.ndarray:
        """L u on clusters, expanded back to nodes (interior stencil rows)."""
        u = self.restrict(np.asarray(values, float))
        sub, diag, sup = self.tridiagonal()
        out = diag * u
        out[:-1] += sup[:-1] * u[1:]
        out[1:] += sub[1:] * u[:-1]
        return self.expand(out)

    def dirichlet_energy(self, values: np.ndarray) -> float:
        """Discrete form value ((-L)u, u)_m = u^T Q u."""
        u = self.restrict(np.asarray(values, float))
        du = np.diff(u)
        return float(np.sum(0.5 * du * du / self.cds))

    def tridiagonal(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(sub, diag, super) of L on clusters; boundary rows per row kind.

        Interior rows have zero row sum and satisfy the mass-symmetry
        relation dm_i L_{i,i+1} = dm_{i+1} L_{i+1,i}.
        """
        m = len(self.cdm)
        sub = np.zeros(m)
        diag = np.zeros(m)
        sup = np.zeros(m)
        w = self._w
        for i in range(m):
            left = w[i - 1] if i > 0 else 0.0
            right = w[i] if i < m - 1 else 0.0
            if i > 0:
                sub[i] = left / self.cdm[i]
            if i < m - 1:
                sup[i] = right / self.cdm[i]
            diag[i] = -(left + right) / self.cdm[i]
        if self.grid.row_lo is RowKind.DIRICHLET:
            sub[0] = sup[0] = 0.0
            diag[0] = 0.0
        if self.grid.row_hi is RowKind.DIRICHLET:
            sub[-1] = sup[-1] = 0.0
            diag[-1] = 0.0
        return sub, diag, sup

    def residual(self, alpha: float, f: np.ndarray, u: np.ndarray) -> float:
        """Relative residual of (alpha W + Q) u = W f on interior clusters."""
        fc = self.restrict(np.asarray(f, float))
        uc = self.restrict(np.asarray(u, float))
        ab, _ = self._banded(alpha)
        rhs = self.cdm * fc
        self._apply_rows(ab, rhs)
        upper, diag, lower = ab
        lhs = diag * uc
        lhs[:-1] += upper[1:] * uc[1:]
        lhs[1:] += lower[:-1] * uc[:-1]
        denom = float(np.linalg.norm(rhs)) or 1.0
        return float(np.linalg.norm(lhs - rhs)) / denom


def l2m_inner(grid: Grid, f: np.ndarray, g: np.ndarray) -> float:
    """Inner product in L^2(m) using the grid's mass weights."""
    return float(np.sum(np.asarray(f, float) * np.asarray(g, float) * grid.dm))


def l2m_norm(grid: Grid, f: np.ndarray) -> float:
    return math.sqrt(max(l2m_inner(grid, f, f), 0.0))
