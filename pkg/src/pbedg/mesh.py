"""One-dimensional meshes of [0, v_max] and the orthonormal Legendre basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre


@dataclass(frozen=True, eq=False)
class Mesh:
    """Partition ``0 = v_{1/2} < ... < v_{L+1/2} = v_max`` of the size axis.

    Only the edges are stored; centers and widths are derived from them so
    that nested refinements never accumulate rounding drift.
    """

    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("a mesh needs at least two edges")
        if not np.all(np.isfinite(edges)):
            raise ValueError("mesh edges must be finite")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("mesh edges must be strictly increasing")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def L(self) -> int:
        return self.edges.size - 1

    @property
    def v_max(self) -> float:
        return float(self.edges[-1])

    @cached_property
    def left(self) -> np.ndarray:
        return self.edges[:-1]

    @cached_property
    def right(self) -> np.ndarray:
        return self.edges[1:]

    @cached_property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @cached_property
    def widths(self) -> np.ndarray:
        return self.edges[1:] - self.edges[:-1]

    @property
    def dv(self) -> float:
        """Smallest cell width."""
        return float(self.widths.min())

    def to_reference(self, i: int, v):
        return 2.0 * (np.asarray(v, dtype=float) - self.centers[i]) / self.widths[i]

    def to_physical(self, i: int, x):
        return self.centers[i] + 0.5 * self.widths[i] * np.asarray(x, dtype=float)

    def locate(self, v) -> np.ndarray:
        """Cell index containing each ``v`` (right edge belongs to the last cell)."""
        idx = np.searchsorted(self.edges, v, side="right") - 1
        return np.clip(idx, 0, self.L - 1)

    def __repr__(self):
        return f"Mesh(L={self.L}, v_max={self.v_max:g}, dv={self.dv:.4g})"


def build_power_mesh(v_max: float, L: int, exponent: float = 3.0) -> Mesh:
    """Graded mesh with edges ``v_max * (i/L)**exponent``."""
    if not (np.isfinite(v_max) and np.isfinite(exponent)):
        raise ValueError("non-finite mesh parameters")
    if L < 1:
        raise ValueError("L must be at least 1")
    if v_max <= 0 or exponent < 1:
        raise ValueError("need v_max > 0 and exponent >= 1")
    i = np.arange(L + 1, dtype=float)
    edges = v_max * (i / L) ** exponent
    edges[-1] = v_max
    return Mesh(edges)


def build_uniform_mesh(v_max: float, L: int) -> Mesh:
    return build_power_mesh(v_max, L, 1.0)


def build_log_mesh(v_lo: float, v_max: float, L: int) -> Mesh:
    """Edge 0 followed by ``L`` edges log-uniform between ``v_lo`` and ``v_max``."""
    if not (np.isfinite(v_lo) and np.isfinite(v_max)):
        raise ValueError("non-finite mesh parameters")
    if v_lo <= 0 or v_lo >= v_max:
        raise ValueError("need 0 < v_lo < v_max")
    if L < 2:
        raise ValueError("L must be at least 2")
    inner = np.logspace(np.log10(v_lo), np.log10(v_max), L)
    inner[0], inner[-1] = v_lo, v_max
    return Mesh(np.concatenate([[0.0], inner]))


def refine_split(mesh: Mesh) -> Mesh:
    """Split every cell into two equal halves."""
    edges = np.empty(2 * mesh.L + 1)
    edges[0::2] = mesh.edges
    edges[1::2] = mesh.centers
    return Mesh(edges)


def basis_eval(j: int, x, k: int | None = None):
    """Orthonormal Legendre function ``sqrt((2j+1)/2) P_j(x)`` on [-1, 1]."""
    if j < 0 or (k is not None and j > k):
        raise ValueError(f"basis index {j} out of range")
    coef = np.zeros(j + 1)
    coef[j] = np.sqrt((2 * j + 1) / 2.0)
    return legendre.legval(x, coef)


@dataclass(frozen=True)
class Basis:
    """Degree-``k`` orthonormal modal basis on the reference interval."""

    k: int
    _coef: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("polynomial degree must be at least 1")
        coef = np.diag(np.sqrt((2 * np.arange(self.k + 1) + 1) / 2.0))
        object.__setattr__(self, "_coef", coef)

    @property
    def size(self) -> int:
        return self.k + 1

    def eval(self, x) -> np.ndarray:
        """Values of all basis functions; shape ``x.shape + (k+1,)``."""
        x = np.asarray(x, dtype=float)
        return np.moveaxis(legendre.legval(x, self._coef.T, tensor=True), 0, -1)

    def deriv(self, x) -> np.ndarray:
        """Reference-coordinate derivatives; shape ``x.shape + (k+1,)``."""
        x = np.asarray(x, dtype=float)
        dcoef = np.zeros((self.k + 1, self.k))
        for j in range(self.k + 1):
            d = legendre.legder(self._coef[j])
            dcoef[j, : d.size] = d
        return np.moveaxis(legendre.legval(x, dcoef.T, tensor=True), 0, -1)

    @cached_property
    def left_trace(self) -> np.ndarray:
        return self.eval(-1.0)

    @cached_property
    def right_trace(self) -> np.ndarray:
        return self.eval(1.0)


@dataclass
class DGSolution:
    """Modal coefficients ``coeffs[i, j]`` of a piecewise polynomial."""

    mesh: Mesh
    basis: Basis
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.mesh.L, self.basis.size):
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"({self.mesh.L}, {self.basis.size})"
            )

    @classmethod
    def zeros(cls, mesh: Mesh, basis: Basis) -> "DGSolution":
        return cls(mesh, basis, np.zeros((mesh.L, basis.size)))

    def copy(self) -> "DGSolution":
        return DGSolution(self.mesh, self.basis, self.coeffs.copy())

    def eval_cell(self, i: int, v):
        """Evaluate ``n_h`` restricted to cell ``i`` at points of that cell."""
        v = np.asarray(v, dtype=float)
        lo, hi = self.mesh.edges[i], self.mesh.edges[i + 1]
        tol = 1e-12 * max(abs(hi), 1.0)
        if np.any(v < lo - tol) or np.any(v > hi + tol):
            raise ValueError(f"point outside cell {i} = [{lo}, {hi}]")
        x = np.clip(self.mesh.to_reference(i, v), -1.0, 1.0)
        return self.basis.eval(x) @ self.coeffs[i]

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        idx = self.mesh.locate(v)
        x = np.clip(2.0 * (v - self.mesh.centers[idx]) / self.mesh.widths[idx], -1.0, 1.0)
        return np.einsum("...j,...j->...", self.basis.eval(x), self.coeffs[idx])

    def trace_left(self) -> np.ndarray:
        """``(n_h)^+_{i-1/2}`` for every cell."""
        return self.coeffs @ self.basis.left_trace

    def trace_right(self) -> np.ndarray:
        """``(n_h)^-_{i+1/2}`` for every cell."""
        return self.coeffs @ self.basis.right_trace

    def cell_averages(self) -> np.ndarray:
        return self.coeffs[:, 0] / np.sqrt(2.0)


def solution_eval(sol: DGSolution, i: int, v):
    return sol.eval_cell(i, v)
