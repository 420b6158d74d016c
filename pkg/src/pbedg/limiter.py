"""Moment-conserving positivity scaling limiter.

On a cell where the sampled minimum ``-m`` of ``n_h`` is negative the
polynomial is replaced by ``theta * (n_h + m)`` with

    theta = M_s / (M_s + m * int_I v^s dv),   M_s = int_I v^s n_h dv,

which is nonnegative at every sample point and keeps ``M_s`` unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mesh import Basis, Mesh
from .quadrature import gauss_legendre, gauss_lobatto

SQRT2 = math.sqrt(2.0)


class LimiterError(ValueError):
    """Raised when a cell's s-th moment is genuinely negative."""

    def __init__(self, cell: int, moment: float):
        super().__init__(f"negative moment {moment:.3e} in cell {cell}; limiter precondition violated")
        self.cell = cell
        self.moment = moment


@dataclass(frozen=True)
class LimiterConfig:
    enabled: bool = True
    s: int = 1
    dense_sampling: bool = False

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("limiter moment order must be nonnegative")


@lru_cache(maxsize=None)
def sample_points(k: int, n_lobatto: int | None = None, dense: bool = False) -> np.ndarray:
    """Fixed reference sample points: Gauss-Lobatto nodes, optionally plus 64 Chebyshev points."""
    pts = gauss_lobatto(n_lobatto or k + 2).nodes
    if dense:
        cheb = np.cos(np.pi * (np.arange(64) + 0.5) / 64)
        pts = np.concatenate([pts, cheb])
    return np.sort(pts)


def _critical_points(coeffs: np.ndarray) -> np.ndarray:
    """Interior stationary point of each quadratic cell polynomial (NaN if none)."""
    # n(x) = a0 + a1 x + a2 x^2 in the reference variable
    c1, c2 = coeffs[..., 1], coeffs[..., 2]
    a1 = math.sqrt(1.5) * c1
    a2 = 1.5 * math.sqrt(2.5) * c2
    with np.errstate(divide="ignore", invalid="ignore"):
        x = -a1 / (2.0 * a2)
    x = np.where((a2 != 0) & (np.abs(x) < 1.0), x, np.nan)
    return x


def cell_min(coeffs, basis: Basis, samples=None) -> np.ndarray:
    """Minimum of each cell polynomial over the sample set.

    ``coeffs`` has shape ``(k+1,)`` or ``(L, k+1)``.  For ``k <= 2`` the
    closed-form stationary point is added, so the result is the exact minimum.
    """
    c = np.asarray(coeffs, dtype=float)
    if samples is None:
        samples = sample_points(basis.k)
    vals = c @ basis.eval(np.asarray(samples)).T
    out = vals.min(axis=-1)
    if basis.k == 2:
        x = _critical_points(c)
        ok = ~np.isnan(x)
        if np.any(ok):
            xv = np.where(ok, x, 0.0)
            crit = np.sum(c * basis.eval(xv), axis=-1)
            out = np.where(ok, np.minimum(out, crit), out)
    return out


def moment_row(a: float, b: float, basis: Basis, s: int) -> np.ndarray:
    """``int_a^b v^s phi_j(v) dv`` for each basis function."""
    rule = gauss_legendre(basis.k // 2 + s // 2 + 2)
    v = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes
    return 0.5 * (b - a) * (rule.weights * v**s) @ basis.eval(rule.nodes)


def power_integral(a, b, s: int):
    """``int_a^b v^s dv``.

    Evaluated by Gauss quadrature rather than ``(b^{s+1} - a^{s+1})/(s+1)``,
    which cancels catastrophically on narrow cells far from the origin.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rule = gauss_legendre(s // 2 + 1)
    v = 0.5 * (a + b)[..., None] + 0.5 * (b - a)[..., None] * rule.nodes
    return 0.5 * (b - a) * np.sum(rule.weights * v**s, axis=-1)


class Limiter:
    """The limiter bound to a mesh and basis, acting on ``(L, k+1)`` coefficient arrays."""

    def __init__(self, mesh: Mesh, basis: Basis, config: LimiterConfig | None = None,
                 n_lobatto: int | None = None):
        self.mesh = mesh
        self.basis = basis
        self.config = config or LimiterConfig()
        self.samples = sample_points(basis.k, n_lobatto, self.config.dense_sampling)
        self._phi = basis.eval(self.samples)  # (S, k+1)
        s = self.config.s
        self.weights = np.array([moment_row(a, b, basis, s) for a, b in zip(mesh.left, mesh.right)])
        # int_I v^s dv from the same rule as the moments, so that adding a constant
        # changes the computed moment by exactly m * power
        self.power = SQRT2 * self.weights[:, 0]

    @property
    def s(self) -> int:
        return self.config.s

    def moments(self, c: np.ndarray, cells=None) -> np.ndarray:
        """Per-cell s-th moments (of the rows ``c`` belonging to ``cells``)."""
        w = self.weights if cells is None else self.weights[cells]
        return np.sum(w * c, axis=1)

    def minima(self, c: np.ndarray) -> np.ndarray:
        vals = c @ self._phi.T
        out = vals.min(axis=1)
        if self.basis.k == 2:
            out = np.minimum(out, cell_min(c, self.basis, self.samples))
        return out

    def __call__(self, c: np.ndarray, atol: float | np.ndarray = 0.0):
        """Return ``(limited coefficients, number of modified cells)``.

        Cell moments in ``[-atol, 0)`` are treated as zero; anything more
        negative raises :class:`LimiterError`.
        """
        if not self.config.enabled:
            return c, 0
        mins = self.minima(c)
        bad = np.flatnonzero(mins < 0.0)
        if bad.size == 0:
            return c, 0
        M = self.moments(c[bad], bad)
        m = -mins[bad]
        tol = np.maximum(atol, 1e-13 * (np.sum(np.abs(self.weights[bad] * c[bad]), axis=1)
                                        + m * self.power[bad]))
        worst = np.flatnonzero(M < -tol)
        if worst.size:
            i = worst[0]
            raise LimiterError(int(bad[i]), float(M[i]))
        M = np.maximum(M, 0.0)
        theta = M / (M + m * self.power[bad])
        out = c.copy()
        out[bad] = theta[:, None] * c[bad]
        out[bad, 0] += theta * m * SQRT2
        return out, int(bad.size)


def apply_limiter(coeffs, cell, config: LimiterConfig | None = None, basis: Basis | None = None,
                  n_lobatto: int | None = None) -> np.ndarray:
    """Limit a single cell polynomial on ``cell = (a, b)``."""
    c = np.asarray(coeffs, dtype=float)
    basis = basis or Basis(c.size - 1)
    lim = Limiter(Mesh(np.array(cell, dtype=float)), basis, config, n_lobatto)
    out, _ = lim(c[None, :])
    return out[0]
