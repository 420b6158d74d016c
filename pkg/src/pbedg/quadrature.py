"""Line, triangle and rectangle quadrature rules.

Line rules live on [-1, 1] with weights summing to 2.  The integration
helpers rescale them so that a constant integrand returns the measure of the
physical element.  Triangle rules are stored in barycentric form with weights
summing to 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from ._triangle_tables import TABLE as _TRI_TABLE


@dataclass(frozen=True, eq=False)
class LineRule:
    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def n(self) -> int:
        return self.nodes.size

    def mapped(self, a: float, b: float):
        """Nodes on [a, b] and weights normalized to sum to ``b - a``."""
        x = 0.5 * (a + b) + 0.5 * (b - a) * self.nodes
        return x, 0.5 * (b - a) * self.weights


@dataclass(frozen=True, eq=False)
class TriangleRule:
    """Barycentric nodes ``(npts, 3)`` and weights summing to 1."""

    bary: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def n(self) -> int:
        return self.weights.size

    def mapped(self, verts):
        """Physical nodes for triangle(s) with vertices ``verts[..., 3, 2]``."""
        verts = np.asarray(verts, dtype=float)
        return np.einsum("qa,...ad->...qd", self.bary, verts)


@lru_cache(maxsize=None)
def gauss_lobatto(n: int) -> LineRule:
    """``n``-point Gauss-Lobatto rule: endpoints plus the roots of P'_{n-1}."""
    if n < 2:
        raise ValueError("Gauss-Lobatto needs at least 2 points")
    m = n - 1
    pm = np.zeros(m + 1)
    pm[m] = 1.0
    interior = np.sort(legendre.legroots(legendre.legder(pm))) if m > 1 else np.empty(0)
    # Newton polish on P'_m using the Legendre ODE for P''_m.
    for _ in range(3):
        if interior.size == 0:
            break
        d1 = legendre.legval(interior, legendre.legder(pm))
        d2 = legendre.legval(interior, legendre.legder(pm, 2))
        interior = interior - d1 / d2
    nodes = np.concatenate([[-1.0], interior, [1.0]])
    weights = 2.0 / (m * (m + 1) * legendre.legval(nodes, pm) ** 2)
    # Enforce the exact reflection symmetry of the rule.
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return LineRule(nodes, weights, 2 * n - 3)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> LineRule:
    x, w = legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return LineRule(x, w, 2 * n - 1)


def integrate_interval(rule: LineRule, cell, f) -> float:
    a, b = cell
    x, w = rule.mapped(a, b)
    return float(np.dot(w, f(x)))


TRIANGLE_DEGREES = tuple(sorted(_TRI_TABLE))


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> TriangleRule:
    """Smallest tabulated fully symmetric rule exact to at least ``degree``."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    for d in TRIANGLE_DEGREES:
        if d >= degree:
            pts, wts = _TRI_TABLE[d]
            bary = np.array(pts, dtype=float)
            weights = np.array(wts, dtype=float)
            bary.setflags(write=False)
            weights.setflags(write=False)
            return TriangleRule(bary, weights, d)
    raise ValueError(
        f"no triangle rule of degree {degree}; table maximum is {TRIANGLE_DEGREES[-1]}"
    )


def triangle_area(verts) -> np.ndarray:
    verts = np.asarray(verts, dtype=float)
    a = verts[..., 1, :] - verts[..., 0, :]
    b = verts[..., 2, :] - verts[..., 0, :]
    return 0.5 * np.abs(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])


def integrate_triangle(rule: TriangleRule, verts, f) -> float:
    """``|T| * sum_g w_g f(u_g, w_g)``; zero for a degenerate triangle."""
    area = float(triangle_area(verts))
    if area == 0.0:
        return 0.0
    pts = rule.mapped(verts)
    return area * float(np.dot(rule.weights, f(pts[:, 0], pts[:, 1])))


def rect_nodes(rule: LineRule, u_range, w_range):
    """Tensor nodes ``(u, w)`` and normalized weights (sum 1) on a rectangle."""
    ur, uw = rule.mapped(*u_range)
    wr, ww = rule.mapped(*w_range)
    U, W = np.meshgrid(ur, wr, indexing="ij")
    wts = np.outer(uw / (u_range[1] - u_range[0]), ww / (w_range[1] - w_range[0]))
    return U.ravel(), W.ravel(), wts.ravel()


def integrate_rect(rule: LineRule, u_range, w_range, f) -> float:
    area = (u_range[1] - u_range[0]) * (w_range[1] - w_range[0])
    u, w, wts = rect_nodes(rule, u_range, w_range)
    return area * float(np.dot(wts, f(u, w)))
