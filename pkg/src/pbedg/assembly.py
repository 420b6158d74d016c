"""Precomputed DG operator tensors and the semi-discrete right-hand side.

Every integral of the scheme is evaluated once, on the quadrature nodes of
the cells and of the refinement elements, and stored as small dense
tensors.  The right-hand side is then a contraction of those tensors with
the modal coefficients:

    (dv_i / 2) dc_j^i/dt = sum_m G^i_jm c_m^i + sum_m G^{-,i}_jm c_m^{i-1} + N^i_j
                         + sum_{T in A_i} A^birth_jml c_m^p c_l^q
                         - sum_{T in B_i} A^death_jml c_m^p c_l^q
                         + sum_{E in C_i} B^birth_jm c_m^q
                         - d_j^i sum_{E in D_i} B^death_m c_m^q
                         - sum_m B^i_jm c_m^i
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .geometry import (AggRefinement, BreakRefinement, build_aggregation_refinement,
                       build_breakage_refinement)
from .kernels import KernelSet
from .mesh import Basis, DGSolution, Mesh
from .quadrature import gauss_legendre, gauss_lobatto, rect_nodes, triangle_rule


@dataclass(frozen=True)
class QuadratureOrders:
    """Rule sizes; ``None`` picks ``N_G = k + 2`` and triangle degree ``2k + 2``."""

    n_lobatto: int | None = None
    triangle_degree: int | None = None

    def resolve(self, k: int) -> tuple[int, int]:
        ng = self.n_lobatto if self.n_lobatto is not None else k + 2
        td = self.triangle_degree if self.triangle_degree is not None else 2 * k + 2
        if ng < k + 2:
            raise ValueError(f"N_G = {ng} is below the minimum k + 2 = {k + 2}")
        return ng, td


@dataclass(eq=False)
class DGData:
    mesh: Mesh
    basis: Basis
    kernels: KernelSet
    n_lobatto: int
    triangle_degree: int
    growth_local: np.ndarray | None = None
    growth_upwind: np.ndarray | None = None
    growth_inflow: np.ndarray | None = None
    nucleation: np.ndarray | None = None
    agg_band: np.ndarray | None = None
    agg_p: np.ndarray | None = None
    agg_q: np.ndarray | None = None
    agg_birth: np.ndarray | None = None
    agg_death: np.ndarray | None = None
    brk_p: np.ndarray | None = None
    brk_q: np.ndarray | None = None
    brk_birth: np.ndarray | None = None
    brk_death: np.ndarray | None = None
    brk_cell: np.ndarray | None = None
    brk_weight: np.ndarray | None = None
    agg_refinement: AggRefinement | None = None
    brk_refinement: BreakRefinement | None = None

    @property
    def k(self) -> int:
        return self.basis.k

    def moment_weights(self, s: int) -> np.ndarray:
        """``W[i, j] = integral of v^s phi_j^i over I_i``."""
        return moment_weights(self.mesh, self.basis, s)


def moment_weights(mesh: Mesh, basis: Basis, s: int) -> np.ndarray:
    rule = gauss_legendre(basis.k + s // 2 + 2)
    phi = basis.eval(rule.nodes)
    v = cell_nodes(mesh, rule.nodes)
    return 0.5 * mesh.widths[:, None] * np.einsum("q,iq,qj->ij", rule.weights, v**s, phi)


def _lerp(a, b, x):
    """Map reference ``x`` in [-1, 1] onto [a, b], hitting both endpoints exactly."""
    t = 0.5 * (1.0 + x)
    return a * (1.0 - t) + b * t


def cell_nodes(mesh: Mesh, x) -> np.ndarray:
    """Physical images ``(L, len(x))`` of reference nodes in every cell."""
    return _lerp(mesh.left[:, None], mesh.right[:, None], np.asarray(x)[None, :])


def _phys_basis(basis: Basis, mesh: Mesh, cells, v):
    """``phi_j^{cells}(v)``, with the reference coordinate clipped to [-1, 1]."""
    x = 2.0 * (v - mesh.centers[cells]) / mesh.widths[cells]
    return basis.eval(np.clip(x, -1.0, 1.0))


def _compact(keys, *tensors):
    """Sum tensors that share the same key row (stable, sorted by key)."""
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    out = []
    for arr in tensors:
        acc = np.zeros((uniq.shape[0],) + arr.shape[1:])
        np.add.at(acc, inverse, arr)
        out.append(acc)
    return uniq, out


def _growth_terms(data: DGData):
    mesh, basis, G = data.mesh, data.basis, data.kernels.growth
    rule = gauss_lobatto(data.n_lobatto)
    w = rule.weights / 2.0  # normalized to sum 1
    phi = basis.eval(rule.nodes)
    dphi = basis.deriv(rule.nodes)
    v = cell_nodes(mesh, rule.nodes)
    Gv = G(v)
    # Q_{I_i}[G phi_j' phi_m] with phi_j' = (2/dv_i) dphi_j
    vol = 2.0 * np.einsum("q,iq,qj,qm->ijm", w, Gv, dphi, phi)
    g_edges = G(mesh.edges)
    right = np.outer(basis.right_trace, basis.right_trace)
    left = np.outer(basis.left_trace, basis.right_trace)
    data.growth_local = vol - g_edges[1:, None, None] * right[None]
    data.growth_upwind = g_edges[:-1, None, None] * left[None]
    data.growth_inflow = g_edges[0] * basis.left_trace


def _nucleation_terms(data: DGData):
    mesh, basis = data.mesh, data.basis
    rule = gauss_lobatto(data.n_lobatto)
    phi = basis.eval(rule.nodes)
    v = cell_nodes(mesh, rule.nodes)
    S = data.kernels.nucleation(v)
    data.nucleation = mesh.widths[:, None] * np.einsum("q,iq,qm->im", rule.weights / 2.0, S, phi)


def _aggregation_terms(data: DGData, ref: AggRefinement, compact: bool):
    mesh, basis, beta = data.mesh, data.basis, data.kernels.beta
    rule = triangle_rule(data.triangle_degree)
    low = np.flatnonzero(ref.lower)
    up = ref.mirror[low]
    verts = ref.verts[low]
    pts = rule.mapped(verts)  # (n, Q, 2)
    u, w = pts[..., 0], pts[..., 1]
    W = ref.areas[low, None] * rule.weights[None, :]
    bw = W * beta(u, w)
    band, p, q = (ref.owners[low, c][:, None] for c in range(3))
    phi_b = _phys_basis(basis, mesh, band, u + w)
    phi_u = _phys_basis(basis, mesh, p, u)
    phi_w = _phys_basis(basis, mesh, q, w)

    nt = len(ref)
    nb = basis.size
    birth = np.empty((nt, nb, nb, nb))
    death = np.empty((nt, nb, nb, nb))
    b_low = 0.5 * np.einsum("tg,tgj,tgm,tgl->tjml", bw, phi_b, phi_u, phi_w, optimize=True)
    birth[low] = b_low
    birth[up] = b_low.transpose(0, 1, 3, 2)
    # death on T: test in u; on the mirror: test in the mirrored coordinate w
    death[low] = np.einsum("tg,tgj,tgm,tgl->tjml", bw, phi_u, phi_u, phi_w, optimize=True)
    death[up] = np.einsum("tg,tgj,tgm,tgl->tjml", bw, phi_w, phi_w, phi_u, optimize=True)

    owners = np.asarray(ref.owners)
    if compact:
        owners, (birth, death) = _compact(owners, birth, death)
    data.agg_band = np.ascontiguousarray(owners[:, 0], dtype=np.intp)
    data.agg_p = np.ascontiguousarray(owners[:, 1], dtype=np.intp)
    data.agg_q = np.ascontiguousarray(owners[:, 2], dtype=np.intp)
    data.agg_birth = np.ascontiguousarray(birth)
    data.agg_death = np.ascontiguousarray(death)


def death_split_weights(mesh: Mesh, basis: Basis) -> np.ndarray:
    """Per-cell weights ``d_j`` with ``sum_j a_j d_j = 1``, where ``v = sum_j a_j phi_j``."""
    a = np.zeros((mesh.L, basis.size))
    a[:, 0] = math.sqrt(2.0) * mesh.centers
    a[:, 1] = mesh.widths / math.sqrt(6.0)
    return a / np.sum(a * a, axis=1, keepdims=True)


def _breakage_terms(data: DGData, ref: BreakRefinement):
    mesh, basis, kern = data.mesh, data.basis, data.kernels
    rate, daughter = kern.rate, kern.daughter
    nb = basis.size
    ne = len(ref)
    bbirth = np.zeros((ne, nb, nb))
    bdeath = np.zeros((ne, nb))

    def fill(idx, u, w, W):
        kern_w = W * daughter(u, w) * rate(w)
        p = ref.p[idx][:, None]
        q = ref.q[idx][:, None]
        phi_u = _phys_basis(basis, mesh, p, u)
        phi_w = _phys_basis(basis, mesh, q, w)
        bbirth[idx] = np.einsum("eg,egj,egm->ejm", kern_w, phi_u, phi_w)
        bdeath[idx] = np.einsum("eg,egm->em", kern_w * u, phi_w)

    tri = np.flatnonzero(ref.is_triangle)
    rect = np.flatnonzero(~ref.is_triangle)
    trule = triangle_rule(data.triangle_degree)
    pts = trule.mapped(ref.triangle_verts())
    fill(tri, pts[..., 0], pts[..., 1], ref.areas[tri, None] * trule.weights[None, :])

    lrule = gauss_lobatto(data.n_lobatto)
    if rect.size:
        ur, wr = ref.u_range[rect], ref.w_range[rect]
        x = lrule.nodes
        wts = np.outer(lrule.weights, lrule.weights).ravel() / 4.0
        X, Y = np.meshgrid(x, x, indexing="ij")
        X, Y = X.ravel(), Y.ravel()
        u = _lerp(ur[:, :1], ur[:, 1:], X[None, :])
        w = _lerp(wr[:, :1], wr[:, 1:], Y[None, :])
        fill(rect, u, w, ref.areas[rect, None] * wts[None, :])

    # cell term Q_{I_i}[(phi_j - d_j v) gamma phi_m]
    weight = death_split_weights(mesh, basis)
    phi = basis.eval(lrule.nodes)
    v = cell_nodes(mesh, lrule.nodes)
    test = phi[None, :, :] - weight[:, None, :] * v[:, :, None]  # (L, Q, j)
    gw = mesh.widths[:, None] * (lrule.weights / 2.0)[None, :] * rate(v)
    data.brk_cell = np.einsum("iq,iqj,qm->ijm", gw, test, phi)
    data.brk_weight = np.ascontiguousarray(weight)
    data.brk_p = np.ascontiguousarray(ref.p, dtype=np.intp)
    data.brk_q = np.ascontiguousarray(ref.q, dtype=np.intp)
    data.brk_birth = np.ascontiguousarray(bbirth)
    data.brk_death = np.ascontiguousarray(bdeath)


def precompute(mesh: Mesh, basis: Basis, kernels: KernelSet,
               orders: QuadratureOrders | None = None,
               agg_refinement: AggRefinement | None = None,
               brk_refinement: BreakRefinement | None = None,
               compact: bool = True) -> DGData:
    """Build every operator tensor of the scheme for the active processes."""
    ng, td = (orders or QuadratureOrders()).resolve(basis.k)
    data = DGData(mesh, basis, kernels, ng, td)
    if kernels.has_growth:
        _growth_terms(data)
    if kernels.has_nucleation:
        _nucleation_terms(data)
    if kernels.has_aggregation:
        ref = agg_refinement or build_aggregation_refinement(mesh)
        if ref.mesh is not mesh and not np.array_equal(ref.mesh.edges, mesh.edges):
            raise ValueError("aggregation refinement was built on a different mesh")
        data.agg_refinement = ref
        _aggregation_terms(data, ref, compact)
    if kernels.has_breakage:
        ref = brk_refinement or build_breakage_refinement(mesh)
        data.brk_refinement = ref
        _breakage_terms(data, ref)
    for name, value in vars(data).items():
        if isinstance(value, np.ndarray) and value.dtype.kind == "f" and not np.all(np.isfinite(value)):
            raise FloatingPointError(f"non-finite entries in precomputed {name}")
    return data


def residual(data: DGData, coeffs: np.ndarray, t: float = 0.0) -> np.ndarray:
    """Right-hand side before division by the mass factor ``dv_i / 2``."""
    c = np.ascontiguousarray(coeffs, dtype=float)
    out = np.zeros_like(c)
    if data.growth_local is not None:
        out += np.einsum("ijm,im->ij", data.growth_local, c)
        out[1:] += np.einsum("ijm,im->ij", data.growth_upwind[1:], c[:-1])
        inflow = data.kernels.inflow(t)
        if inflow:
            out[0] += data.growth_inflow * inflow
    if data.nucleation is not None:
        out += data.nucleation
    impl = backend.get()
    if data.agg_birth is not None:
        impl.agg_rhs(data.agg_birth, data.agg_death, data.agg_band,
                     data.agg_p, data.agg_q, c, out)
    if data.brk_birth is not None:
        impl.break_rhs(data.brk_birth, data.brk_death, data.brk_weight,
                       data.brk_p, data.brk_q, c, out)
        out -= np.einsum("ijm,im->ij", data.brk_cell, c)
    return out


def apply_rhs(data: DGData, coeffs, t: float = 0.0) -> np.ndarray:
    """Time derivative of the modal coefficients."""
    if isinstance(coeffs, DGSolution):
        coeffs = coeffs.coeffs
    return residual(data, coeffs, t) * (2.0 / data.mesh.widths)[:, None]


def moment_of_rhs(data: DGData, coeffs, s: int, t: float = 0.0):
    """Per-cell and total rate of the ``s``-th moment."""
    if not 0 <= s <= data.k:
        raise ValueError(f"moment order {s} outside 0..{data.k}")
    rate = apply_rhs(data, coeffs, t)
    per_cell = np.sum(rate * data.moment_weights(s), axis=1)
    return per_cell, math.fsum(per_cell)
