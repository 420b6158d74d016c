import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbedg.assembly import (QuadratureOrders, apply_rhs, death_split_weights, moment_of_rhs,
                            precompute, residual)
from pbedg.kernels import KernelSet, builtin_beta, builtin_breakage, builtin_growth
from pbedg.mesh import Basis, Mesh, build_power_mesh, build_uniform_mesh

from helpers import gross_moment_scale

UNIT = Mesh(np.array([0.0, 1.0]))


def breakage_set():
    rate, p = builtin_breakage("uniform_linear")
    return KernelSet(rate=rate, daughter=p)


def unit_density(mesh, k):
    c = np.zeros((mesh.L, k + 1))
    c[:, 0] = math.sqrt(2.0)
    return c


def mass_scale(data, c, s=1):
    return gross_moment_scale(data, c, s) + 1e-300


def test_quadrature_order_defaults():
    assert QuadratureOrders().resolve(2) == (4, 6)
    assert QuadratureOrders(5, 9).resolve(2) == (5, 9)
    with pytest.raises(ValueError):
        QuadratureOrders(3).resolve(2)


def test_birth_tensor_sum_single_cell():
    ks = KernelSet(beta=builtin_beta("constant"))
    data = precompute(UNIT, Basis(1), ks, compact=False)
    assert data.agg_birth[:, 0, 0, 0].sum() == pytest.approx(1 / (8 * math.sqrt(2)), rel=1e-14)
    packed = precompute(UNIT, Basis(1), ks)
    assert packed.agg_birth.shape[0] == 1
    assert packed.agg_birth[0, 0, 0, 0] == pytest.approx(1 / (8 * math.sqrt(2)), rel=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_constant_kernel_unit_density_rates(k):
    data = precompute(UNIT, Basis(k), KernelSet(beta=builtin_beta("constant")))
    c = unit_density(UNIT, k)
    _, m0 = moment_of_rhs(data, c, 0)
    _, m1 = moment_of_rhs(data, c, 1)
    assert m0 == pytest.approx(-0.25, rel=1e-13)
    assert abs(m1) < 1e-15


def test_inactive_processes_give_empty_tensors():
    data = precompute(UNIT, Basis(2), KernelSet(beta=builtin_beta("constant")))
    assert data.growth_local is None and data.nucleation is None
    zero = KernelSet(growth=lambda v: np.zeros(np.shape(v)), nucleation=lambda v: 0.0 * v)
    data = precompute(build_uniform_mesh(1.0, 3), Basis(2), zero)
    assert not data.growth_local.any() and not data.growth_upwind.any()
    assert not data.nucleation.any()


def test_constant_growth_telescopes():
    mesh = build_uniform_mesh(1.0, 5)
    data = precompute(mesh, Basis(2), KernelSet(growth=builtin_growth("constant")))
    per_cell, total = moment_of_rhs(data, unit_density(mesh, 2), 0)
    np.testing.assert_allclose(per_cell, [-1, 0, 0, 0, 0], atol=1e-14)
    assert total == pytest.approx(-1.0)


@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_growth_number_rate_is_boundary_flux(seed, k):
    rng = np.random.default_rng(seed)
    mesh = Mesh(np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.0, 5))]))
    ks = KernelSet(growth=lambda v: 0.3 + np.asarray(v) ** 2)
    data = precompute(mesh, Basis(k), ks)
    c = rng.normal(size=(mesh.L, k + 1))
    per_cell, total = moment_of_rhs(data, c, 0)
    outflow = (0.3 + mesh.v_max**2) * (c[-1] @ Basis(k).right_trace)
    assert total == pytest.approx(-outflow, rel=1e-12, abs=1e-12)


def test_inflow_enters_first_cell():
    mesh = build_uniform_mesh(1.0, 3)
    ks = KernelSet(growth=builtin_growth("constant"), inflow=lambda t: 2.0 + t)
    data = precompute(mesh, Basis(1), ks)
    per_cell, total = moment_of_rhs(data, np.zeros((3, 2)), 0, t=1.0)
    np.testing.assert_allclose(per_cell, [3.0, 0, 0], atol=1e-14)


def test_zero_state_zero_rhs():
    rate, p = builtin_breakage("uniform_linear")
    ks = KernelSet(beta=builtin_beta("brownian"), rate=rate, daughter=p,
                   growth=builtin_growth("linear"))
    mesh = build_power_mesh(10, 6, 3)
    data = precompute(mesh, Basis(2), ks)
    assert not apply_rhs(data, np.zeros((6, 3))).any()


def test_breakage_cell_matrix_annihilates_mass_test_function():
    mesh = build_power_mesh(10, 7, 3)
    basis = Basis(3)
    data = precompute(mesh, basis, breakage_set())
    a = np.zeros((mesh.L, basis.size))
    a[:, 0] = math.sqrt(2) * mesh.centers
    a[:, 1] = mesh.widths / math.sqrt(6)
    rows = np.einsum("ij,ijm->im", a, data.brk_cell)
    assert np.max(np.abs(rows)) < 1e-13 * np.max(np.abs(data.brk_cell))
    d = death_split_weights(mesh, basis)
    np.testing.assert_allclose(np.sum(a * d, axis=1), 1.0, rtol=1e-14)


def test_breakage_exact_single_cell():
    # n = 1 on [0, 1]: birth int_0^1 int_u^1 w (2/w) dw du = 1, death int_0^1 w dw = 1/2
    data = precompute(UNIT, Basis(2), breakage_set())
    _, m0 = moment_of_rhs(data, unit_density(UNIT, 2), 0)
    _, m1 = moment_of_rhs(data, unit_density(UNIT, 2), 1)
    assert m0 == pytest.approx(0.5, rel=1e-13)
    assert abs(m1) < 1e-15


random_mesh = st.lists(st.floats(0.05, 2.0), min_size=1, max_size=6).map(
    lambda w: Mesh(np.concatenate([[0.0], np.cumsum(w)])))


@given(random_mesh, st.integers(1, 3), st.sampled_from(
    ["constant", "additive", "free_molecule", "brownian", "gravitational"]),
    st.integers(0, 2**31 - 1))
def test_aggregation_conserves_mass(mesh, k, kernel, seed):
    data = precompute(mesh, Basis(k), KernelSet(beta=builtin_beta(kernel)))
    c = np.random.default_rng(seed).normal(size=(mesh.L, k + 1))
    _, total = moment_of_rhs(data, c, 1)
    assert abs(total) <= 1e-13 * mass_scale(data, c)


@given(random_mesh, st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_breakage_conserves_mass(mesh, k, seed):
    data = precompute(mesh, Basis(k), breakage_set())
    c = np.random.default_rng(seed).normal(size=(mesh.L, k + 1))
    _, total = moment_of_rhs(data, c, 1)
    assert abs(total) <= 1e-13 * mass_scale(data, c)


@given(st.integers(0, 2**31 - 1))
def test_rhs_scaling_structure(seed):
    rng = np.random.default_rng(seed)
    mesh = build_power_mesh(5.0, 5, 2.0)
    a, b = rng.normal(size=(2, mesh.L, 3))
    agg = precompute(mesh, Basis(2), KernelSet(beta=builtin_beta("additive")))
    lam = 1.7
    np.testing.assert_allclose(apply_rhs(agg, lam * a), lam**2 * apply_rhs(agg, a),
                               rtol=1e-12, atol=1e-12)
    # polarization: Q(a+b) + Q(a-b) = 2Q(a) + 2Q(b)
    lhs = apply_rhs(agg, a + b) + apply_rhs(agg, a - b)
    np.testing.assert_allclose(lhs, 2 * apply_rhs(agg, a) + 2 * apply_rhs(agg, b),
                               rtol=1e-11, atol=1e-11)
    brk = precompute(mesh, Basis(2), breakage_set())
    np.testing.assert_allclose(apply_rhs(brk, a + b), apply_rhs(brk, a) + apply_rhs(brk, b),
                               rtol=1e-12, atol=1e-12)


def test_rhs_is_deterministic():
    mesh = build_power_mesh(10, 8, 3)
    rate, p = builtin_breakage("uniform_linear")
    data = precompute(mesh, Basis(2), KernelSet(beta=builtin_beta("brownian"), rate=rate,
                                                daughter=p))
    c = np.random.default_rng(3).normal(size=(8, 3))
    assert np.array_equal(apply_rhs(data, c), apply_rhs(data, c.copy()))


def test_compaction_does_not_change_rhs():
    mesh = build_power_mesh(10, 6, 3)
    ks = KernelSet(beta=builtin_beta("gravitational"))
    full = precompute(mesh, Basis(2), ks, compact=False)
    packed = precompute(mesh, Basis(2), ks)
    assert packed.agg_birth.shape[0] < full.agg_birth.shape[0]
    c = np.random.default_rng(1).normal(size=(6, 3))
    np.testing.assert_allclose(residual(packed, c), residual(full, c), rtol=1e-12, atol=1e-14)


def test_refinement_from_other_mesh_is_rejected():
    from pbedg.geometry import build_aggregation_refinement

    ref = build_aggregation_refinement(build_uniform_mesh(1.0, 2))
    with pytest.raises(ValueError):
        precompute(build_uniform_mesh(1.0, 3), Basis(1),
                   KernelSet(beta=builtin_beta("constant")), agg_refinement=ref)


def test_moment_order_range():
    data = precompute(UNIT, Basis(1), KernelSet(beta=builtin_beta("constant")))
    with pytest.raises(ValueError):
        moment_of_rhs(data, np.zeros((1, 2)), 2)
