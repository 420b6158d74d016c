import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbedg.mesh import (Basis, DGSolution, Mesh, basis_eval, build_log_mesh, build_power_mesh,
                        refine_split, solution_eval)
from pbedg.quadrature import gauss_legendre


def test_power_mesh_first_edge_and_width():
    m = build_power_mesh(10.0, 15, 3.0)
    assert m.edges[1] == pytest.approx(10 * (1 / 15) ** 3, rel=1e-14)
    assert m.edges[1] == pytest.approx(2.9630e-3, abs=5e-8)
    assert m.edges[-1] == 10.0
    assert m.dv == pytest.approx(2.9630e-3, abs=5e-8)
    assert m.L == 15


def test_single_uniform_cell():
    assert list(build_power_mesh(1.0, 1, 1.0).edges) == [0.0, 1.0]


@pytest.mark.parametrize("args", [(float("nan"), 3, 3.0), (10.0, 0, 3.0), (-1.0, 3, 3.0),
                                  (10.0, 3, 0.5), (10.0, 3, float("inf"))])
def test_power_mesh_rejects_bad_input(args):
    with pytest.raises(ValueError):
        build_power_mesh(*args)


def test_log_mesh_example5():
    m = build_log_mesh(1e-3, 1e3, 11)
    assert m.edges[0] == 0.0
    assert m.edges[1] == 1e-3 and m.edges[-1] == 1e3
    ratios = m.edges[2:] / m.edges[1:-1]
    np.testing.assert_allclose(ratios, 10**0.6, rtol=1e-12)
    assert np.all(m.widths > 0) and np.all(np.diff(m.widths) > 0)


def test_log_mesh_two_cells():
    np.testing.assert_allclose(build_log_mesh(0.1, 10, 2).edges, [0, 0.1, 10])


@pytest.mark.parametrize("v_lo", [0.0, -1.0, 20.0])
def test_log_mesh_rejects_bad_lower_edge(v_lo):
    with pytest.raises(ValueError):
        build_log_mesh(v_lo, 10.0, 4)


def test_refine_split():
    m = Mesh(np.array([0.0, 1.0]))
    assert list(refine_split(m).edges) == [0, 0.5, 1]
    assert list(refine_split(refine_split(m)).edges) == [0, 0.25, 0.5, 0.75, 1]
    assert refine_split(build_power_mesh(10, 15, 3)).L == 30


def test_mesh_rejects_unsorted_edges():
    with pytest.raises(ValueError):
        Mesh(np.array([0.0, 2.0, 1.0]))
    with pytest.raises(ValueError):
        Mesh(np.array([0.0]))


@given(st.lists(st.floats(0.01, 5.0), min_size=1, max_size=12), st.integers(1, 3))
def test_refine_split_nests_edges(widths, times):
    m = Mesh(np.concatenate([[0.0], np.cumsum(widths)]))
    r = m
    for _ in range(times):
        r = refine_split(r)
    assert r.L == m.L * 2**times
    assert set(m.edges).issubset(set(r.edges))
    assert r.edges[-1] == m.edges[-1]


def test_basis_values():
    assert basis_eval(0, 0.3) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert basis_eval(1, 1.0) == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert basis_eval(2, 0.0) == pytest.approx(-math.sqrt(2.5) / 2, rel=1e-15)
    with pytest.raises(ValueError):
        basis_eval(3, 0.0, k=2)
    with pytest.raises(ValueError):
        basis_eval(-1, 0.0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
def test_basis_orthonormal(k):
    rule = gauss_legendre(k + 2)
    phi = Basis(k).eval(rule.nodes)
    gram = np.einsum("q,qj,qm->jm", rule.weights, phi, phi)
    assert np.max(np.abs(gram - np.eye(k + 1))) < 1e-13


@pytest.mark.parametrize("k", [1, 2, 4])
def test_basis_degree_and_derivative(k):
    b = Basis(k)
    x = np.linspace(-1, 1, 9)
    h = 1e-6
    fd = (b.eval(x[1:-1] + h) - b.eval(x[1:-1] - h)) / (2 * h)
    np.testing.assert_allclose(b.deriv(x[1:-1]), fd, atol=1e-7)
    for j in range(k + 1):
        c = np.polynomial.polynomial.polyfit(x, b.eval(x)[:, j], k)
        assert abs(c[j]) > 1e-8 and np.all(np.abs(c[j + 1:]) < 1e-9)


def test_constant_state_reconstruction():
    m = Mesh(np.array([0.0, 2.0, 3.0]))
    b = Basis(2)
    c = np.zeros((2, 3))
    c[:, 0] = math.sqrt(2) * 1.7
    sol = DGSolution(m, b, c)
    np.testing.assert_allclose(sol(np.array([0.1, 1.5, 2.5, 3.0])), 1.7, rtol=1e-15)
    np.testing.assert_allclose(sol.cell_averages(), 1.7, rtol=1e-15)


def test_odd_mode_is_antisymmetric():
    m = Mesh(np.array([1.0, 3.0]))
    c = np.array([[0.0, 0.8, 0.0]])
    sol = DGSolution(m, Basis(2), c)
    d = np.array([0.1, 0.5, 0.93])
    np.testing.assert_allclose(solution_eval(sol, 0, 2.0 + d), -solution_eval(sol, 0, 2.0 - d),
                               rtol=1e-14)


def test_cell_average_of_unit_density():
    m = Mesh(np.array([0.0, 1.0]))
    c = np.array([[math.sqrt(2.0), 0.0]])
    sol = DGSolution(m, Basis(1), c)
    assert sol.cell_averages()[0] == pytest.approx(1.0)
    assert sol.eval_cell(0, 0.37) == pytest.approx(1.0)


def test_eval_outside_cell_raises():
    sol = DGSolution.zeros(Mesh(np.array([0.0, 1.0, 2.0])), Basis(1))
    with pytest.raises(ValueError):
        sol.eval_cell(0, 1.5)


def test_traces():
    m = Mesh(np.array([0.0, 1.0, 2.0]))
    b = Basis(2)
    rng = np.random.default_rng(0)
    sol = DGSolution(m, b, rng.normal(size=(2, 3)))
    np.testing.assert_allclose(sol.trace_left(), [sol.eval_cell(0, 0.0), sol.eval_cell(1, 1.0)])
    np.testing.assert_allclose(sol.trace_right(), [sol.eval_cell(0, 1.0), sol.eval_cell(1, 2.0)])


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_projection_reproduces_polynomials(k, seed):
    from pbedg.harness.runner import l2_project

    rng = np.random.default_rng(seed)
    mesh = Mesh(np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, 4))]))
    p = np.polynomial.Polynomial(rng.normal(size=k + 1))
    sol = DGSolution(mesh, Basis(k), l2_project(p, mesh, Basis(k)))
    v = rng.uniform(0, mesh.v_max, 20)
    scale = np.max(np.abs(p(np.linspace(0, mesh.v_max, 50)))) + 1.0
    assert np.max(np.abs(sol(v) - p(v))) <= 1e-12 * scale
