import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbedg.harness.runner import l2_project
from pbedg.limiter import (Limiter, LimiterConfig, LimiterError, apply_limiter, cell_min,
                           moment_row, power_integral, sample_points)
from pbedg.mesh import Basis, DGSolution, Mesh


def coeffs_on(cell, poly, k):
    mesh = Mesh(np.array(cell, dtype=float))
    return l2_project(poly, mesh, Basis(k))[0]


def test_cell_min_examples():
    b = Basis(1)
    c = coeffs_on((0, 1), lambda v: 1 - 1.2 * v, 1)
    assert cell_min(c, b) == pytest.approx(-0.2, abs=1e-14)
    c = coeffs_on((0, 1), lambda v: 3.0 + 0 * v, 2)
    assert cell_min(c, Basis(2)) == pytest.approx(3.0)
    # vertex at x = 0.3 (reference), value -0.05; not a Lobatto node
    c = coeffs_on((-1, 1), lambda x: (x - 0.3) ** 2 - 0.05, 2)
    assert cell_min(c, Basis(2)) == pytest.approx(-0.05, abs=1e-14)


def test_paper_style_linear_example():
    c = coeffs_on((0, 1), lambda v: 1 - 1.2 * v, 1)
    out = apply_limiter(c, (0, 1), LimiterConfig(True, 1))
    expect = coeffs_on((0, 1), lambda v: 0.6 * (1 - v), 1)
    np.testing.assert_allclose(out, expect, atol=1e-14)
    assert moment_row(0, 1, Basis(1), 1) @ out == pytest.approx(0.1, rel=1e-14)


def test_nonnegative_polynomial_unchanged():
    c = coeffs_on((0, 2), lambda v: 1 + v**2, 2)
    out = apply_limiter(c, (0, 2), LimiterConfig(True, 1))
    assert np.array_equal(out, c)


def test_zero_moment_gives_zero_polynomial():
    # int_0^1 v (2 - 3v) dv = 0
    c = coeffs_on((0, 1), lambda v: 2 - 3 * v, 1)
    out = apply_limiter(c, (0, 1), LimiterConfig(True, 1))
    np.testing.assert_allclose(out, 0.0, atol=1e-15)


def test_negative_moment_raises():
    c = coeffs_on((0, 1), lambda v: -1 - v, 1)
    with pytest.raises(LimiterError):
        apply_limiter(c, (0, 1), LimiterConfig(True, 1))


def test_disabled_limiter_is_identity():
    mesh = Mesh(np.array([0.0, 1.0]))
    lim = Limiter(mesh, Basis(1), LimiterConfig(False, 1))
    c = np.array([[0.1, 1.0]])
    out, n = lim(c)
    assert out is c and n == 0


def test_config_validation():
    with pytest.raises(ValueError):
        LimiterConfig(True, -1)


def test_sample_points():
    pts = sample_points(2)
    np.testing.assert_allclose(pts, [-1, -1 / math.sqrt(5), 1 / math.sqrt(5), 1])
    assert sample_points(2, dense=True).size == 4 + 64
    assert sample_points(2, n_lobatto=6).size == 6


def test_power_integral_far_from_origin():
    a, b = 1e4, 1e4 + 1e-3
    exact = ((b - a) * (a**3 + a**2 * b + a * b**2 + b**3)) / 4
    assert power_integral(a, b, 3) == pytest.approx(exact, rel=1e-14)
    assert power_integral(0.0, 2.0, 0) == pytest.approx(2.0)


def test_dense_sampling_tightens_continuous_minimum():
    # k = 4 polynomial dipping below zero between the six Lobatto points
    x = np.linspace(-1, 1, 2001)
    poly = lambda v: (v**2 - 0.5) ** 2 - 0.01 + 0 * v  # noqa: E731
    c = coeffs_on((-1, 1), poly, 4)
    coarse = Limiter(Mesh(np.array([-1.0, 1.0])), Basis(4), LimiterConfig(True, 0))
    dense = Limiter(Mesh(np.array([-1.0, 1.0])), Basis(4), LimiterConfig(True, 0, True))
    vals = lambda cc: DGSolution(coarse.mesh, Basis(4), cc[None])(x)  # noqa: E731
    d, _ = dense(c[None])
    g, _ = coarse(c[None])
    assert vals(c).min() < -5e-3
    assert vals(g[0]).min() <= vals(d[0]).min()
    assert vals(d[0]).min() >= -1e-3
    assert dense.minima(c[None])[0] <= coarse.minima(c[None])[0]


def random_cells(rng, n):
    widths = 10 ** rng.uniform(-3, 1, n)
    return Mesh(np.concatenate([[rng.choice([0.0, rng.uniform(0, 5)])], widths]).cumsum())


@given(st.integers(1, 4), st.sampled_from([0, 1, 2, 3]), st.integers(0, 2**31 - 1))
def test_limiter_theorem_properties(k, s, seed):
    rng = np.random.default_rng(seed)
    mesh = random_cells(rng, 50)
    lim = Limiter(mesh, Basis(k), LimiterConfig(True, s))
    c = rng.normal(size=(mesh.L, k + 1))
    c[lim.moments(c) < 0] *= -1
    out, _ = lim(c)
    m = np.maximum(-lim.minima(c), 0.0)
    before, after = c @ lim._phi.T, out @ lim._phi.T
    # moment conservation
    M0, M1 = lim.moments(c), lim.moments(out)
    assert np.all(np.abs(M1 - M0) <= 1e-13 * (np.abs(M0) + m * lim.power))
    # positivity at samples and no overshoot
    scale = np.abs(after).max(axis=1)
    assert np.all(after.min(axis=1) >= -1e-14 * scale)
    assert np.all(after.max(axis=1) <= before.max(axis=1) + 1e-14 * np.abs(before).max(axis=1))
    # proximity ||n - n~|| <= C(k) m over the samples
    diff = np.abs(before - after).max(axis=1)
    assert np.all(diff <= (k + 1) ** 2 * m + 1e-13 * np.abs(before).max(axis=1))
    # idempotence
    again, _ = lim(out)
    assert np.max(np.abs(again - out)) <= 1e-13 * (np.abs(out).max() + 1.0)
