import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbedg.assembly import QuadratureOrders, moment_weights, precompute
from pbedg.kernels import KernelSet, builtin_beta, builtin_breakage, builtin_growth
from pbedg.limiter import Limiter, LimiterConfig
from pbedg.mesh import Basis, Mesh, build_power_mesh, build_uniform_mesh
from pbedg.timestepping import (NumericalFailure, StepReport, TimeController, cfl_bound,
                                euler_stage, run, ssprk3_step)

UNIT = Mesh(np.array([0.0, 1.0]))
decay = lambda c, t: -c  # noqa: E731
zero = lambda c, t: np.zeros_like(c)  # noqa: E731


def test_euler_and_ssprk3_on_decay():
    c = np.array([[1.0]])
    assert euler_stage(c, 1.0, decay)[0, 0] == 0.0
    assert ssprk3_step(c, 1.0, decay)[0, 0] == pytest.approx(1 / 3, rel=1e-15)
    h = 0.1
    assert ssprk3_step(c, h, decay)[0, 0] == pytest.approx(1 - h + h * h / 2 - h**3 / 6, rel=1e-15)


def test_zero_rhs_is_identity():
    c = np.random.default_rng(0).normal(size=(3, 2))
    assert np.array_equal(euler_stage(c, 0.5, zero), c)
    assert np.allclose(ssprk3_step(c, 0.5, zero), c, rtol=0, atol=1e-15)


@given(st.integers(0, 2**31 - 1))
def test_ssp_structure(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(6, 6))
    f = lambda c, t: (A @ c.ravel()).reshape(c.shape)  # noqa: E731
    c = rng.normal(size=(3, 2))
    dt = 0.1
    e = lambda x: x + dt * f(x, 0)  # noqa: E731
    c1 = e(c)
    c2 = 0.75 * c + 0.25 * e(c1)
    expect = c / 3 + 2 / 3 * e(c2)
    np.testing.assert_allclose(ssprk3_step(c, dt, f), expect, rtol=1e-14, atol=1e-14)


def test_aggregation_stage_within_bound():
    data = precompute(UNIT, Basis(2), KernelSet(beta=builtin_beta("constant")))
    c = np.array([[math.sqrt(2), 0.0, 0.0]])
    assert cfl_bound(data, c) == pytest.approx(1.0, rel=1e-14)
    lim = Limiter(UNIT, Basis(2), LimiterConfig(True, 1))
    out = euler_stage(c, 1.0, data, lim)
    W = moment_weights(UNIT, Basis(2), 1)
    assert np.sum(W * out) == pytest.approx(np.sum(W * c), rel=1e-14)
    assert np.sum(W * out) >= 0


def test_growth_bound_uses_normalized_endpoint_weight():
    mesh = build_uniform_mesh(1.0, 10)
    data = precompute(mesh, Basis(1), KernelSet(growth=builtin_growth("constant")),
                      QuadratureOrders(n_lobatto=3))
    # endpoint weight of the 3-point rule normalized to sum to one is 1/6
    assert cfl_bound(data, np.zeros((10, 2))) == pytest.approx(0.1 / 6, rel=1e-13)


def test_no_process_bound_is_infinite():
    data = precompute(UNIT, Basis(1), KernelSet(nucleation=lambda v: 0 * v))
    assert cfl_bound(data, np.zeros((1, 2))) == math.inf


def test_breakage_bound():
    rate, p = builtin_breakage("uniform_linear")
    data = precompute(build_uniform_mesh(2.0, 4), Basis(2), KernelSet(rate=rate, daughter=p))
    # u p(u, w) gamma(w) = 2u on u <= w <= 2; the sup over interior nodes is just below 4
    bound = cfl_bound(data, np.zeros((4, 3)))
    assert 0.25 < bound < 0.25 * 1.05


def test_single_step_run():
    ctl = TimeController(t_end=1.0, dt_init=1.0)
    reports = []
    out = run(ctl, np.ones((2, 2)), zero, observers=[lambda t, c, r: reports.append(r)])
    assert len(reports) == 1 and reports[0].halvings == 0 and ctl.t == 1.0
    assert np.array_equal(out, np.ones((2, 2)))


def test_last_step_lands_on_t_end():
    ctl = TimeController(t_end=1.0, dt_init=0.3)
    times = []
    run(ctl, np.ones((1, 1)), decay, observers=[lambda t, c, r: times.append(t)])
    assert times[-1] == 1.0 and len(times) == 4
    assert np.all(np.diff(times) > 0)


def test_forced_rejection_halves_once():
    ctl = TimeController(t_end=1.0, dt_init=0.5)
    reports = []
    run(ctl, np.ones((1, 1)), zero, fault=lambda step, attempt: step == 0 and attempt == 0,
        observers=[lambda t, c, r: reports.append(r)])
    assert reports[0].halvings == 1 and reports[0].dt == 0.25
    assert reports[-1].t == 1.0


def test_halving_budget_exhausted():
    ctl = TimeController(t_end=1.0, dt_init=0.5, max_halvings=3)
    with pytest.raises(NumericalFailure):
        run(ctl, np.ones((1, 1)), zero, fault=lambda step, attempt: True)


def test_controller_halving_and_regrowth():
    ctl = TimeController(t_end=10.0, dt_init=0.4, regrow_after=2)
    ctl.halve()
    assert ctl.dt == 0.2
    ctl.accepted(0)
    assert ctl.dt == 0.2
    ctl.accepted(0)
    assert ctl.dt == 0.4
    for _ in range(10):
        ctl.accepted(0)
    assert ctl.dt == 0.4
    with pytest.raises(ValueError):
        TimeController(t_end=0.0, dt_init=0.1)
    with pytest.raises(ValueError):
        TimeController(t_end=1.0, dt_init=0.1, cfl_mode="adaptive")


def test_unlimited_blow_up_detected():
    ctl = TimeController(t_end=10.0, dt_init=0.1)
    with pytest.raises(NumericalFailure):
        run(ctl, np.ones((1, 1)), lambda c, t: 5.0 * c)


def test_rejected_stage_is_retried_with_smaller_step():
    # a stiff linear decay overshoots to negative moments for large steps
    mesh = UNIT
    lim = Limiter(mesh, Basis(1), LimiterConfig(True, 0))
    rhs = lambda c, t: -30.0 * c  # noqa: E731
    ctl = TimeController(t_end=0.2, dt_init=0.2)
    reports = []
    out = run(ctl, np.array([[1.0, 0.0]]), rhs, lim, [lambda t, c, r: reports.append(r)])
    assert sum(r.halvings for r in reports) >= 1
    assert out[0, 0] > 0


def test_theorem_mode_runs_without_rejection():
    mesh = build_power_mesh(10.0, 8, 3)
    basis = Basis(2)
    rate, p = builtin_breakage("uniform_linear")
    data = precompute(mesh, basis, KernelSet(beta=builtin_beta("constant"), rate=rate, daughter=p))
    from pbedg.harness.runner import l2_project

    c0 = l2_project(lambda v: np.exp(-v), mesh, basis)
    lim = Limiter(mesh, basis, LimiterConfig(True, 1))
    c0, _ = lim(c0)
    ctl = TimeController(t_end=0.5, dt_init=0.5, cfl_mode="theorem")
    reports = []
    out = run(ctl, c0, data, lim, [lambda t, c, r: reports.append(r)], data=data)
    assert sum(r.halvings for r in reports) == 0
    W = moment_weights(mesh, basis, 1)
    assert np.sum(W * out) == pytest.approx(np.sum(W * c0), rel=1e-12)


def test_theorem_mode_needs_data():
    with pytest.raises(ValueError):
        run(TimeController(1.0, 0.1, cfl_mode="theorem"), np.ones((1, 1)), zero)


def test_step_report_defaults():
    r = StepReport()
    assert r.accepted and r.halvings == 0 and r.min_moment == math.inf
