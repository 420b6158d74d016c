"""Running a :class:`ProblemSpec`: projection, stepping, diagnostics and CSV output."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..assembly import DGData, QuadratureOrders, moment_weights, precompute
from ..geometry import build_aggregation_refinement, build_breakage_refinement
from ..limiter import Limiter, LimiterConfig
from ..mesh import Basis, DGSolution, Mesh
from ..quadrature import gauss_legendre
from ..reference import DPBEState, dpbe_counts, dpbe_project, dpbe_solve, get_case
from ..timestepping import StepReport, TimeController, run
from .config import ConfigError, ProblemSpec, make_function

log = logging.getLogger(__name__)


# -- projection and norms -----------------------------------------------------------

def _cell_points(mesh: Mesh, x: np.ndarray) -> np.ndarray:
    t = 0.5 * (1.0 + x)
    return mesh.left[:, None] * (1.0 - t) + mesh.right[:, None] * t


def l2_project(f: Callable, mesh: Mesh, basis: Basis, n_points: int | None = None) -> np.ndarray:
    """Cellwise L2 projection of ``f`` with an ``n_points`` Gauss rule (default ``2k + 2``)."""
    rule = gauss_legendre(n_points or 2 * basis.k + 2)
    v = _cell_points(mesh, rule.nodes)
    return np.einsum("q,iq,qj->ij", rule.weights, f(v), basis.eval(rule.nodes))


def project_initial(spec: ProblemSpec, mesh: Mesh, basis: Basis,
                    limiter: Limiter | None = None) -> DGSolution:
    """Project the initial condition and apply the limiter once."""
    f = make_function(spec.problem.initial)
    coeffs = l2_project(f, mesh, basis)
    if limiter is not None:
        coeffs, _ = limiter(coeffs)
    return DGSolution(mesh, basis, coeffs)


def error_norms(sol: DGSolution, reference: Callable, n_points: int = 64):
    """``(L1, L2, Linf)`` of ``reference - n_h``.

    Integrals use an ``n_points`` Gauss rule per cell; the maximum norm is the
    largest nodal error.  ``|n - n_h|`` has kinks where the error changes
    sign, so the rule is deliberately much finer than the polynomial degree.
    """
    rule = gauss_legendre(n_points)
    mesh = sol.mesh
    v = _cell_points(mesh, rule.nodes)
    err = sol.coeffs @ sol.basis.eval(rule.nodes).T - reference(v)
    w = 0.5 * mesh.widths[:, None] * rule.weights[None, :]
    l1 = float(np.sum(w * np.abs(err)))
    l2 = float(math.sqrt(np.sum(w * err * err)))
    return l1, l2, float(np.max(np.abs(err)))


# -- run output -----------------------------------------------------------------------

@dataclass
class RunOutput:
    name: str
    mesh: Mesh
    basis: Basis
    coeffs: np.ndarray
    times: list = field(default_factory=list)
    M0: list = field(default_factory=list)
    M1: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    errors: tuple | None = None
    reference_averages: np.ndarray | None = None
    reference_state: DPBEState | None = None
    exact: Callable | None = None
    wall_time: float = 0.0

    @property
    def solution(self) -> DGSolution:
        return DGSolution(self.mesh, self.basis, self.coeffs)

    @property
    def mass_deviation(self) -> np.ndarray:
        m = np.asarray(self.M1)
        return m - m[0] if m.size else m

    @property
    def max_relative_mass_deviation(self) -> float:
        if not self.M1:
            return 0.0
        return float(np.max(np.abs(self.mass_deviation)) / abs(self.M1[0]))

    @property
    def total_halvings(self) -> int:
        return sum(r.halvings for r in self.steps)

    def relative_l1_to_reference(self) -> float:
        """Relative L1 distance of cell averages to the projected discrete reference."""
        if self.reference_averages is None:
            raise ValueError("run has no discrete reference")
        avg = self.coeffs[:, 0] / math.sqrt(2.0)
        w = self.mesh.widths
        ref = self.reference_averages
        return float(np.sum(w * np.abs(avg - ref)) / np.sum(w * np.abs(ref)))


def _moments(data_w0, data_w1, c):
    return math.fsum(np.sum(data_w0 * c, axis=1)), math.fsum(np.sum(data_w1 * c, axis=1))


def run_problem(spec: ProblemSpec, level: int = 0, name: str | None = None,
                geometry_cache: dict | None = None) -> RunOutput:
    """Execute one run of ``spec`` on mesh refinement ``level``."""
    start = time.perf_counter()
    mesh = spec.build_mesh(level)
    basis = Basis(spec.dg.k)
    kernels = spec.kernels()
    orders = QuadratureOrders(spec.dg.n_lobatto, spec.dg.triangle_degree)
    agg_ref = brk_ref = None
    if geometry_cache is not None:
        key = tuple(mesh.edges)
        if kernels.has_aggregation:
            if ("agg", key) not in geometry_cache:
                geometry_cache[("agg", key)] = build_aggregation_refinement(mesh)
            agg_ref = geometry_cache[("agg", key)]
        if kernels.has_breakage:
            if ("brk", key) not in geometry_cache:
                geometry_cache[("brk", key)] = build_breakage_refinement(mesh)
            brk_ref = geometry_cache[("brk", key)]
    data = precompute(mesh, basis, kernels, orders, agg_ref, brk_ref, compact=spec.dg.compact)
    ng = data.n_lobatto
    limiter = None
    if spec.limiter.enabled:
        cfg = LimiterConfig(True, spec.limiter_order(), spec.limiter.dense_sampling)
        limiter = Limiter(mesh, basis, cfg, n_lobatto=ng)
    sol = project_initial(spec, mesh, basis, limiter)
    w0, w1 = moment_weights(mesh, basis, 0), moment_weights(mesh, basis, 1)
    out = RunOutput(name or spec.problem.name, mesh, basis, sol.coeffs)
    m0, m1 = _moments(w0, w1, sol.coeffs)
    out.times.append(0.0)
    out.M0.append(m0)
    out.M1.append(m1)
    every = max(spec.output.every, 1)
    counter = {"n": 0}

    def observer(t: float, c: np.ndarray, report: StepReport):
        out.steps.append(report)
        counter["n"] += 1
        if counter["n"] % every == 0 or t >= spec.time.t_end:
            a, b = _moments(w0, w1, c)
            out.times.append(t)
            out.M0.append(a)
            out.M1.append(b)

    ctl = TimeController(spec.time.t_end, spec.time_step(mesh), cfl_mode=spec.time.cfl_mode,
                         cfl_safety=spec.time.cfl_safety, max_halvings=spec.time.max_halvings)
    out.coeffs = run(ctl, sol.coeffs, data, limiter, [observer], data=data)
    if out.times[-1] != ctl.t:
        a, b = _moments(w0, w1, out.coeffs)
        out.times.append(ctl.t)
        out.M0.append(a)
        out.M1.append(b)
    _attach_reference(spec, out, kernels)
    out.wall_time = time.perf_counter() - start
    return out


def _attach_reference(spec: ProblemSpec, out: RunOutput, kernels) -> None:
    ref = spec.problem.reference
    if ref is None:
        return
    t_end = spec.time.t_end
    if ref.type == "analytic":
        case = get_case(ref.case, **ref.params)
        out.exact = lambda v: case(v, t_end)
        out.errors = error_norms(out.solution, out.exact, spec.output.error_points)
    elif ref.type == "dpbe":
        K = int(ref.classes)
        dv = out.mesh.v_max / K
        n0 = make_function(spec.problem.initial)
        state = dpbe_solve(kernels.beta, dpbe_counts(n0, dv, K), dv, t_end)
        out.reference_state = state
        out.reference_averages = dpbe_project(state, out.mesh)
    else:
        raise ConfigError(f"unsupported reference type {ref.type!r}")


# -- convergence ----------------------------------------------------------------------

@dataclass
class ConvergenceRow:
    level: int
    L: int
    errors: tuple
    orders: tuple | None


def convergence_study(spec: ProblemSpec, levels: int = 4,
                      on_level: Callable | None = None) -> list[ConvergenceRow]:
    """Errors on ``levels`` nested meshes and observed orders ``log2(e_{l-1}/e_l)``."""
    if levels < 2:
        raise ValueError("a convergence study needs at least two levels")
    if spec.problem.reference is None or spec.problem.reference.type != "analytic":
        raise ConfigError("convergence study needs an analytic reference")
    rows: list[ConvergenceRow] = []
    for lev in range(levels):
        res = run_problem(spec, lev)
        orders = None
        if rows:
            orders = tuple(math.log2(a / b) if a > 0 and b > 0 else math.nan
                           for a, b in zip(rows[-1].errors, res.errors))
        rows.append(ConvergenceRow(lev, res.mesh.L, res.errors, orders))
        if on_level is not None:
            on_level(rows[-1], res)
    return rows


# -- CSV persistence ------------------------------------------------------------------

def _f(x) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def emit_csv(output: RunOutput | None, out_dir, rows: list[ConvergenceRow] | None = None) -> dict:
    """Write solution/moments/errors/steps CSV files; returns the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {k: out_dir / f"{k}.csv" for k in ("solution", "moments", "errors", "steps")}
    with open(paths["solution"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["v_center", "n_h", "n_exact"])
        if output is not None:
            mesh = output.mesh
            vals = output.solution(mesh.centers)
            if output.exact is not None:
                ref = output.exact(mesh.centers)
            elif output.reference_averages is not None:
                ref = output.reference_averages
            else:
                ref = [None] * mesh.L
            for v, n, e in zip(mesh.centers, vals, ref):
                w.writerow([_f(v), _f(n), _f(e)])
    with open(paths["moments"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "M0", "M1", "mass_deviation"])
        if output is not None:
            for t, a, b, d in zip(output.times, output.M0, output.M1, output.mass_deviation):
                w.writerow([_f(t), _f(a), _f(b), _f(d)])
    with open(paths["errors"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "L1", "order1", "L2", "order2", "Linf", "orderinf"])
        if rows is None and output is not None and output.errors is not None:
            rows = [ConvergenceRow(0, output.mesh.L, output.errors, None)]
        for r in rows or []:
            o = r.orders or (None, None, None)
            w.writerow([r.level, _f(r.errors[0]), _f(o[0]), _f(r.errors[1]), _f(o[1]),
                        _f(r.errors[2]), _f(o[2])])
    with open(paths["steps"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "dt", "halvings", "limiter_activations"])
        if output is not None:
            for r in output.steps:
                w.writerow([_f(r.t), _f(r.dt), r.halvings, r.limiter_activations])
    return paths
