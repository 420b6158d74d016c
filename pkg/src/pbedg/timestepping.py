"""Forward Euler / SSP-RK3 time integration with the halve-and-retry fallback."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .assembly import DGData, apply_rhs, cell_nodes
from .limiter import Limiter
from .quadrature import gauss_lobatto, triangle_rule

log = logging.getLogger(__name__)

# Relative tolerance separating round-off from genuinely negative cell moments.
MOMENT_RTOL = 1e-12
# Unlimited runs are declared blown up once the coefficients grow by this factor.
BLOWUP_FACTOR = 1e6


class StageRejected(Exception):
    """A forward-Euler stage produced a negative cell moment."""

    def __init__(self, cell: int, moment: float):
        super().__init__(f"negative moment {moment:.3e} in cell {cell}")
        self.cell = cell
        self.moment = moment


class NumericalFailure(RuntimeError):
    """Halving budget exhausted or non-finite / exploding state."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t = {t:.6g}")
        self.t = t


@dataclass
class StepReport:
    t: float = 0.0
    dt: float = 0.0
    accepted: bool = True
    halvings: int = 0
    min_moment: float = math.inf
    limiter_activations: int = 0
    rejected_cell: int | None = None


@dataclass
class TimeController:
    t_end: float
    dt_init: float
    t: float = 0.0
    dt: float | None = None
    cfl_mode: str = "fixed"
    cfl_safety: float = 1.0
    max_halvings: int = 40
    regrow_after: int = 20
    _clean: int = field(default=0, repr=False)

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.dt_init > 0:
            raise ValueError("time step must be positive")
        if self.cfl_mode not in ("fixed", "theorem"):
            raise ValueError(f"unknown cfl_mode {self.cfl_mode!r}")
        if self.dt is None:
            self.dt = self.dt_init

    def halve(self):
        self.dt *= 0.5
        self._clean = 0

    def accepted(self, halvings: int):
        if halvings:
            self._clean = 0
            return
        self._clean += 1
        if self._clean >= self.regrow_after and self.dt < self.dt_init:
            self.dt = min(2.0 * self.dt, self.dt_init)
            self._clean = 0


RHS = Callable[[np.ndarray, float], np.ndarray]


def _as_rhs(rhs) -> RHS:
    if isinstance(rhs, DGData):
        return lambda c, t: apply_rhs(rhs, c, t)
    return rhs


def euler_stage(c: np.ndarray, dt: float, rhs, t: float = 0.0,
                limiter: Limiter | None = None, report: StepReport | None = None,
                scale: float | None = None) -> np.ndarray:
    """One limited forward-Euler stage; raises :class:`StageRejected` on a negative moment."""
    f = _as_rhs(rhs)
    out = c + dt * f(c, t)
    if limiter is None or not limiter.config.enabled:
        return out
    M = limiter.moments(out)
    if scale is None:
        scale = moment_scale(limiter, c)
    tol = MOMENT_RTOL * scale
    if report is not None:
        report.min_moment = min(report.min_moment, float(M.min()))
    neg = np.flatnonzero(M < -tol)
    if neg.size:
        raise StageRejected(int(neg[0]), float(M[neg[0]]))
    out, n = limiter(out, atol=tol)
    if report is not None:
        report.limiter_activations += n
    return out


def moment_scale(limiter: Limiter, c: np.ndarray) -> float:
    """Mean absolute cell moment, floored to stay positive."""
    M = limiter.moments(c)
    return max(float(np.sum(np.abs(M))) / M.size, np.finfo(float).tiny)


def ssprk3_step(c: np.ndarray, dt: float, rhs, t: float = 0.0,
                limiter: Limiter | None = None, report: StepReport | None = None) -> np.ndarray:
    """Three-stage third-order SSP Runge-Kutta step built from limited Euler stages."""
    scale = moment_scale(limiter, c) if limiter is not None else None
    c1 = euler_stage(c, dt, rhs, t, limiter, report, scale)
    c2 = 0.75 * c + 0.25 * euler_stage(c1, dt, rhs, t + dt, limiter, report, scale)
    return c / 3.0 + (2.0 / 3.0) * euler_stage(c2, dt, rhs, t + 0.5 * dt, limiter, report, scale)


def cfl_bound(data: DGData, c: np.ndarray) -> float:
    """Minimum of the positivity time-step bounds of the active processes.

    Kernel and solution sup-norms are taken over the quadrature nodes the
    scheme actually uses.  Returns ``inf`` when no process is active.
    """
    mesh, basis, kern = data.mesh, data.basis, data.kernels
    bounds = []
    if kern.has_aggregation and data.agg_refinement is not None:
        ref = data.agg_refinement
        rule = triangle_rule(data.triangle_degree)
        pts = rule.mapped(ref.verts)
        u, w = pts[..., 0], pts[..., 1]
        q = ref.owners[:, 2][:, None]
        x = np.clip(2.0 * (w - mesh.centers[q]) / mesh.widths[q], -1.0, 1.0)
        nw = np.einsum("tgj,tgj->tg", basis.eval(x), c[np.broadcast_to(q, x.shape)])
        peak = float(np.max(kern.beta(u, w) * np.maximum(nw, 0.0)))
        bounds.append(1.0 / (mesh.v_max * peak) if peak > 0 else math.inf)
    if kern.has_breakage and data.brk_refinement is not None:
        ref = data.brk_refinement
        trule = triangle_rule(data.triangle_degree)
        pts = trule.mapped(ref.triangle_verts())
        vals = [pts[..., 0] * kern.daughter(pts[..., 0], pts[..., 1]) * kern.rate(pts[..., 1])]
        rect = ~ref.is_triangle
        if np.any(rect):
            x = 0.5 * (gauss_lobatto(data.n_lobatto).nodes + 1.0)
            ur, wr = ref.u_range[rect], ref.w_range[rect]
            U = (ur[:, :1] + (ur[:, 1:] - ur[:, :1]) * x)[:, :, None]
            W = (wr[:, :1] + (wr[:, 1:] - wr[:, :1]) * x)[:, None, :]
            vals.append((U * kern.daughter(U, W) * kern.rate(W)).reshape(len(ur), -1))
        peak = max(float(np.max(v)) for v in vals if v.size)
        bounds.append(1.0 / peak if peak > 0 else math.inf)
    if kern.has_growth:
        rule = gauss_lobatto(data.n_lobatto)
        v = cell_nodes(mesh, rule.nodes)
        gmax = float(np.max(np.abs(kern.growth(v))))
        # endpoint weight in the normalization where the weights sum to one
        wend = rule.weights[-1] / 2.0
        bounds.append(wend * mesh.dv / gmax if gmax > 0 else math.inf)
    return min(bounds) if bounds else math.inf


Observer = Callable[[float, np.ndarray, StepReport], None]


def run(controller: TimeController, c0: np.ndarray, rhs, limiter: Limiter | None = None,
        observers: Iterable[Observer] = (), data: DGData | None = None,
        fault: Callable[[int, int], bool] | None = None) -> np.ndarray:
    """Advance ``c0`` from ``controller.t`` to ``controller.t_end``.

    Rejected steps are retried from their start state with half the step.
    ``fault(step, attempt)`` can force a rejection (used for testing).
    With the limiter disabled, a non-finite or exploding state raises
    :class:`NumericalFailure`.
    """
    if data is None and isinstance(rhs, DGData):
        data = rhs
    if controller.cfl_mode == "theorem" and data is None:
        raise ValueError("theorem CFL mode needs the precomputed DG data")
    limited = limiter is not None and limiter.config.enabled
    c = np.array(c0, dtype=float)
    ref_size = max(float(np.max(np.abs(c))), 1e-300)
    observers = list(observers)
    step = 0
    eps = 1e-12 * controller.t_end
    while controller.t < controller.t_end - eps:
        base_dt = controller.dt
        if controller.cfl_mode == "theorem":
            bound = cfl_bound(data, c)
            if not math.isfinite(bound) or bound <= 0:
                bound = controller.dt_init
            base_dt = min(base_dt, controller.cfl_safety * bound)
        halvings = 0
        while True:
            dt = min(base_dt, controller.t_end - controller.t)
            report = StepReport(t=controller.t + dt, dt=dt, halvings=halvings)
            try:
                if fault is not None and fault(step, halvings):
                    raise StageRejected(-1, -math.inf)
                new = ssprk3_step(c, dt, rhs, controller.t, limiter if limited else None, report)
                break
            except StageRejected as exc:
                halvings += 1
                if halvings > controller.max_halvings:
                    raise NumericalFailure(
                        f"time step halved {controller.max_halvings} times without success",
                        controller.t) from exc
                log.debug("step at t=%g rejected (cell %d); halving dt", controller.t, exc.cell)
                controller.halve()
                base_dt *= 0.5
        if not np.all(np.isfinite(new)):
            raise NumericalFailure("non-finite solution", controller.t + dt)
        if not limited and float(np.max(np.abs(new))) > BLOWUP_FACTOR * ref_size:
            raise NumericalFailure("solution blew up", controller.t + dt)
        c = new
        controller.t = controller.t + dt if controller.t_end - controller.t - dt > eps else controller.t_end
        report.t = controller.t
        report.halvings = halvings
        controller.accepted(halvings)
        step += 1
        for obs in observers:
            obs(controller.t, c, report)
    return c
