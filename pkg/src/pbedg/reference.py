"""Closed-form benchmark solutions and the discrete Smoluchowski reference model.

Formulas that combine exponentials with ``I_1`` or ``sinh`` are evaluated in
exponentially scaled form so that large arguments do not overflow.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from . import backend

log = logging.getLogger(__name__)


# -- special functions ----------------------------------------------------------

def bessel_i1(x):
    """Modified Bessel function of the first kind, order one."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_i1 needs finite arguments")
    return special.i1(x)


def bessel_i1e(x):
    """``exp(-|x|) I_1(x)``."""
    return special.i1e(np.asarray(x, dtype=float))


def i1_over_x_scaled(x, shift):
    """``exp(shift) * I_1(x) / x`` for ``x >= 0``, finite at ``x = 0`` (limit 1/2)."""
    x = np.asarray(x, dtype=float)
    shift = np.asarray(shift, dtype=float)
    small = x < 1e-4
    xs = np.where(small, 1.0, x)
    big = special.i1e(xs) / xs * np.exp(xs + shift)
    series = (0.5 + x * x / 16.0) * np.exp(shift)
    return np.where(small, series, big)


def _sinh_ratio_scaled(a, z):
    """``exp(-z) sinh(a z) / a`` for ``0 <= a < 1``, continuous at ``a = 0``."""
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    tiny = a < 1e-12
    safe_a = np.where(tiny, 1.0, a)
    val = np.exp(-(1.0 - safe_a) * z) * (-np.expm1(-2.0 * safe_a * z)) / (2.0 * safe_a)
    return np.where(tiny, z * np.exp(-z), val)


# -- analytic cases ---------------------------------------------------------------

@dataclass
class AnalyticCase:
    """A closed-form solution ``n(v, t)`` with optional boundary trace and moments."""

    name: str
    density: Callable
    inflow: Callable[[float], float] = field(default=lambda t: 0.0)
    M0: Callable[[float], float] | None = None
    M1: Callable[[float], float] | None = None
    params: dict = field(default_factory=dict)

    def __call__(self, v, t):
        return self.density(np.asarray(v, dtype=float), float(t))

    def initial(self, v):
        return self(v, 0.0)


def _lambda(t, lam0, laminf):
    th = math.tanh(t / laminf)
    return laminf * (lam0 + laminf * th) / (laminf + lam0 * th)


def _ex1_case1(v0):
    def n(v, t):
        s = (t + 2.0) * v0
        return 4.0 / ((t + 2.0) * s) * np.exp(-2.0 * v / s)
    return AnalyticCase("ex1-I", n, M0=lambda t: 2.0 / (2.0 + t), M1=lambda t: v0,
                        params={"v0": v0})


def _ex1_case2(v0):
    def n(v, t):
        T = -math.expm1(-v0 * t)
        x = 2.0 * math.sqrt(T) * v / v0
        # (1-T)/(v sqrt T) I1(x) e^{-(1+T)v/v0} = (1-T)(2/v0) [I1(x)/x] e^{-(1+T)v/v0}
        return (1.0 - T) * (2.0 / v0) * i1_over_x_scaled(x, -(1.0 + T) * v / v0)
    return AnalyticCase("ex1-II", n, M0=lambda t: math.exp(-v0 * t), M1=lambda t: v0,
                        params={"v0": v0})


def _ex1_case3(v0):
    def n(v, t):
        a = 1.0 + v0 * t
        return a * a / v0 * np.exp(-a * v / v0)
    return AnalyticCase("ex1-III", n, M0=lambda t: 1.0 + v0 * t, M1=lambda t: v0,
                        params={"v0": v0})


def aggregation_breakage_case(lam0: float, laminf: float, name: str = "ex2"):
    """Constant aggregation with uniform/linear breakage (self-similar exponential)."""
    if lam0 <= 0 or laminf <= 0:
        raise ValueError("lambda_0 and lambda_inf must be positive")

    def n(v, t):
        lam = _lambda(t, lam0, laminf)
        return 2.0 * (lam / laminf) ** 2 * np.exp(-lam * v)

    return AnalyticCase(name, n,
                        M0=lambda t: 2.0 * _lambda(t, lam0, laminf) / laminf**2,
                        M1=lambda t: 2.0 / laminf**2,
                        params={"lambda0": lam0, "lambda_inf": laminf})


def _ex3_case1(v0):
    M0 = lambda t: 2.0 / (2.0 + t)
    M1 = lambda t: v0 * math.exp(t)

    def n(v, t):
        m0, m1 = M0(t), M1(t)
        return m0 * m0 / m1 * np.exp(-m0 / m1 * v)

    return AnalyticCase("ex3-I", n, inflow=lambda t: 4.0 / (v0 * math.exp(t) * (2.0 + t) ** 2),
                        M0=M0, M1=M1, params={"v0": v0})


def _ex3_case2(v0):
    M0 = lambda t: 2.0 / (2.0 + t)
    M1 = lambda t: 2.0 * v0 * math.exp(t)

    def n(v, t):
        m0, m1 = M0(t), M1(t)
        a = math.sqrt(max(1.0 - m0, 0.0))
        return 2.0 * m0 * m0 / m1 * _sinh_ratio_scaled(a, 2.0 * v / m1)

    return AnalyticCase("ex3-II", n, inflow=lambda t: 0.0, M0=M0, M1=M1, params={"v0": v0})


def _ex3_case3(v0):
    M0 = lambda t: math.exp(v0 * (1.0 - math.exp(t)))
    M1 = lambda t: v0 * math.exp(t)

    def n(v, t):
        m0, m1 = M0(t), M1(t)
        y = 2.0 * math.sqrt(max(1.0 - m0, 0.0)) * v / m1
        rate = m0 / m1 * (2.0 / m0 - 1.0)
        return 2.0 * m0 / m1 * i1_over_x_scaled(y, -rate * v)

    return AnalyticCase("ex3-III", n, inflow=lambda t: M0(t) / M1(t), M0=M0, M1=M1,
                        params={"v0": v0})


_CASES = {
    "ex1-I": _ex1_case1,
    "ex1-II": _ex1_case2,
    "ex1-III": _ex1_case3,
    "ex3-I": _ex3_case1,
    "ex3-II": _ex3_case2,
    "ex3-III": _ex3_case3,
}


def get_case(name: str, **params) -> AnalyticCase:
    """Analytic case by name; ``ex2``/``ex5-*`` take ``lam0``/``laminf``, the others ``v0``."""
    if name == "ex2" or name.startswith("ex5"):
        return aggregation_breakage_case(params.get("lam0", 3.0), params.get("laminf", 4.0), name)
    try:
        factory = _CASES[name]
    except KeyError:
        raise ValueError(f"no analytic solution for {name!r}") from None
    v0 = params.get("v0", 0.2)
    if v0 <= 0:
        raise ValueError("v0 must be positive")
    return factory(v0)


def analytic(case: str | AnalyticCase, v, t, **params):
    """Evaluate a closed-form solution at ``(v, t)``."""
    if isinstance(case, str):
        case = get_case(case, **params)
    return case(v, t)


def numeric_moment(f: Callable, s: int, v_max: float, n: int = 4000) -> float:
    """``int_0^v_max v^s f(v) dv`` by composite Gauss-Legendre quadrature."""
    x, w = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(0.0, v_max, n // 8 + 1)
    a, b = edges[:-1, None], edges[1:, None]
    v = 0.5 * (a + b) + 0.5 * (b - a) * x
    return float(np.sum(0.5 * (b - a) * w * v**s * f(v)))


# -- discrete Smoluchowski reference -----------------------------------------------

@dataclass
class DPBEState:
    """Class counts ``counts[i]`` of particles of size ``(i+1) dv`` at time ``t``."""

    dv: float
    counts: np.ndarray
    t: float = 0.0
    halvings: int = 0

    @property
    def K(self) -> int:
        return self.counts.size

    @property
    def sizes(self) -> np.ndarray:
        return self.dv * np.arange(1, self.K + 1)

    def mass(self) -> float:
        return math.fsum(self.sizes * self.counts)

    def density(self) -> np.ndarray:
        """Number density represented by each class."""
        return self.counts / self.dv


def dpbe_counts(n0: Callable, dv: float, K: int) -> np.ndarray:
    """Initial class counts ``n0(v_i) dv`` sampled at the class sizes."""
    return np.asarray(n0(dv * np.arange(1, K + 1)), dtype=float) * dv


def dpbe_rhs(beta_matrix: np.ndarray, counts: np.ndarray) -> np.ndarray:
    out = np.empty_like(counts)
    backend.get().dpbe_rhs(beta_matrix, counts, out)
    return out


def dpbe_solve(beta: Callable, counts0, dv: float, t_end: float, dt: float | None = None,
               max_halvings: int = 40, observer: Callable | None = None) -> DPBEState:
    """Integrate the truncated discrete system with SSP-RK3.

    Collisions whose product would exceed the last class are excluded from
    both gain and loss, so ``sum_i v_i n_i`` is conserved.  A stage with a
    count below ``-1e-12 * max(count)`` is retried with half the step.
    """
    n = np.ascontiguousarray(counts0, dtype=float)
    K = n.size
    if K < 1 or dv <= 0:
        raise ValueError("need at least one class of positive width")
    sizes = dv * np.arange(1, K + 1)
    B = np.ascontiguousarray(beta(sizes[:, None], sizes[None, :]), dtype=float)
    if dt is None:
        rate = float(np.max(B @ np.abs(n))) if n.any() else 0.0
        dt = t_end / 10 if rate == 0 else min(t_end / 10, 0.5 / rate)
    state = DPBEState(dv, n.copy())
    t = 0.0
    while t < t_end * (1 - 1e-12):
        h = min(dt, t_end - t)
        tries = 0
        while True:
            tol = 1e-12 * max(float(np.max(np.abs(n))), 1e-300)
            n1 = n + h * dpbe_rhs(B, n)
            n2 = 0.75 * n + 0.25 * (n1 + h * dpbe_rhs(B, n1))
            new = n / 3.0 + (2.0 / 3.0) * (n2 + h * dpbe_rhs(B, n2))
            if min(n1.min(), n2.min(), new.min()) >= -tol:
                break
            tries += 1
            if tries > max_halvings:
                raise RuntimeError(f"discrete reference failed to stay nonnegative at t = {t:g}")
            h *= 0.5
            dt = h
        state.halvings += tries
        n = new
        t = t + h if t_end - t - h > 1e-12 * t_end else t_end
        if observer is not None:
            observer(t, n)
    state.counts = n
    state.t = t
    return state


def dpbe_project(state: DPBEState, mesh) -> np.ndarray:
    """Cell averages on ``mesh`` of the class-wise constant reference density.

    Class ``i`` covers ``[(i - 1/2) dv, (i + 1/2) dv]``; the first class is
    extended down to 0 so the reference has no artificial gap at the origin.
    """
    if state.dv > mesh.dv:
        log.warning("reference class width %.3g exceeds the finest mesh cell %.3g",
                    state.dv, mesh.dv)
    K, dv = state.K, state.dv
    bounds = dv * (np.arange(K + 1) + 0.5)
    bounds[0] = 0.0
    dens = state.counts / np.diff(bounds)
    # cumulative integral of the piecewise-constant density at arbitrary points
    cum = np.concatenate([[0.0], np.cumsum(dens * np.diff(bounds))])

    def F(x):
        x = np.clip(x, 0.0, bounds[-1])
        idx = np.clip(np.searchsorted(bounds, x, side="right") - 1, 0, K - 1)
        return cum[idx] + dens[idx] * (x - bounds[idx])

    return (F(mesh.right) - F(mesh.left)) / mesh.widths


def write_dpbe_csv(state: DPBEState, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["v_center", "count"])
        for v, c in zip(state.sizes, state.counts):
            w.writerow([repr(float(v)), repr(float(c))])
