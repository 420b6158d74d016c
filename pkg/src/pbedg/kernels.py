"""Growth, nucleation, aggregation and breakage model functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import gauss_legendre

# Floor applied to particle volumes inside fractional-power kernels.
V_FLOOR = 1e-30

Array = np.ndarray


def _floor(x):
    return np.maximum(np.asarray(x, dtype=float), V_FLOOR)


def _check_positive(*args):
    for a in args:
        if np.any(np.asarray(a) < 0):
            raise ValueError("fractional-power kernels need nonnegative volumes")


def builtin_beta(name: str, scale: float = 1.0, **params) -> Callable[[Array, Array], Array]:
    """Named aggregation kernel ``beta(u, w)`` multiplied by ``scale``."""
    if name == "constant":
        c = scale * params.get("value", 1.0)

        def beta(u, w):
            return np.full(np.broadcast(u, w).shape, c)

    elif name == "additive":

        def beta(u, w):
            return scale * (np.asarray(u, dtype=float) + w)

    elif name == "free_molecule":

        def beta(u, w):
            _check_positive(u, w)
            u, w = _floor(u), _floor(w)
            return scale * np.sqrt(1.0 / u + 1.0 / w) * (np.cbrt(u) + np.cbrt(w)) ** 2

    elif name == "brownian":

        def beta(u, w):
            _check_positive(u, w)
            cu, cw = np.cbrt(_floor(u)), np.cbrt(_floor(w))
            return scale * (1.0 / cu + 1.0 / cw) * (cu + cw)

    elif name == "gravitational":

        def beta(u, w):
            _check_positive(u, w)
            cu, cw = np.cbrt(_floor(u)), np.cbrt(_floor(w))
            return scale * (cu + cw) ** 2 * np.abs(cu * cu - cw * cw)

    else:
        raise ValueError(f"unknown aggregation kernel {name!r}")
    beta.__name__ = name
    return beta


def builtin_breakage(name: str, scale: float = 1.0):
    """Named breakage model as ``(rate, daughter)`` callables."""
    if name != "uniform_linear":
        raise ValueError(f"unknown breakage model {name!r}")

    def rate(w):
        return scale * np.asarray(w, dtype=float)

    def daughter(u, w):
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        # tolerate round-off in nodes that sit on the diagonal u = w
        inside = u <= w + 1e-12 * np.abs(w)
        return np.where(inside, 2.0 / np.maximum(w, V_FLOOR), 0.0)

    return rate, daughter


def builtin_growth(name: str, scale: float = 1.0, **params):
    if name == "constant":
        return lambda v: np.full(np.shape(v), scale * params.get("value", 1.0))
    if name == "linear":
        return lambda v: scale * np.asarray(v, dtype=float)
    raise ValueError(f"unknown growth law {name!r}")


def gaussian_nucleation(rate: float, v_star: float, width: float):
    """Narrow Gaussian stand-in for a point source at ``v_star``."""
    if width <= 0:
        raise ValueError("nucleation width must be positive")

    def source(v):
        v = np.asarray(v, dtype=float)
        return rate * np.exp(-0.5 * ((v - v_star) / width) ** 2) / (width * np.sqrt(2 * np.pi))

    return source


@dataclass
class KernelSet:
    """The model functions of one problem; ``None`` switches a process off."""

    growth: Callable | None = None
    nucleation: Callable | None = None
    beta: Callable | None = None
    rate: Callable | None = None
    daughter: Callable | None = None
    inflow: Callable[[float], float] = field(default=lambda t: 0.0)

    @property
    def has_growth(self):
        return self.growth is not None

    @property
    def has_nucleation(self):
        return self.nucleation is not None

    @property
    def has_aggregation(self):
        return self.beta is not None

    @property
    def has_breakage(self):
        return self.rate is not None and self.daughter is not None

    @property
    def any_active(self):
        return self.has_growth or self.has_nucleation or self.has_aggregation or self.has_breakage


@dataclass
class ValidationReport:
    symmetry_residual: float = 0.0
    daughter_mass_residual: float = 0.0
    min_growth: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate(kernels: KernelSet, v_max: float, samples: int = 200,
             seed: int = 0, rtol: float = 1e-10) -> ValidationReport:
    """Randomized structural checks of the kernel set on [0, v_max]."""
    rng = np.random.default_rng(seed)
    report = ValidationReport()
    if kernels.has_aggregation:
        u = rng.uniform(0, v_max, samples) + 1e-12
        w = rng.uniform(0, v_max, samples) + 1e-12
        b1, b2 = kernels.beta(u, w), kernels.beta(w, u)
        scale = np.maximum(np.abs(b1), 1e-300)
        report.symmetry_residual = float(np.max(np.abs(b1 - b2) / scale))
        if report.symmetry_residual > rtol:
            report.failures.append(
                f"aggregation kernel not symmetric (residual {report.symmetry_residual:.3e})")
    if kernels.has_breakage:
        x, wq = gauss_legendre(24).nodes, gauss_legendre(24).weights
        parents = rng.uniform(0, v_max, samples) + 1e-9
        worst = 0.0
        for w in parents:
            u = 0.5 * w * (x + 1)
            mass = 0.5 * w * np.dot(wq, u * kernels.daughter(u, w))
            worst = max(worst, abs(mass - w) / w)
        report.daughter_mass_residual = worst
        if worst > rtol:
            report.failures.append(
                f"daughter distribution does not conserve mass (residual {worst:.3e})")
    if kernels.has_growth:
        v = np.linspace(0, v_max, samples)
        report.min_growth = float(np.min(kernels.growth(v)))
        if report.min_growth < 0:
            report.failures.append("growth rate is negative somewhere on the domain")
    return report
