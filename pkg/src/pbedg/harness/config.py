"""Declarative problem description and its strict JSON (de)serialization.

A config file is one JSON object with the sections ``problem``, ``mesh``,
``dg``, ``time``, ``limiter`` and ``output``.  Unknown keys anywhere are
rejected so that a typo never silently falls back to a default.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..kernels import (KernelSet, builtin_beta, builtin_breakage, builtin_growth,
                       gaussian_nucleation)
from ..mesh import Mesh, build_log_mesh, build_power_mesh, build_uniform_mesh, refine_split
from ..reference import get_case


class ConfigError(ValueError):
    """Malformed or inconsistent problem description."""


@dataclass
class AggregationSpec:
    kernel: str
    scale: float = 1.0
    params: dict = field(default_factory=dict)


@dataclass
class BreakageSpec:
    model: str = "uniform_linear"
    scale: float = 1.0


@dataclass
class GrowthSpec:
    law: str
    scale: float = 1.0
    params: dict = field(default_factory=dict)


@dataclass
class NucleationSpec:
    rate: float
    v_star: float
    width: float


@dataclass
class ProcessSpec:
    growth: GrowthSpec | None = None
    nucleation: NucleationSpec | None = None
    aggregation: AggregationSpec | None = None
    breakage: BreakageSpec | None = None


@dataclass
class FunctionSpec:
    """Initial, boundary or reference data.

    ``type`` is one of ``zero``, ``constant`` (``value``), ``exponential``
    (``v0``: ``exp(-v/v0)/v0``), ``analytic`` (``case`` + ``params``),
    ``tabulated`` (``v``, ``n``; linear interpolation) or, for references
    only, ``dpbe`` (``classes``).
    """

    type: str = "zero"
    value: float = 0.0
    v0: float = 1.0
    case: str = ""
    params: dict = field(default_factory=dict)
    v: list = field(default_factory=list)
    n: list = field(default_factory=list)
    classes: int = 2000


@dataclass
class ProblemSection:
    name: str = "custom"
    processes: ProcessSpec = field(default_factory=ProcessSpec)
    initial: FunctionSpec = field(default_factory=FunctionSpec)
    boundary: FunctionSpec = field(default_factory=FunctionSpec)
    reference: FunctionSpec | None = None


@dataclass
class MeshSection:
    type: str = "power"
    v_max: float = 10.0
    L: int = 15
    exponent: float = 3.0
    v_lo: float = 1e-3
    refine: int = 0


@dataclass
class DGSection:
    k: int = 2
    n_lobatto: int | None = None
    triangle_degree: int | None = None
    compact: bool = True


@dataclass
class TimeSection:
    t_end: float = 1.0
    dt: float | None = None
    dt_per_dv: float | None = 10.0
    cfl_mode: str = "fixed"
    cfl_safety: float = 1.0
    max_halvings: int = 40


@dataclass
class LimiterSection:
    enabled: bool = True
    s: int | None = None
    dense_sampling: bool = False


@dataclass
class OutputSection:
    dir: str | None = None
    every: int = 1
    error_points: int = 64


@dataclass
class ProblemSpec:
    problem: ProblemSection = field(default_factory=ProblemSection)
    mesh: MeshSection = field(default_factory=MeshSection)
    dg: DGSection = field(default_factory=DGSection)
    time: TimeSection = field(default_factory=TimeSection)
    limiter: LimiterSection = field(default_factory=LimiterSection)
    output: OutputSection = field(default_factory=OutputSection)

    # -- serialization -----------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemSpec":
        spec = _build(cls, data, "config")
        spec.check()
        return spec

    @classmethod
    def from_json(cls, text: str) -> "ProblemSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ProblemSpec":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_json(text)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def replace(self, **sections) -> "ProblemSpec":
        return ProblemSpec.from_dict({**self.to_dict(), **sections})

    # -- validation and construction -------------------------------------------

    def check(self) -> None:
        if self.dg.k < 1:
            raise ConfigError("dg.k must be at least 1")
        if self.dg.n_lobatto is not None and self.dg.n_lobatto < self.dg.k + 2:
            raise ConfigError(f"dg.n_lobatto must be at least k + 2 = {self.dg.k + 2}")
        if self.time.t_end <= 0:
            raise ConfigError("time.t_end must be positive")
        if self.time.dt is None and not self.time.dt_per_dv:
            raise ConfigError("set time.dt or time.dt_per_dv")
        if self.time.dt is not None and self.time.dt <= 0:
            raise ConfigError("time.dt must be positive")
        if self.time.cfl_mode not in ("fixed", "theorem"):
            raise ConfigError(f"unknown time.cfl_mode {self.time.cfl_mode!r}")
        if self.mesh.type not in ("power", "uniform", "log"):
            raise ConfigError(f"unknown mesh.type {self.mesh.type!r}")
        if self.mesh.L < 1 or self.mesh.v_max <= 0 or self.mesh.refine < 0:
            raise ConfigError("mesh needs L >= 1, v_max > 0 and refine >= 0")
        s = self.limiter_order()
        if not 0 <= s <= self.dg.k:
            raise ConfigError(f"limiter.s = {s} outside 0..k")
        try:
            self.kernels()
            self.build_mesh()
            for spec in (self.problem.initial, self.problem.boundary):
                make_function(spec)
            if self.problem.reference is not None and self.problem.reference.type != "dpbe":
                make_function(self.problem.reference)
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc
        if not self.kernels().any_active:
            raise ConfigError("no process is active")

    def limiter_order(self) -> int:
        if self.limiter.s is not None:
            return self.limiter.s
        pr = self.problem.processes
        return 1 if (pr.aggregation or pr.breakage) else 0

    def build_mesh(self, level: int = 0) -> Mesh:
        m = self.mesh
        if m.type == "power":
            mesh = build_power_mesh(m.v_max, m.L, m.exponent)
        elif m.type == "uniform":
            mesh = build_uniform_mesh(m.v_max, m.L)
        else:
            mesh = build_log_mesh(m.v_lo, m.v_max, m.L)
        for _ in range(m.refine + level):
            mesh = refine_split(mesh)
        return mesh

    def time_step(self, mesh: Mesh) -> float:
        if self.time.dt is not None:
            return self.time.dt
        return self.time.dt_per_dv * mesh.dv

    def kernels(self) -> KernelSet:
        pr = self.problem.processes
        ks = KernelSet()
        if pr.growth:
            ks.growth = builtin_growth(pr.growth.law, pr.growth.scale, **pr.growth.params)
        if pr.nucleation:
            nu = pr.nucleation
            ks.nucleation = gaussian_nucleation(nu.rate, nu.v_star, nu.width)
        if pr.aggregation:
            ks.beta = builtin_beta(pr.aggregation.kernel, pr.aggregation.scale,
                                   **pr.aggregation.params)
        if pr.breakage:
            ks.rate, ks.daughter = builtin_breakage(pr.breakage.model, pr.breakage.scale)
        inflow = make_function(self.problem.boundary, boundary=True)
        ks.inflow = inflow
        return ks


def make_function(spec: FunctionSpec, boundary: bool = False):
    """Callable for a :class:`FunctionSpec`: ``n(v)`` (initial) or ``n(0, t)`` (boundary)."""
    kind = spec.type
    if kind == "zero":
        return (lambda t: 0.0) if boundary else (lambda v: np.zeros(np.shape(v)))
    if kind == "constant":
        val = float(spec.value)
        return (lambda t: val) if boundary else (lambda v: np.full(np.shape(v), val))
    if kind == "analytic":
        case = get_case(spec.case, **spec.params)
        if boundary:
            return case.inflow
        return case.initial
    if boundary:
        raise ConfigError(f"boundary type {kind!r} not supported")
    if kind == "exponential":
        v0 = float(spec.v0)
        if v0 <= 0:
            raise ConfigError("exponential v0 must be positive")
        return lambda v: np.exp(-np.asarray(v) / v0) / v0
    if kind == "tabulated":
        xs, ys = np.asarray(spec.v, dtype=float), np.asarray(spec.n, dtype=float)
        if xs.size < 2 or xs.shape != ys.shape or np.any(np.diff(xs) <= 0):
            raise ConfigError("tabulated data needs matching, increasing v and n lists")
        return lambda v: np.interp(v, xs, ys, left=ys[0], right=0.0)
    raise ConfigError(f"unknown function type {kind!r}")


# -- strict dataclass construction ------------------------------------------------

def _build(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    names = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(names)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        kwargs[key] = _convert(names[key].type, value, f"{where}.{key}")
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_NESTED = {
    "ProcessSpec": ProcessSpec, "GrowthSpec": GrowthSpec, "NucleationSpec": NucleationSpec,
    "AggregationSpec": AggregationSpec, "BreakageSpec": BreakageSpec,
    "FunctionSpec": FunctionSpec, "ProblemSection": ProblemSection, "MeshSection": MeshSection,
    "DGSection": DGSection, "TimeSection": TimeSection, "LimiterSection": LimiterSection,
    "OutputSection": OutputSection,
}

_SCALARS = {"float": (int, float), "int": (int,), "bool": (bool,), "str": (str,),
            "dict": (dict,), "list": (list,)}


def _convert(annotation: str, value, where: str):
    ann = str(annotation).replace(" ", "")
    optional = ann.endswith("|None")
    base = ann[:-5] if optional else ann
    if value is None:
        if optional:
            return None
        raise ConfigError(f"{where}: null not allowed")
    if base in _NESTED:
        return _build(_NESTED[base], value, where)
    kinds = _SCALARS.get(base)
    if kinds is None:
        return value
    if isinstance(value, bool) and base in ("int", "float"):
        raise ConfigError(f"{where}: expected {base}, got a boolean")
    if not isinstance(value, kinds):
        raise ConfigError(f"{where}: expected {base}, got {type(value).__name__}")
    return float(value) if base == "float" else value
