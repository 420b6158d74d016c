"""Prewired problem specifications of the standard test suite."""
from __future__ import annotations

from .config import ProblemSpec
from .runner import RunOutput, run_problem

V0_EX1 = 0.2
V0_EX4 = 0.15

_STANDARD = {
    "mesh": {"type": "power", "v_max": 10.0, "L": 15, "exponent": 3.0},
    "dg": {"k": 2},
    "time": {"t_end": 1.0, "dt_per_dv": 10.0},
    "limiter": {"enabled": True},
}

_EX5_LAMBDA = {"I": 0.5, "II": 1.0, "III": 2.0}


def _spec(problem: dict, **overrides) -> ProblemSpec:
    data = {**_STANDARD, "problem": problem}
    data.update(overrides)
    return ProblemSpec.from_dict(data)


def _analytic(case: str, **params) -> dict:
    return {"type": "analytic", "case": case, "params": params}


def _ex1(case: str, processes: dict) -> ProblemSpec:
    return _spec({
        "name": f"ex1-{case}",
        "processes": processes,
        "initial": {"type": "exponential", "v0": V0_EX1},
        "reference": _analytic(f"ex1-{case}", v0=V0_EX1),
    })


def _ex3(case: str, kernel: str) -> ProblemSpec:
    init = _analytic(f"ex3-{case}", v0=V0_EX1)
    return _spec({
        "name": f"ex3-{case}",
        "processes": {"growth": {"law": "linear"}, "aggregation": {"kernel": kernel}},
        "initial": init,
        "boundary": init,
        "reference": init,
    })


def _ex4(case: str, kernel: str) -> ProblemSpec:
    return _spec({
        "name": f"ex4-{case}",
        "processes": {"aggregation": {"kernel": kernel}},
        "initial": {"type": "exponential", "v0": V0_EX4},
        "reference": {"type": "dpbe", "classes": 2000},
    })


def _ex5(case: str, limited: bool = True, dt: float = 0.02) -> ProblemSpec:
    ref = _analytic("ex5-" + case, lam0=1.0, laminf=_EX5_LAMBDA[case])
    suffix = "" if limited else ("-unlimited" if dt == 0.02 else f"-unlimited-{dt:g}")
    return ProblemSpec.from_dict({
        "problem": {
            "name": f"ex5-{case}{suffix}",
            "processes": {"aggregation": {"kernel": "constant"}, "breakage": {}},
            "initial": ref,
            "reference": ref,
        },
        "mesh": {"type": "log", "v_lo": 1e-3, "v_max": 1e3, "L": 11},
        "dg": {"k": 4},
        "time": {"t_end": 10.0, "dt": dt, "dt_per_dv": None},
        "limiter": {"enabled": limited},
    })


def _ex2() -> ProblemSpec:
    ref = _analytic("ex2", lam0=3.0, laminf=4.0)
    return _spec({
        "name": "ex2",
        "processes": {"aggregation": {"kernel": "constant"}, "breakage": {}},
        "initial": ref,
        "reference": ref,
    })


def _registry() -> dict:
    reg = {
        "ex1-I": lambda: _ex1("I", {"aggregation": {"kernel": "constant"}}),
        "ex1-II": lambda: _ex1("II", {"aggregation": {"kernel": "additive"}}),
        "ex1-III": lambda: _ex1("III", {"breakage": {"model": "uniform_linear"}}),
        "ex2": _ex2,
        "ex3-I": lambda: _ex3("I", "constant"),
        "ex3-II": lambda: _ex3("II", "constant"),
        "ex3-III": lambda: _ex3("III", "additive"),
        "ex4-I": lambda: _ex4("I", "free_molecule"),
        "ex4-II": lambda: _ex4("II", "brownian"),
        "ex4-III": lambda: _ex4("III", "gravitational"),
    }
    for case in _EX5_LAMBDA:
        reg[f"ex5-{case}"] = (lambda c=case: _ex5(c))
        reg[f"ex5-{case}-unlimited"] = (lambda c=case: _ex5(c, limited=False))
        for dt in (0.003, 0.002):
            reg[f"ex5-{case}-unlimited-{dt:g}"] = (lambda c=case, d=dt: _ex5(c, False, d))
    return reg


BENCHMARKS = _registry()


def benchmark_spec(name: str) -> ProblemSpec:
    try:
        return BENCHMARKS[name]()
    except KeyError:
        raise ValueError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}") from None


def run_benchmark(name: str, level: int = 0) -> RunOutput:
    """Run a prewired benchmark by name (e.g. ``ex1-I``, ``ex4-II``, ``ex5-III-unlimited``)."""
    return run_problem(benchmark_spec(name), level, name=name)
