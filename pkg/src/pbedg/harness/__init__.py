"""Configuration, benchmark orchestration, error norms and CSV output."""
from .benchmarks import BENCHMARKS, benchmark_spec, run_benchmark
from .config import ConfigError, ProblemSpec
from .runner import (ConvergenceRow, RunOutput, convergence_study, emit_csv, error_norms,
                     l2_project, project_initial, run_problem)

__all__ = [
    "BENCHMARKS", "benchmark_spec", "run_benchmark", "ConfigError", "ProblemSpec",
    "ConvergenceRow", "RunOutput", "convergence_study", "emit_csv", "error_norms",
    "l2_project", "project_initial", "run_problem",
]
