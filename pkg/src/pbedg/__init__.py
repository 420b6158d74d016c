"""High-order discontinuous Galerkin solver for the 1-D population balance equation."""
from . import backend
from .assembly import DGData, QuadratureOrders, apply_rhs, moment_of_rhs, precompute
from .kernels import KernelSet, builtin_beta, builtin_breakage, builtin_growth
from .limiter import Limiter, LimiterConfig, apply_limiter, cell_min
from .mesh import (Basis, DGSolution, Mesh, basis_eval, build_log_mesh, build_power_mesh,
                   build_uniform_mesh, refine_split)
from .timestepping import NumericalFailure, StepReport, TimeController, run, ssprk3_step

__all__ = [
    "backend", "DGData", "QuadratureOrders", "apply_rhs", "moment_of_rhs", "precompute",
    "KernelSet", "builtin_beta", "builtin_breakage", "builtin_growth",
    "Limiter", "LimiterConfig", "apply_limiter", "cell_min",
    "Basis", "DGSolution", "Mesh", "basis_eval", "build_log_mesh", "build_power_mesh",
    "build_uniform_mesh", "refine_split",
    "NumericalFailure", "StepReport", "TimeController", "run", "ssprk3_step",
]
__version__ = "0.1.0"
