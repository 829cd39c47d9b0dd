"""Scattering and bound states of nonlinear delta-center chains.

The primary scattering route reduces the consistency equations at the
centers to one real closure equation in ``|psi(c_N)|`` whose roots are the
coexisting branches; bound states use the attractive counterpart.  A
transfer-matrix march and a shooting method serve as independent oracles.
"""

from .bound import (bound_norm, bound_phi, bound_wavefunction, explicit_x,
                    lambert_x, solve_bound, solve_general_bound,
                    solve_single_bound, solve_symmetric_double,
                    symmetric_double_report)
from .errors import (BracketError, ConvergenceError, DomainError, NLDeltaError,
                     NoBoundStateError, NoBranchError, ScanError,
                     ValidationError)
from .greens import (back_substitute, build_phi, closure_residual,
                     closure_residuals, consistency_residual,
                     default_scan_config, evaluate_wavefunction,
                     single_delta_closed_form, solve_scattering)
from .model import (BoundCenter, BoundProblem, BoundStateSolution, DeltaCenter,
                    Incidence, Linear, Nonlinearity, Parity, PowerLaw,
                    ScatteringProblem, ScatteringSolution, effective_g,
                    evaluate_f, validate_and_sort, validate_bound)
from .numerics import (RootScanConfig, find_all_positive_roots, lambert_w,
                       real_cubic_roots, refine_root, scan_roots,
                       solve_modulus_cubic)
from .oracle import (oracle_branches, shooting_bound, shooting_states,
                     symmetric_shooting, transfer_scatter)
from .sweep import PRESETS, SweepRecord, SweepSpec, branch_counts, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BoundCenter",
    "BoundProblem",
    "BoundStateSolution",
    "BracketError",
    "ConvergenceError",
    "DeltaCenter",
    "DomainError",
    "Incidence",
    "Linear",
    "NLDeltaError",
    "NoBoundStateError",
    "NoBranchError",
    "Nonlinearity",
    "PRESETS",
    "Parity",
    "PowerLaw",
    "RootScanConfig",
    "ScanError",
    "ScatteringProblem",
    "ScatteringSolution",
    "SweepRecord",
    "SweepSpec",
    "ValidationError",
    "back_substitute",
    "branch_counts",
    "bound_norm",
    "bound_phi",
    "bound_wavefunction",
    "build_phi",
    "closure_residual",
    "closure_residuals",
    "consistency_residual",
    "default_scan_config",
    "effective_g",
    "evaluate_f",
    "evaluate_wavefunction",
    "explicit_x",
    "find_all_positive_roots",
    "lambert_w",
    "lambert_x",
    "oracle_branches",
    "real_cubic_roots",
    "refine_root",
    "run_sweep",
    "scan_roots",
    "shooting_bound",
    "shooting_states",
    "single_delta_closed_form",
    "solve_bound",
    "solve_general_bound",
    "solve_modulus_cubic",
    "solve_scattering",
    "solve_single_bound",
    "solve_symmetric_double",
    "symmetric_double_report",
    "symmetric_shooting",
    "transfer_scatter",
    "validate_and_sort",
    "validate_bound",
]
