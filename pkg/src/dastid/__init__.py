"""System identification by discretized atomic soft thresholding (DAST).

Transfer functions are sparse combinations of normalized single-pole atoms
``(1 - |w|^2) / (z - w)`` with poles on a finite net of the disk
``|w| <= rho``. Fitting is a complex weighted-l1 least-squares problem
whose solution is certified by a duality gap.
"""
from .atoms import (AtomicModel, atom_impulse_response, decomposition_weight, eval_atom,
                    eval_model, h2_gram, h2_inner, model_h2_norm, random_model)
from .baseline import estimate_markov, ho_kalman, simulate_io, subspace_identify
from .estimator import DASTRegressor, HoKalmanRegressor
from .experiments import (ConfigError, ExperimentConfig, ExperimentRecord, run_dast_vs_subspace,
                          run_error_vs_n, run_identify)
from .hankel import build_hankel, hankel_nuclear_norm, hankel_singular_values
from .measure import MeasurementPlan, add_noise, apply_plan, build_matrix
from .metrics import error_report, h2_error, hinf_error, theorem_bound, theorem_bound_59
from .net import EpsilonNet, build_net, covering_constant, eps_from_delta, net_for_cardinality
from .solver import (DastProblem, DastSolution, SolverConfig, choose_mu, dual_gap,
                     reconstruct_model, solve_dast)

__version__ = "0.1.0"

__all__ = [
    "AtomicModel", "ConfigError", "DASTRegressor", "DastProblem", "DastSolution", "EpsilonNet",
    "ExperimentConfig", "ExperimentRecord", "HoKalmanRegressor", "MeasurementPlan",
    "SolverConfig", "add_noise", "apply_plan", "atom_impulse_response", "build_hankel",
    "build_matrix", "build_net", "choose_mu", "covering_constant", "decomposition_weight",
    "dual_gap", "error_report", "eps_from_delta", "estimate_markov", "eval_atom", "eval_model",
    "h2_error", "h2_gram", "h2_inner", "hankel_nuclear_norm", "hankel_singular_values",
    "hinf_error", "ho_kalman", "model_h2_norm", "net_for_cardinality", "random_model",
    "reconstruct_model", "run_dast_vs_subspace", "run_error_vs_n", "run_identify",
    "simulate_io", "solve_dast", "subspace_identify", "theorem_bound", "theorem_bound_59",
]
