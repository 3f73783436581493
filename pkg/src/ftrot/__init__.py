"""Fault-tolerant preparation of arbitrary-angle Z-rotation states.

Transversal physical rotations on a stabilizer code, post-selected on
clean syndromes, yield a logical rotation state whose residual errors
fall off steeply with the code distance.  The package models that
protocol end to end: code constructions (`codes`), closed-form error
and success-rate formulas (`analytics`), a vectorized Monte-Carlo
engine (`mcsim`), composition of prepared states into arbitrary
targets (`schemes`), and cost comparisons against Clifford+T synthesis
baselines (`bench`), all behind one CLI (`ftrot`).
"""

from .analytics import (
    RotationConfig,
    SubstrateLimitedError,
    branch_angle,
    branch_infidelity,
    coherent_angle_std,
    incoherent_error_first_order,
    incoherent_error_total,
    logical_angle,
    readout_error,
    success_rate,
)
from .bench import CostPoint, DistillCostTable, pareto_report
from .codes import StabilizerCode, get_code, list_codes, validate
from .mcsim import McStats, NoiseModel, coherent_mc, estimate, run_prep_trial
from .pauli import PauliString, commutes
from .schemes import (
    CostModelParams,
    InfeasibleError,
    ScaffoldPlan,
    ghz_expected_attempts,
    prep_expected_cost,
    scaffold_optimize,
    simulate_walk,
    walk_expected_steps,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PauliString",
    "commutes",
    "StabilizerCode",
    "get_code",
    "list_codes",
    "validate",
    "RotationConfig",
    "SubstrateLimitedError",
    "logical_angle",
    "branch_angle",
    "branch_infidelity",
    "incoherent_error_first_order",
    "incoherent_error_total",
    "readout_error",
    "success_rate",
    "coherent_angle_std",
    "NoiseModel",
    "McStats",
    "run_prep_trial",
    "estimate",
    "coherent_mc",
    "CostModelParams",
    "ScaffoldPlan",
    "InfeasibleError",
    "walk_expected_steps",
    "simulate_walk",
    "ghz_expected_attempts",
    "prep_expected_cost",
    "scaffold_optimize",
    "CostPoint",
    "DistillCostTable",
    "pareto_report",
]
