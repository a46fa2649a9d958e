"""
cliffordkt - Clifford+kT state enumeration, robustness and sampling
"""

__version__ = "0.1.0"

from .enumeration import StateSet, enumerate_cumulative, enumerate_layers, strict_partition
from .ma_normal import GateWord, NormalForm, to_normal_form
from .pauli_algebra import ExactState, PauliOperator
from .robustness import (
    PseudoMixture,
    RobustnessResult,
    assemble_problem,
    lower_bound,
    robustness,
    solve_robustness,
)
from .sampler import SamplingPlan, estimate, plan_samples
from .symmetry import SymmetrySpec, build_group
from .targets import TargetState, build_target, parse_target

__all__ = [
    "StateSet",
    "enumerate_cumulative",
    "enumerate_layers",
    "strict_partition",
    "GateWord",
    "NormalForm",
    "to_normal_form",
    "ExactState",
    "PauliOperator",
    "PseudoMixture",
    "RobustnessResult",
    "assemble_problem",
    "lower_bound",
    "robustness",
    "solve_robustness",
    "SamplingPlan",
    "estimate",
    "plan_samples",
    "SymmetrySpec",
    "build_group",
    "TargetState",
    "build_target",
    "parse_target",
]
