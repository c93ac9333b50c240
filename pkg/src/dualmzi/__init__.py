"""Postselected dual Mach-Zehnder interferometry with cross-Kerr coupling."""

from . import analytics, circuit, errors, estimation, montecarlo
from .circuit import (
    CircuitParams,
    ConditionalState,
    JointState,
    Stage,
    apply_beam_splitter,
    apply_kerr,
    apply_phase_shift,
    concurrence,
    evolve,
    fidelity,
    joint_probabilities,
    make_input_state,
    marginal_probabilities,
    postselect,
)

__version__ = "0.1.0"

__all__ = [
    "analytics",
    "circuit",
    "errors",
    "estimation",
    "montecarlo",
    "CircuitParams",
    "ConditionalState",
    "JointState",
    "Stage",
    "apply_beam_splitter",
    "apply_kerr",
    "apply_phase_shift",
    "concurrence",
    "evolve",
    "fidelity",
    "joint_probabilities",
    "make_input_state",
    "marginal_probabilities",
    "postselect",
    "__version__",
]
