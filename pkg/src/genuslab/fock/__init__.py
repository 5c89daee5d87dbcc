"""Flat-fiber Fock model of the oscillator and Clifford operator algebra."""

from .checks import run_all
from .operators import (
    GLOBAL_KINDS,
    FockOperator,
    assemble_global,
    clifford_generator,
    connection_action,
    dirac_base_term,
    graded_commutator,
    identity,
    normal_order,
    oscillator,
)
from .space import MAX_STATES, FockSpace, ModeSpec, build_space
from .spectral import RESTRICTIONS, graded_character, kernel_of

__all__ = [
    "GLOBAL_KINDS",
    "MAX_STATES",
    "RESTRICTIONS",
    "FockOperator",
    "FockSpace",
    "ModeSpec",
    "assemble_global",
    "build_space",
    "clifford_generator",
    "connection_action",
    "dirac_base_term",
    "graded_character",
    "graded_commutator",
    "identity",
    "kernel_of",
    "normal_order",
    "oscillator",
    "run_all",
]
