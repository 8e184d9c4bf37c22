"""Symmetry breaking and restoration in a two-level pairing model.

Mean-field BCS, number-projected BCS and exact diagonalization of the
two-level pairing Hamiltonian, with concurrence, mutual information,
classical correlation and discord of two-mode reduced states.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceFailure,
    DegeneracyTooSmall,
    DegenerateState,
    IndexOutOfRange,
    InvalidState,
    ModelError,
    NoSuperfluidSolution,
    NumericalError,
    PairCountOutOfRange,
    PairQuantError,
    TooLarge,
)
from .model import Occupancy, PairingModel, PairType, StrengthConvention, validate  # noqa: E402
from .xstate import CorrelationSet, Source, XState, concurrence, discord, mutual_information  # noqa: E402
from .bcs import BcsSolution, bcs_two_qubit_state, solve_bcs  # noqa: E402
from .projection import pbcs_energy, pbcs_rho, residue  # noqa: E402
from .exact import exact_rho, fock_oracle, solve_exact  # noqa: E402
from .onelevel import one_level_limits, one_level_measures, one_level_rho  # noqa: E402

__all__ = [
    "__version__",
    "PairingModel",
    "PairType",
    "StrengthConvention",
    "Occupancy",
    "validate",
    "XState",
    "CorrelationSet",
    "Source",
    "concurrence",
    "mutual_information",
    "discord",
    "BcsSolution",
    "solve_bcs",
    "bcs_two_qubit_state",
    "residue",
    "pbcs_energy",
    "pbcs_rho",
    "solve_exact",
    "exact_rho",
    "fock_oracle",
    "one_level_rho",
    "one_level_measures",
    "one_level_limits",
    "PairQuantError",
    "ModelError",
    "NumericalError",
    "DegeneracyTooSmall",
    "PairCountOutOfRange",
    "IndexOutOfRange",
    "TooLarge",
    "ConvergenceFailure",
    "NoSuperfluidSolution",
    "DegenerateState",
    "InvalidState",
]
