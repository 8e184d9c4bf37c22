"""Exception hierarchy shared by all solvers."""


class PairQuantError(Exception):
    """Base class for every error raised by the package."""


class ModelError(PairQuantError, ValueError):
    """Invalid model or run parameters."""


class DegeneracyTooSmall(ModelError):
    """The requested pair type needs more modes than the level provides."""


class PairCountOutOfRange(ModelError):
    """Pair number outside the range allowed by the degeneracies."""


class IndexOutOfRange(ModelError):
    """Structurally impossible residue request (excluding more modes than exist)."""


class TooLarge(ModelError):
    """Fock-space oracle refused a configuration space above its size bound."""


class NumericalError(PairQuantError, ArithmeticError):
    """A numerical procedure did not produce a usable result."""


class ConvergenceFailure(NumericalError):
    pass


class NoSuperfluidSolution(NumericalError):
    """Gap equations collapsed onto the normal (zero gap) solution."""


class DegenerateState(NumericalError):
    """Projected density matrix has vanishing trace."""


class InvalidState(NumericalError):
    """Density matrix violates trace, positivity or X-pattern constraints."""
