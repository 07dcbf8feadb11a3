"""Exception hierarchy shared by all isospec modules."""


class IsospecError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(IsospecError, ValueError):
    """A generator or solver parameter is outside its admissible range."""


class InvalidDomainError(IsospecError, ValueError):
    """A polygonal domain violates its invariants (orientation, simplicity, ...)."""


class GenerationFailureError(IsospecError, RuntimeError):
    """The random polygon generator exhausted its candidate-point budget."""


class ResourceLimitError(IsospecError, RuntimeError):
    """A configured size cap (mesh nodes, lattice enumeration) would be exceeded."""


class AssemblyError(IsospecError, ValueError):
    """Finite-element assembly was asked to operate on an unusable mesh."""


class SolverError(IsospecError, RuntimeError):
    """An eigenvalue solve or factorization failed to meet its contract."""


class ShiftOnEigenvalueError(SolverError):
    """An inertia factorization hit a numerically zero pivot (shift at an eigenvalue)."""


class SearchError(IsospecError, RuntimeError):
    """A zero-bracketing scan was exhausted or a certified bracket could not be formed."""


class EvaluationRangeError(IsospecError, ValueError):
    """A special-function argument lies outside the supported range."""
