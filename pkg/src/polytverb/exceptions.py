"""Exception hierarchy shared by all modules."""


class PolytverbError(Exception):
    """Base class for every error raised by the package."""


class GroupMismatchError(PolytverbError, ValueError):
    """A group element or value map does not belong to the given group."""


class InvalidInputError(PolytverbError, ValueError):
    """Malformed point cloud, decomposition, frame or problem kind."""


class WrongCountError(PolytverbError, ValueError):
    """The point cloud does not have the point count the problem requires."""


class PreconditionError(PolytverbError):
    """A map table violates the class-barycenter-zero hypothesis."""


class EmptyPartError(PolytverbError):
    """Grouping a join point produced a part with (numerically) zero weight."""


class DegenerateError(PolytverbError):
    """A zero was found but the leading coefficients vanished as well."""


class SolverFailedError(PolytverbError):
    """The pivoting solver ran out of iterations without reaching a zero."""


class EnumerationBoundError(PolytverbError):
    """An exhaustive oracle run would exceed its labeling budget."""


class MalformedFileError(PolytverbError, ValueError):
    """An instance, result or frame file does not follow its schema."""
