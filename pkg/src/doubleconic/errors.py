"""Exception hierarchy for the doubleconic package.

The split matters to the service and CLI layers: PreconditionError and its
subclasses are user errors (CLI exit 2, HTTP 400), InadmissibleSurfaceError
flags a bad input surface (CLI exit 3, HTTP 422), anything else is a bug.
"""


class DoubleConicError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(DoubleConicError):
    """An operation was called with inputs violating its preconditions."""


class DimensionError(PreconditionError):
    """Divisor class length does not match the lattice rank."""


class InvalidInputError(PreconditionError):
    """Malformed input object (zero form, zero vector, bad arity, ...)."""


class NonIntegralClassError(PreconditionError):
    """-(4/d)K is not an integral class for this degree."""


class NonIntegralGenusError(DoubleConicError):
    """D*D + K*D came out odd, so the adjunction genus is not an integer."""


class DegenerateConicError(PreconditionError):
    """A smooth conic was required but the matrix is singular."""


class DegenerateFibreError(PreconditionError):
    """The fibre over the requested base point is degenerate.

    Carries the base point and the discriminant value as a witness.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonReducedCoverError(PreconditionError):
    """The branch form of a double cover is identically zero."""


class NoSmoothStartError(PreconditionError):
    """The seed point lies on degenerate fibres of both fibrations."""


class VacuousInputError(PreconditionError):
    """An operation that needs a nonempty input received an empty one."""


class InadmissibleSurfaceError(DoubleConicError):
    """The surface fails the smoothness proxy; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
