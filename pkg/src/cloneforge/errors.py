"""Exception hierarchy shared by all cloneforge modules."""


class CloneError(Exception):
    """Base class for all cloneforge errors."""


class LengthMismatch(CloneError):
    pass


class ValueOutOfRange(CloneError):
    pass


class BadArity(CloneError):
    pass


class BadIndex(CloneError):
    pass


class ArityMismatch(CloneError):
    pass


class DomainMismatch(CloneError):
    pass


class BadMap(CloneError):
    pass


class DomainTooLarge(CloneError):
    pass


class BadParams(CloneError):
    pass


class CapExceeded(CloneError):
    pass


class EmptySet(CloneError):
    pass


class PreconditionFailed(CloneError):
    pass


class IncompleteList(CloneError):
    pass


class NotMinority(CloneError):
    pass


class NotMinorsTrivial(CloneError):
    pass


class SwierczkowskiViolation(CloneError):
    """Arity >= 4 minors-trivial operation with inconsistent projection targets.

    Impossible for genuine minors-trivial inputs; kept as an internal
    consistency alarm.
    """


class NotConservative(CloneError):
    pass


class WrongShape(CloneError):
    pass


class WrongType(CloneError):
    pass


class IdempotentInput(CloneError):
    pass


class Inconclusive(CloneError):
    pass


class ParseError(CloneError):
    pass


class ValidationError(CloneError):
    pass
