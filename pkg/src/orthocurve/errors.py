"""Exception hierarchy shared across the package."""


class OrthocurveError(Exception):
    """Base class for all errors raised by this package."""


class PosetError(OrthocurveError, ValueError):
    """A poset failed validation or a query was malformed."""


class InvalidInput(PosetError):
    pass


class CycleDetected(PosetError):
    pass


class NotBounded(PosetError):
    pass


class NotGraded(PosetError):
    pass


class NotComparable(PosetError):
    pass


class NotALattice(PosetError):
    pass


class NotAChain(PosetError):
    pass


class NotMaximalChain(NotAChain):
    pass


class RankTooSmall(PosetError):
    pass


class ZeroPart(OrthocurveError, ValueError):
    """An orthoscheme rank triple had a part equal to zero."""


class SpindleError(OrthocurveError, ValueError):
    pass


class OddLength(SpindleError):
    pass


class DuplicateElements(SpindleError):
    pass


class NotASpindle(SpindleError):
    pass


class UnsupportedType(OrthocurveError, ValueError):
    pass


class NotInGroup(OrthocurveError, KeyError):
    pass


class TooLarge(OrthocurveError, ValueError):
    pass


class UnsupportedFamily(OrthocurveError, ValueError):
    pass


class ParseError(PosetError):
    pass
