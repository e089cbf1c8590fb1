"""Exception hierarchy shared by the library and the CLI."""


class CglabError(Exception):
    """Base class for all library errors."""


class ResourceCap(CglabError):
    """A requested computation exceeds a configured size cap."""


class TorsionInput(CglabError):
    """An operation that needs an infinite-order element got a torsion one."""


class AlphabetMismatch(CglabError):
    pass


class LengthMismatch(CglabError):
    pass


class NotConjGeodesic(CglabError):
    pass


class FormulaUnavailable(CglabError):
    pass


class NegativeDifference(CglabError):
    """Cumulative table is not monotone."""


class InsufficientData(CglabError):
    pass


class RangeError(CglabError):
    pass


class CacheCorrupt(CglabError):
    pass


class InvariantViolation(CglabError):
    """An internal consistency check failed; indicates a bug."""
