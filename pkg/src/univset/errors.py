"""Exception types shared across the package."""


class UnivsetError(Exception):
    """Base class for every library-specific error."""


class NotAGroup(UnivsetError):
    """A supplied composition table violates the group axioms."""


class OverflowingOrder(UnivsetError):
    """Requested group exceeds the configured order / degree cap."""


class GroupMismatch(UnivsetError):
    """Operands belong to different groups."""


class EmptySet(UnivsetError):
    """An operation that needs a nonempty subset received an empty one."""


class NotPrime(UnivsetError):
    """Field characteristic is not prime."""


class FieldTooLarge(UnivsetError):
    """Field size p**m exceeds the configured limit."""


class ZeroElement(UnivsetError):
    """Discrete log of the zero element was requested."""


class DegreeTooSmall(UnivsetError):
    """Field extension degree is too small for the requested operation."""


class RetryBudgetExhausted(UnivsetError):
    """A Las Vegas construction failed every resample attempt."""


class BadTargets(UnivsetError):
    """Tuple size targets violate the product constraint or range."""


class SubgroupTooSmall(UnivsetError):
    """Lifting subgroup is smaller than |G|**(1-1/k)."""


class NoValidIndex(UnivsetError):
    """No target index is compatible with the lift arithmetic."""


class DegreeCapExceeded(UnivsetError):
    """Symmetric-group degree exceeds the configured cap."""


class UnverifiedTuple(UnivsetError):
    """A tuple without a passing verification verdict was used."""


class InvalidSeries(UnivsetError):
    """A normal series failed validation."""


class XOutOfRange(UnivsetError):
    """Requested non-doubling size x is outside (1, |G|]."""


class NoKnownSeries(UnivsetError):
    """No builtin normal series is available for this group."""


class TranslatorNotFound(UnivsetError):
    """No group element translates a block into the universal set."""


class ExactInfeasible(UnivsetError):
    """Exact verification would exceed the step budget; choose sampled."""


class BudgetExceeded(UnivsetError):
    """Path enumeration hit its budget; ``partial_count`` is a lower bound."""

    def __init__(self, message: str, partial_count: int = 0):
        super().__init__(message)
        self.partial_count = partial_count
