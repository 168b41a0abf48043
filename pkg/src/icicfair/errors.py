"""Exception types shared across the package."""


class IcicError(Exception):
    """Base class for domain errors raised by this package."""


class MalformedAllocationError(IcicError, ValueError):
    """An allocation references indices that do not exist in the scenario,
    or pairs an MS with a base station that does not serve it."""


class NoInterfererError(IcicError, ValueError):
    """A crosstalk quantity was requested on a single-cell scenario."""


class GainDomainError(IcicError, ValueError):
    """A gain value is outside the domain required by the operation
    (zero or infinite serving gain, negative gain, and so on)."""


class WeightDomainError(IcicError, ValueError):
    """A matching weight could not be computed from the scenario gains."""


class PlacementInfeasibleError(IcicError, RuntimeError):
    """Rejection sampling for base station placement exhausted its attempt cap."""


class InstanceTooLargeError(IcicError, RuntimeError):
    """The exhaustive search state space exceeds the configured budget."""


class InconsistencyError(IcicError, RuntimeError):
    """A derived quantity failed an exactness check it was required to meet."""
