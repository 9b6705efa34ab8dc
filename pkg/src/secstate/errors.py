"""Exception types raised across the engine."""


class SecStateError(Exception):
    """Base class for all engine errors."""


class ParseError(SecStateError):
    """A topology or scenario document is not parseable."""


class ValidationError(SecStateError):
    """A document or mutation violates a model invariant."""


class UnknownIdError(SecStateError):
    """A referenced network function, domain, entry point or scope does not exist."""


class MetricInputError(SecStateError, ValueError):
    """A metric was called with inputs outside its contract.

    Covers empty control lists, zero capacities, missing contexts,
    out-of-range values, missing neighbor scores and unnormalized weights.
    """


class CapacityExceededError(SecStateError):
    """A UE or entry-point capacity limit would be exceeded."""


class EmptyDomainError(SecStateError):
    """A domain-level score was requested for a domain with no members."""


class NoDomainsError(SecStateError):
    """A network-level operation needs at least one non-empty domain."""


class ScopeMismatchError(SecStateError):
    """An intent was evaluated against a snapshot of a different scope."""


class ExhaustedScenarioError(SecStateError):
    """The simulator has no pending events or scan ticks within the horizon."""


class NotLoadedError(SecStateError):
    """The service has no scenario loaded."""


class UnknownEventKindError(SecStateError):
    """An event kind is not part of the event vocabulary."""
