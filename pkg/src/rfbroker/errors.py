"""Exception hierarchy for the broker.

Every error carries a short machine-readable ``code`` (used verbatim in the
HTTP error envelope) and an optional list of detail strings. Validation-style
errors accumulate *all* violations found, not just the first.
"""

from __future__ import annotations

from typing import Sequence


class BrokerError(Exception):
    code = "broker_error"

    def __init__(self, message: str, details: Sequence[str] | None = None):
        super().__init__(message)
        self.details: list[str] = list(details) if details else []


class SchemaError(BrokerError):
    """Document does not conform to the expected JSON shape."""

    code = "schema_error"

    def __init__(self, violations: Sequence[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        super().__init__("; ".join(violations), details=violations)

    @property
    def violations(self) -> list[str]:
        return self.details


class ValidationError(BrokerError):
    """Well-formed document breaks an invariant (range, uniqueness, reference).

    ``violations`` lists every breach found, each naming the offending field
    path (and provider where applicable).
    """

    code = "validation_error"

    def __init__(self, violations: Sequence[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        super().__init__("; ".join(violations), details=violations)

    @property
    def violations(self) -> list[str]:
        return self.details


class UnknownAttributeError(ValidationError):
    """A QoS attribute id is referenced but not registered."""

    code = "unknown_attribute"


class StorageError(BrokerError):
    code = "storage_error"


class NotFoundError(BrokerError):
    code = "not_found"


class DomainError(BrokerError):
    """Numeric argument outside its mathematical domain."""

    code = "domain_error"


class KeyMismatchError(BrokerError):
    """Offer / weight / sensitivity / minimum key sets are not identical."""

    code = "key_mismatch"


class DegenerateInputError(BrokerError):
    code = "degenerate_input"


class UnknownProviderError(NotFoundError):
    code = "unknown_provider"


class UnknownSlaError(NotFoundError):
    code = "unknown_sla"


class UnknownMonitorError(NotFoundError):
    code = "unknown_monitor"


class IllegalTransitionError(BrokerError):
    """Action not permitted from the SLA's current state."""

    code = "illegal_transition"


class WrongActorError(BrokerError):
    """The author of the pending offer tried to answer it."""

    code = "wrong_actor"


class SlaNotActiveError(BrokerError):
    """Violation reported against an SLA that is not in the accepted state."""

    code = "sla_not_active"


class NotAViolationError(BrokerError):
    """Reported observation actually satisfies the SLA term."""

    code = "not_a_violation"
