"""SLA negotiation and third-party violation intake.

Negotiation is a two-party alternating-offer machine. The user authors the
initial proposal; the party that did NOT author the pending offer may accept,
reject, or counter it. A counter swaps roles and carries new terms. Accepted,
rejected, and expired are terminal. Expiry is an explicit administrative
operation, not a wall-clock timer.

Transition table for respond(state, offer_author, actor, action)::

    proposed | countered, actor != offer_author:
        accept  -> accepted
        reject  -> rejected
        counter -> countered (offer_author := actor, terms := new terms)
    proposed | countered, actor == offer_author:   WrongActor
    accepted | rejected | expired, any actor/action: IllegalTransition

expire(): proposed | countered -> expired; terminal states: IllegalTransition.

Every transition appends one history entry; history snapshots are immutable
tuples and timestamps are strictly increasing per SLA. Violation reports are
accepted only from registered monitors, only against accepted SLAs, and only
when the observation actually fails the term; stored reports are append-only
and a notification record is queued for both parties (a log entry here, not
real delivery).
"""

from __future__ import annotations

import itertools
import logging
import math
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Any, Callable, Collection, Mapping, Sequence

from .catalog import QoSAttribute
from .errors import (
    IllegalTransitionError,
    NotAViolationError,
    SlaNotActiveError,
    UnknownAttributeError,
    UnknownMonitorError,
    UnknownProviderError,
    UnknownSlaError,
    ValidationError,
    WrongActorError,
)

logger = logging.getLogger(__name__)


class SlaState(str, Enum):
    PROPOSED = "proposed"
    COUNTERED = "countered"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    EXPIRED = "expired"


TERMINAL_STATES = frozenset({SlaState.ACCEPTED, SlaState.REJECTED, SlaState.EXPIRED})


class Actor(str, Enum):
    USER = "user"
    PROVIDER = "provider"


class Action(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    COUNTER = "counter"


class Comparator(str, Enum):
    GTE = ">="
    LTE = "<="


@dataclass(frozen=True)
class SlaTerm:
    attribute_id: str
    comparator: Comparator
    bound: float
    unit: str = ""

    def satisfied_by(self, observed: float) -> bool:
        if self.comparator is Comparator.GTE:
            return observed >= self.bound
        return observed <= self.bound


@dataclass(frozen=True)
class HistoryEntry:
    seq: int
    timestamp: datetime
    actor: str  # "user" | "provider" | "admin"
    action: str  # "propose" | "accept" | "reject" | "counter" | "expire"
    terms: tuple[SlaTerm, ...]


@dataclass(frozen=True)
class SlaDraft:
    sla_id: str
    user_id: str
    provider_id: str
    terms: tuple[SlaTerm, ...]
    state: SlaState
    offer_author: Actor
    history: tuple[HistoryEntry, ...]

    def term_for(self, attribute_id: str) -> SlaTerm | None:
        for term in self.terms:
            if term.attribute_id == attribute_id:
                return term
        return None


@dataclass(frozen=True)
class MonitorRegistration:
    monitor_id: str
    endpoint: str
    token: str
    registered_at: datetime


@dataclass(frozen=True)
class ViolationReport:
    report_id: str
    sla_id: str
    monitor_id: str
    attribute_id: str
    observed: float
    bound: float
    comparator: Comparator
    observed_at: datetime


@dataclass(frozen=True)
class NotificationRecord:
    sla_id: str
    report_id: str
    party: str
    created_at: datetime


def next_state(state: SlaState, offer_author: Actor,
               actor: Actor, action: Action) -> SlaState:
    """Pure transition function; raises instead of returning on illegal input."""
    if state in TERMINAL_STATES:
        raise IllegalTransitionError(
            f"SLA in terminal state '{state.value}' admits no transitions")
    if actor == offer_author:
        raise WrongActorError(
            f"{actor.value} authored the pending offer and cannot answer it")
    if action is Action.ACCEPT:
        return SlaState.ACCEPTED
    if action is Action.REJECT:
        return SlaState.REJECTED
    return SlaState.COUNTERED


def parse_terms(raw: Any, registry: Mapping[str, QoSAttribute] | None = None,
                path: str = "terms") -> tuple[SlaTerm, ...]:
    """Parse the JSON term list; raises with every problem found."""
    if not isinstance(raw, list):
        raise ValidationError([f"{path}: must be a list"])
    problems: list[str] = []
    unknown: list[str] = []
    terms: list[SlaTerm] = []
    for i, entry in enumerate(raw):
        tpath = f"{path}[{i}]"
        if not isinstance(entry, Mapping):
            problems.append(f"{tpath}: must be an object")
            continue
        allowed = {"attribute_id", "comparator", "bound", "unit"}
        extra = set(entry) - allowed
        if extra:
            problems.append(f"{tpath}: unknown fields {sorted(extra)}")
            continue
        attr = entry.get("attribute_id")
        comparator = entry.get("comparator")
        bound = entry.get("bound")
        unit = entry.get("unit", "")
        if not isinstance(attr, str) or not attr.strip():
            problems.append(f"{tpath}.attribute_id: must be a non-empty string")
            continue
        attr = attr.strip()
        if comparator not in (Comparator.GTE.value, Comparator.LTE.value):
            problems.append(f"{tpath}.comparator: must be '>=' or '<=', got {comparator!r}")
            continue
        if not isinstance(bound, (int, float)) or isinstance(bound, bool) \
                or not math.isfinite(bound):
            problems.append(f"{tpath}.bound: must be a finite number, got {bound!r}")
            continue
        if not isinstance(unit, str):
            problems.append(f"{tpath}.unit: must be a string")
            continue
        if registry is not None and attr not in registry:
            unknown.append(f"{tpath}.attribute_id: unregistered attribute '{attr}'")
            continue
        terms.append(SlaTerm(attr, Comparator(comparator), float(bound), unit))
    if problems:
        raise ValidationError(problems + unknown)
    if unknown:
        raise UnknownAttributeError(unknown)
    return tuple(terms)


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class SlaManager:
    """Holds drafts, applies negotiation transitions, records violations.

    A single lock serializes mutations, giving every SLA a total order of
    transitions; reads return immutable snapshots.
    """

    def __init__(self, clock: Callable[[], datetime] = _utcnow):
        self._clock = clock
        self._lock = threading.Lock()
        self._drafts: dict[str, SlaDraft] = {}
        self._monitors: dict[str, MonitorRegistration] = {}
        self._violations: dict[str, list[ViolationReport]] = {}
        self._notifications: list[NotificationRecord] = []
        self._seq = itertools.count(1)
        self._last_ts: dict[str, datetime] = {}

    def _next_ts(self, sla_id: str) -> datetime:
        now = self._clock()
        last = self._last_ts.get(sla_id)
        if last is not None and now <= last:
            now = last + timedelta(microseconds=1)
        self._last_ts[sla_id] = now
        return now

    # -- negotiation -------------------------------------------------------

    def propose(self, user_id: str, provider_id: str,
                terms: Sequence[SlaTerm], *,
                registry: Mapping[str, QoSAttribute] | None = None,
                provider_ids: Collection[str] | None = None) -> SlaDraft:
        """Open a negotiation; the draft starts in the proposed state.

        When a registry / provider id collection is supplied, term attributes
        and the provider are checked against them.
        """
        if not terms:
            raise ValidationError(["terms: must not be empty"])
        if registry is not None:
            unknown = [t.attribute_id for t in terms if t.attribute_id not in registry]
            if unknown:
                raise UnknownAttributeError(
                    [f"terms: unregistered attribute '{a}'" for a in unknown])
        if provider_ids is not None and provider_id not in provider_ids:
            raise UnknownProviderError(f"unknown provider '{provider_id}'")

        with self._lock:
            sla_id = f"sla-{next(self._seq):06d}"
            entry = HistoryEntry(1, self._next_ts(sla_id), Actor.USER.value,
                                 "propose", tuple(terms))
            draft = SlaDraft(sla_id, user_id, provider_id, tuple(terms),
                             SlaState.PROPOSED, Actor.USER, (entry,))
            self._drafts[sla_id] = draft
            self._violations[sla_id] = []
            return draft

    def get(self, sla_id: str) -> SlaDraft:
        draft = self._drafts.get(sla_id)
        if draft is None:
            raise UnknownSlaError(f"unknown SLA '{sla_id}'")
        return draft

    def respond(self, sla_id: str, actor: Actor, action: Action,
                terms: Sequence[SlaTerm] | None = None) -> SlaDraft:
        with self._lock:
            draft = self.get(sla_id)
            state = next_state(draft.state, draft.offer_author, actor, action)
            if action is Action.COUNTER:
                if not terms:
                    raise ValidationError(["counter terms: must not be empty"])
                new_terms = tuple(terms)
                offer_author = actor
            else:
                if terms:
                    raise ValidationError([f"terms: not allowed with action '{action.value}'"])
                new_terms = draft.terms
                offer_author = draft.offer_author
            entry = HistoryEntry(len(draft.history) + 1, self._next_ts(sla_id),
                                 actor.value, action.value, new_terms)
            updated = replace(draft, state=state, terms=new_terms,
                              offer_author=offer_author,
                              history=draft.history + (entry,))
            self._drafts[sla_id] = updated
            return updated

    def expire(self, sla_id: str) -> SlaDraft:
        """Administrative expiry of a still-open negotiation."""
        with self._lock:
            draft = self.get(sla_id)
            if draft.state in TERMINAL_STATES:
                raise IllegalTransitionError(
                    f"SLA in terminal state '{draft.state.value}' admits no transitions")
            entry = HistoryEntry(len(draft.history) + 1, self._next_ts(sla_id),
                                 "admin", "expire", draft.terms)
            updated = replace(draft, state=SlaState.EXPIRED,
                              history=draft.history + (entry,))
            self._drafts[sla_id] = updated
            return updated

    # -- monitoring --------------------------------------------------------

    def register_monitor(self, monitor_id: str,
                         descriptor: Mapping[str, Any]) -> MonitorRegistration:
        if not monitor_id or not isinstance(monitor_id, str):
            raise ValidationError(["monitor_id: must be a non-empty string"])
        endpoint = descriptor.get("endpoint", "")
        token = descriptor.get("token", "")
        if not isinstance(endpoint, str) or not isinstance(token, str) or not token:
            raise ValidationError(
                ["monitor descriptor: requires string 'endpoint' and non-empty 'token'"])
        registration = MonitorRegistration(monitor_id, endpoint, token, self._clock())
        with self._lock:
            self._monitors[monitor_id] = registration
        return registration

    def monitor(self, monitor_id: str) -> MonitorRegistration:
        registration = self._monitors.get(monitor_id)
        if registration is None:
            raise UnknownMonitorError(f"unknown monitor '{monitor_id}'")
        return registration

    def submit_violation(self, *, sla_id: str, monitor_id: str, attribute_id: str,
                         observed: float, observed_at: datetime | None = None,
                         bound: float | None = None) -> ViolationReport:
        """Record a breach observed by a registered third-party monitor.

        The accepted term's bound is authoritative; a report carrying a
        different bound is rejected rather than silently renormalized.
        """
        self.monitor(monitor_id)
        if isinstance(observed, bool) or not isinstance(observed, (int, float)) \
                or not math.isfinite(observed):
            raise ValidationError([f"observed: must be a finite number, got {observed!r}"])
        with self._lock:
            draft = self.get(sla_id)
            if draft.state is not SlaState.ACCEPTED:
                raise SlaNotActiveError(
                    f"SLA '{sla_id}' is '{draft.state.value}', not accepted")
            term = draft.term_for(attribute_id)
            if term is None:
                raise UnknownAttributeError(
                    [f"SLA '{sla_id}' has no term for attribute '{attribute_id}'"])
            if bound is not None and float(bound) != term.bound:
                raise ValidationError(
                    [f"bound: {bound!r} does not match the accepted term's bound {term.bound!r}"])
            if term.satisfied_by(float(observed)):
                raise NotAViolationError(
                    f"observed {observed!r} satisfies {attribute_id} "
                    f"{term.comparator.value} {term.bound!r}")
            report = ViolationReport(
                report_id=f"vr-{next(self._seq):06d}",
                sla_id=sla_id,
                monitor_id=monitor_id,
                attribute_id=attribute_id,
                observed=float(observed),
                bound=term.bound,
                comparator=term.comparator,
                observed_at=observed_at or self._clock(),
            )
            self._violations[sla_id].append(report)
            created = self._clock()
            for party in (draft.user_id, draft.provider_id):
                self._notifications.append(
                    NotificationRecord(sla_id, report.report_id, party, created))
                logger.info("SLA violation %s on %s: notified %s",
                            report.report_id, sla_id, party)
            return report

    def violations_for(self, sla_id: str) -> tuple[ViolationReport, ...]:
        self.get(sla_id)
        reports = list(self._violations.get(sla_id, ()))
        reports.sort(key=lambda r: (r.observed_at, r.report_id))
        return tuple(reports)

    def notifications(self) -> tuple[NotificationRecord, ...]:
        return tuple(self._notifications)


def sla_to_dict(draft: SlaDraft,
                violations: Sequence[ViolationReport] = ()) -> dict[str, Any]:
    def term_dict(t: SlaTerm) -> dict[str, Any]:
        return {"attribute_id": t.attribute_id, "comparator": t.comparator.value,
                "bound": t.bound, "unit": t.unit}

    return {
        "sla_id": draft.sla_id,
        "user_id": draft.user_id,
        "provider_id": draft.provider_id,
        "state": draft.state.value,
        "offer_author": draft.offer_author.value,
        "terms": [term_dict(t) for t in draft.terms],
        "history": [
            {"seq": h.seq, "timestamp": h.timestamp.isoformat(),
             "actor": h.actor, "action": h.action,
             "terms": [term_dict(t) for t in h.terms]}
            for h in draft.history
        ],
        "violations": [
            {"report_id": v.report_id, "monitor_id": v.monitor_id,
             "attribute_id": v.attribute_id, "observed": v.observed,
             "bound": v.bound, "comparator": v.comparator.value,
             "observed_at": v.observed_at.isoformat()}
            for v in violations
        ],
    }
