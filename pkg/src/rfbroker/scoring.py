"""Utility scoring: normalization, individual/aggregate utility, threshold, ranking.

The score of a provider is a weighted sum of per-attribute utilities,

    AU = sum_i wt_i * q_i ** beta_i        with sum_i wt_i = 1,

where q_i is the provider's normalized offering for attribute i, wt_i the
requester's weight and beta_i the requester's sensitivity. beta_i = 0 means
total indifference to that attribute (0 ** 0 is defined as 1 so indifference
holds even for a zero offering). The eligibility threshold EU is the same
formula evaluated at the requester's minimum acceptable values; a provider is
eligible iff AU >= EU.

Floating-point determinism: terms are accumulated in sorted attribute-id
order, so jointly permuting the attribute order of the inputs leaves results
bit-identical. The final sum is clamped to [0,1]: the weight-sum tolerance
admits weight vectors whose float sum lies a few ulp above 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .catalog import ProviderProfile, QoSAttribute, QosMode, Tendency
from .errors import (
    DegenerateInputError,
    DomainError,
    KeyMismatchError,
    UnknownAttributeError,
    ValidationError,
)

DEFAULT_WEIGHT_SUM_TOLERANCE = 1e-9


def _check_weights(weights: Mapping[str, float], tolerance: float) -> list[str]:
    problems = []
    if not weights:
        problems.append("weights: at least one attribute is required")
        return problems
    for attr in sorted(weights):
        w = weights[attr]
        if not isinstance(w, (int, float)) or isinstance(w, bool) or not math.isfinite(w):
            problems.append(f"weights[{attr}]: must be a finite number, got {w!r}")
        elif not (0.0 <= w <= 1.0):
            problems.append(f"weights[{attr}]: must be in [0,1], got {w!r}")
    if not problems:
        total = 0.0
        for attr in sorted(weights):
            total += weights[attr]
        if abs(total - 1.0) > tolerance:
            problems.append(f"weights: sum {total!r} != 1 (tolerance {tolerance:g})")
    return problems


def _check_sensitivities(sensitivities: Mapping[str, float]) -> list[str]:
    problems = []
    if not sensitivities:
        problems.append("sensitivities: at least one attribute is required")
        return problems
    for attr in sorted(sensitivities):
        b = sensitivities[attr]
        if not isinstance(b, (int, float)) or isinstance(b, bool) or not math.isfinite(b):
            problems.append(f"sensitivities[{attr}]: must be a finite number, got {b!r}")
        elif b < 0:
            problems.append(f"sensitivities[{attr}]: must be >= 0, got {b!r}")
    return problems


def _check_minima(minima: Mapping[str, float]) -> list[str]:
    problems = []
    if not minima:
        problems.append("minima: at least one attribute is required")
        return problems
    for attr in sorted(minima):
        x = minima[attr]
        if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
            problems.append(f"minima[{attr}]: must be a finite number, got {x!r}")
        elif not (0.0 <= x <= 1.0):
            problems.append(f"minima[{attr}]: must be in [0,1], got {x!r}")
    return problems


@dataclass(frozen=True)
class WeightVector:
    """Per-attribute importance weights; each in [0,1], summing to 1."""

    weights: Mapping[str, float]
    tolerance: float = field(default=DEFAULT_WEIGHT_SUM_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        problems = _check_weights(self.weights, self.tolerance)
        if problems:
            raise ValidationError(problems)

    def keys(self) -> frozenset[str]:
        return frozenset(self.weights)


@dataclass(frozen=True)
class SensitivityVector:
    """Per-attribute sensitivity exponents; finite and non-negative."""

    sensitivities: Mapping[str, float]

    def __post_init__(self):
        problems = _check_sensitivities(self.sensitivities)
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class MinimumRequirements:
    """Normalized minimum acceptable value per attribute, each in [0,1]."""

    minima: Mapping[str, float]

    def __post_init__(self):
        problems = _check_minima(self.minima)
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class NormalizedOffer:
    provider_id: str
    values: Mapping[str, float]

    def __post_init__(self):
        for attr in sorted(self.values):
            v = self.values[attr]
            if not isinstance(v, (int, float)) or isinstance(v, bool) \
                    or not (0.0 <= v <= 1.0):
                raise DomainError(
                    f"offer {self.provider_id}: {attr} value {v!r} outside [0,1]")


@dataclass(frozen=True)
class RankingEntry:
    provider_id: str
    aggregate_utility: float
    utilities: Mapping[str, float]
    eligible: bool


@dataclass(frozen=True)
class RankingReport:
    """Scored providers sorted best-first, with the eligibility threshold.

    entries are ordered by aggregate utility descending, ties broken by
    provider_id ascending; eligible is aggregate_utility >= threshold. The
    request's weights, sensitivities and minima are echoed for auditability.
    """

    threshold: float
    entries: tuple[RankingEntry, ...]
    weights: WeightVector
    sensitivities: SensitivityVector
    minima: MinimumRequirements


def individual_utility(p: float, beta: float) -> float:
    """p ** beta with 0 ** 0 := 1; p in [0,1], beta >= 0 finite."""
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not (0.0 <= p <= 1.0):
        raise DomainError(f"normalized value must lie in [0,1], got {p!r}")
    if isinstance(beta, bool) or not isinstance(beta, (int, float)) \
            or not math.isfinite(beta) or beta < 0:
        raise DomainError(f"sensitivity must be finite and >= 0, got {beta!r}")
    return float(p) ** float(beta)


def _require_same_keys(offer_keys, weight_keys, sensitivity_keys) -> None:
    if set(offer_keys) != set(weight_keys) or set(weight_keys) != set(sensitivity_keys):
        raise KeyMismatchError(
            "attribute key sets differ: "
            f"offer={sorted(offer_keys)} weights={sorted(weight_keys)} "
            f"sensitivities={sorted(sensitivity_keys)}")


def utility_breakdown(offer: NormalizedOffer, weights: WeightVector,
                      sensitivities: SensitivityVector) -> dict[str, float]:
    """Per-attribute individual utilities for one offer."""
    _require_same_keys(offer.values, weights.weights, sensitivities.sensitivities)
    return {attr: individual_utility(offer.values[attr], sensitivities.sensitivities[attr])
            for attr in sorted(offer.values)}


def aggregate_utility(offer: NormalizedOffer, weights: WeightVector,
                      sensitivities: SensitivityVector) -> float:
    _require_same_keys(offer.values, weights.weights, sensitivities.sensitivities)
    total = 0.0
    for attr in sorted(offer.values):
        total += weights.weights[attr] * individual_utility(
            offer.values[attr], sensitivities.sensitivities[attr])
    return min(max(total, 0.0), 1.0)


def threshold_utility(minima: MinimumRequirements, weights: WeightVector,
                      sensitivities: SensitivityVector) -> float:
    """Eligibility cutoff: the aggregate utility of the minima themselves.

    Shares the aggregate_utility code path, so the identity
    threshold_utility(m, w, b) == aggregate_utility(m-as-offer, w, b) is exact.
    """
    return aggregate_utility(NormalizedOffer("<minimum>", dict(minima.minima)),
                             weights, sensitivities)


def normalize_offers(providers: list[ProviderProfile],
                     registry: Mapping[str, QoSAttribute]) -> list[NormalizedOffer]:
    """Bring every offering into [0,1], higher-is-better.

    Normalized mode passes values through after range validation. Raw mode
    first replaces each negative-tendency value v with 1/v, then min-max
    scales each attribute across the given provider set; when every provider
    offers the same value the attribute cannot discriminate and everyone
    gets 1. Raw-mode results are therefore relative to this cohort.
    """
    if len(providers) < 1:
        raise DegenerateInputError("normalization needs at least one provider")
    modes = {p.qos_mode for p in providers}
    if len(modes) > 1:
        raise DomainError("providers mix normalized and raw QoS modes")
    mode = modes.pop()

    if mode is QosMode.NORMALIZED:
        offers = []
        for p in providers:
            for attr, v in p.qos_offering.items():
                if not (0.0 <= v <= 1.0):
                    raise DomainError(
                        f"provider {p.provider_id}: {attr} value {v!r} outside [0,1]")
            offers.append(NormalizedOffer(p.provider_id, dict(p.qos_offering)))
        return offers

    # Raw mode: reciprocal for negative tendency, then per-attribute min-max.
    transformed: dict[str, dict[str, float]] = {p.provider_id: {} for p in providers}
    all_attrs: set[str] = set()
    for p in providers:
        for attr, v in p.qos_offering.items():
            attribute = registry.get(attr)
            if attribute is None:
                raise UnknownAttributeError(
                    [f"provider {p.provider_id}: unregistered attribute '{attr}'"])
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(
                    f"provider {p.provider_id}: {attr} raw value {v!r} must be finite and >= 0")
            if attribute.tendency is Tendency.NEGATIVE:
                if v == 0.0:
                    raise DomainError(
                        f"provider {p.provider_id}: {attr} raw value must be strictly "
                        "positive for a negative-tendency attribute")
                v = 1.0 / v
            transformed[p.provider_id][attr] = v
            all_attrs.add(attr)

    spans: dict[str, tuple[float, float]] = {}
    for attr in all_attrs:
        values = [vals[attr] for vals in transformed.values() if attr in vals]
        spans[attr] = (min(values), max(values))

    offers = []
    for p in providers:
        normalized = {}
        for attr, v in transformed[p.provider_id].items():
            vmin, vmax = spans[attr]
            if vmax == vmin:
                normalized[attr] = 1.0  # indistinguishable cohort: penalize nobody
            else:
                normalized[attr] = (v - vmin) / (vmax - vmin)
        offers.append(NormalizedOffer(p.provider_id, normalized))
    return offers


def rank(offers: list[NormalizedOffer], minima: MinimumRequirements,
         weights: WeightVector, sensitivities: SensitivityVector) -> RankingReport:
    """Score every offer, sort best-first, and flag eligibility against EU."""
    if len(offers) < 1:
        raise DegenerateInputError("ranking needs at least one offer")
    threshold = threshold_utility(minima, weights, sensitivities)
    entries = []
    for offer in offers:
        au = aggregate_utility(offer, weights, sensitivities)
        entries.append(RankingEntry(
            provider_id=offer.provider_id,
            aggregate_utility=au,
            utilities=utility_breakdown(offer, weights, sensitivities),
            eligible=au >= threshold,
        ))
    entries.sort(key=lambda e: (-e.aggregate_utility, e.provider_id))
    return RankingReport(threshold, tuple(entries), weights, sensitivities, minima)


def validate_request(weights: Mapping[str, float],
                     sensitivities: Mapping[str, float],
                     minima: Mapping[str, float],
                     tolerance: float = DEFAULT_WEIGHT_SUM_TOLERANCE,
                     ) -> tuple[WeightVector, SensitivityVector, MinimumRequirements]:
    """Validate the three request vectors together, reporting every violation."""
    problems = _check_weights(weights, tolerance)
    problems += _check_sensitivities(sensitivities)
    problems += _check_minima(minima)
    key_sets = {"weights": set(weights), "sensitivities": set(sensitivities),
                "minima": set(minima)}
    if not (key_sets["weights"] == key_sets["sensitivities"] == key_sets["minima"]):
        union = key_sets["weights"] | key_sets["sensitivities"] | key_sets["minima"]
        for name, keys in key_sets.items():
            missing = sorted(union - keys)
            if missing:
                problems.append(f"{name}: missing attributes {missing}")
    if problems:
        raise ValidationError(problems)
    return (WeightVector(dict(weights), tolerance),
            SensitivityVector(dict(sensitivities)),
            MinimumRequirements(dict(minima)))
