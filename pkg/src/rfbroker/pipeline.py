"""Selection pipeline shared by the CLI and the HTTP service.

Request documents are JSON::

    {"functional": {...}, "weights": {...}, "sensitivities": {...}, "minima": {...}}

"functional" and a top-level "description" are optional. The pipeline runs
discovery, normalizes the survivors, projects their offerings onto the scored
attribute set, and ranks. Both front ends serialize the resulting report with
the same code, so identical inputs yield identical report bodies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .catalog import Catalog, QosMode
from .errors import KeyMismatchError, ValidationError
from .matching import FunctionalRequirements, discover, requirements_from_dict
from .scoring import (
    DEFAULT_WEIGHT_SUM_TOLERANCE,
    MinimumRequirements,
    NormalizedOffer,
    RankingReport,
    SensitivityVector,
    WeightVector,
    normalize_offers,
    rank,
    threshold_utility,
    validate_request,
)

STATUS_OK = "ok"
STATUS_NO_MATCH = "no_match"


@dataclass(frozen=True)
class SelectionRequest:
    functional: FunctionalRequirements
    weights: WeightVector
    sensitivities: SensitivityVector
    minima: MinimumRequirements


def parse_selection_request(doc: Mapping[str, Any],
                            tolerance: float = DEFAULT_WEIGHT_SUM_TOLERANCE,
                            ) -> SelectionRequest:
    """Parse and validate a request document, accumulating every violation."""
    if not isinstance(doc, Mapping):
        raise ValidationError(["request: must be a JSON object"])
    problems: list[str] = []
    allowed = {"functional", "weights", "sensitivities", "minima", "description"}
    for key in doc:
        if key not in allowed:
            problems.append(f"request.{key}: unknown field")

    functional = FunctionalRequirements()
    try:
        functional = requirements_from_dict(doc.get("functional"))
    except ValidationError as exc:
        problems += exc.violations

    vectors: dict[str, Mapping[str, float]] = {}
    for name in ("weights", "sensitivities", "minima"):
        value = doc.get(name)
        if not isinstance(value, Mapping):
            problems.append(f"{name}: must be an object of attribute -> number")
        else:
            vectors[name] = value

    weights = sensitivities = minima = None
    if len(vectors) == 3:
        try:
            weights, sensitivities, minima = validate_request(
                vectors["weights"], vectors["sensitivities"], vectors["minima"],
                tolerance=tolerance)
        except ValidationError as exc:
            problems += exc.violations

    if problems or weights is None:
        raise ValidationError(problems)

    # Every scored attribute must be present in a provider's offering, so the
    # scored set always rides along as a matching requirement.
    functional = FunctionalRequirements(
        software=functional.software,
        render_engines=functional.render_engines,
        node_config_min=functional.node_config_min,
        required_attributes=functional.required_attributes | weights.keys(),
    )
    return SelectionRequest(functional, weights, sensitivities, minima)


def run_selection(catalog: Catalog,
                  request: SelectionRequest) -> tuple[str, RankingReport]:
    """discover -> normalize -> project -> rank. Returns (status, report)."""
    survivors = discover(request.functional, catalog.providers)
    if not survivors:
        report = RankingReport(
            threshold=threshold_utility(request.minima, request.weights,
                                        request.sensitivities),
            entries=(),
            weights=request.weights,
            sensitivities=request.sensitivities,
            minima=request.minima,
        )
        return STATUS_NO_MATCH, report

    offers = normalize_offers(survivors, catalog.registry())
    scored_attrs = sorted(request.weights.weights)
    projected = []
    for offer in offers:
        missing = [a for a in scored_attrs if a not in offer.values]
        if missing:  # unreachable via discover, but fail loudly if bypassed
            raise KeyMismatchError(
                f"offer {offer.provider_id} lacks scored attributes {missing}")
        projected.append(NormalizedOffer(
            offer.provider_id, {a: offer.values[a] for a in scored_attrs}))

    report = rank(projected, request.minima, request.weights, request.sensitivities)
    return STATUS_OK, report


def report_to_dict(report: RankingReport, qos_mode: QosMode) -> dict[str, Any]:
    """Canonical report body; the single serialization used by CLI and service."""
    return {
        "threshold": report.threshold,
        "normalization": {
            "mode": qos_mode.value,
            "cohort_relative": qos_mode is QosMode.RAW,
        },
        "entries": [
            {
                "provider_id": e.provider_id,
                "aggregate_utility": e.aggregate_utility,
                "eligible": e.eligible,
                "utilities": {k: e.utilities[k] for k in sorted(e.utilities)},
            }
            for e in report.entries
        ],
        "request_echo": {
            "weights": {k: report.weights.weights[k]
                        for k in sorted(report.weights.weights)},
            "sensitivities": {k: report.sensitivities.sensitivities[k]
                              for k in sorted(report.sensitivities.sensitivities)},
            "minima": {k: report.minima.minima[k]
                       for k in sorted(report.minima.minima)},
        },
    }


def selection_result_to_dict(status: str, report: RankingReport,
                             qos_mode: QosMode) -> dict[str, Any]:
    return {"status": status, "report": report_to_dict(report, qos_mode)}


def canonical_json_bytes(obj: Any) -> bytes:
    """Deterministic byte serialization for replay and equality checks."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, allow_nan=False).encode("utf-8")
