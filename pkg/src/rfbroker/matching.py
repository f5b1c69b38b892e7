"""Functional-requirement matching: filter the catalog before any scoring.

A provider matches when it offers every required (product, version) pair,
every required render engine, at least the minimum capacity for every listed
node resource, and a QoS offering value for every attribute the requester
will score on. A provider that omits a required attribute is a non-match;
nothing is zero-filled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .catalog import ProviderProfile, canonical_name, canonical_version
from .errors import ValidationError


@dataclass(frozen=True)
class FunctionalRequirements:
    software: frozenset[tuple[str, str]] = frozenset()
    render_engines: frozenset[str] = frozenset()
    node_config_min: Mapping[str, float] = field(default_factory=dict)
    required_attributes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    mismatches: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.matched


def requirements_from_dict(doc: Mapping[str, Any] | None,
                           path: str = "functional") -> FunctionalRequirements:
    """Parse the JSON form; raises ValidationError listing every problem."""
    if doc is None:
        return FunctionalRequirements()
    if not isinstance(doc, Mapping):
        raise ValidationError([f"{path}: must be an object"])
    problems: list[str] = []
    allowed = {"software", "render_engines", "node_config_min", "required_attributes"}
    for key in doc:
        if key not in allowed:
            problems.append(f"{path}.{key}: unknown field")

    def _as_list(key: str) -> list:
        value = doc.get(key, [])
        if isinstance(value, list):
            return value
        problems.append(f"{path}.{key}: must be a list")
        return []

    software: set[tuple[str, str]] = set()
    for i, pair in enumerate(_as_list("software")):
        ppath = f"{path}.software[{i}]"
        if not isinstance(pair, Mapping) or set(pair) != {"product", "version"} \
                or not isinstance(pair.get("product"), str) \
                or not isinstance(pair.get("version"), str):
            problems.append(f"{ppath}: must be an object with string 'product' and 'version'")
            continue
        software.add((canonical_name(pair["product"]), canonical_version(pair["version"])))

    engines: set[str] = set()
    for i, name in enumerate(_as_list("render_engines")):
        if not isinstance(name, str):
            problems.append(f"{path}.render_engines[{i}]: must be a string")
            continue
        engines.add(canonical_name(name))

    node_min: dict[str, float] = {}
    raw_node = doc.get("node_config_min", {})
    if not isinstance(raw_node, Mapping):
        problems.append(f"{path}.node_config_min: must be an object")
        raw_node = {}
    for resource, value in raw_node.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) \
                or not math.isfinite(value) or value <= 0:
            problems.append(
                f"{path}.node_config_min.{resource}: must be a strictly positive number, got {value!r}")
            continue
        node_min[resource] = float(value)

    required: set[str] = set()
    for i, attr in enumerate(_as_list("required_attributes")):
        if not isinstance(attr, str) or not attr.strip():
            problems.append(f"{path}.required_attributes[{i}]: must be a non-empty string")
            continue
        required.add(attr.strip())

    if problems:
        raise ValidationError(problems)
    return FunctionalRequirements(frozenset(software), frozenset(engines),
                                  node_min, frozenset(required))


def matches(requirements: FunctionalRequirements,
            provider: ProviderProfile) -> MatchResult:
    """Evaluate all four clauses; on failure the result lists every one."""
    mismatches: list[str] = []
    caps = provider.capabilities

    for product, version in sorted(requirements.software):
        if (product, version) not in caps.software:
            mismatches.append(f"software: missing ({product}, {version})")

    for engine in sorted(requirements.render_engines):
        if engine not in caps.render_engines:
            mismatches.append(f"render_engines: missing {engine}")

    for resource in sorted(requirements.node_config_min):
        minimum = requirements.node_config_min[resource]
        capacity = caps.node_config.get(resource)
        if capacity is None:
            mismatches.append(f"node_config: no capacity declared for {resource}")
        elif capacity < minimum:
            mismatches.append(f"node_config: {resource} {capacity:g} < required {minimum:g}")

    for attr_id in sorted(requirements.required_attributes):
        if attr_id not in provider.qos_offering:
            mismatches.append(f"qos_offering: missing attribute {attr_id}")

    return MatchResult(not mismatches, tuple(mismatches))


def discover(requirements: FunctionalRequirements,
             providers: Iterable[ProviderProfile]) -> list[ProviderProfile]:
    """Providers satisfying every clause, in provider_id lexicographic order.

    An empty result is a valid outcome, not an error.
    """
    hits = [p for p in providers if matches(requirements, p)]
    hits.sort(key=lambda p: p.provider_id)
    return hits
