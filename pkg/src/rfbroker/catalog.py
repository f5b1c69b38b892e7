"""Provider catalog: QoS attribute registry, render-farm profiles, snapshot store.

A catalog document is UTF-8 JSON::

    {
      "attributes": [{"id", "display_name", "tendency": "positive"|"negative", "unit"}],
      "mode": "normalized" | "raw",
      "providers": [
        {"provider_id", "name",
         "capabilities": {"software": [{"product", "version"}],
                          "render_engines": [...],
                          "node_config": {resource: number}},
         "qos_offering": {attribute_id: number}}
      ]
    }

An optional top-level "description" string is accepted and ignored. NaN and
Infinity literals are rejected. Ingestion validates the whole document and
reports every violation found; an invalid catalog never reaches the store.
"""

from __future__ import annotations

import json
import math
import os
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import (
    NotFoundError,
    SchemaError,
    StorageError,
    UnknownAttributeError,
    ValidationError,
)


class Tendency(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class QosMode(str, Enum):
    NORMALIZED = "normalized"
    RAW = "raw"


@dataclass(frozen=True)
class QoSAttribute:
    """A named quality dimension with an explicitly declared tendency."""

    id: str
    display_name: str
    tendency: Tendency
    unit: str = ""


@dataclass(frozen=True)
class FunctionalCapabilities:
    software: frozenset[tuple[str, str]] = frozenset()
    render_engines: frozenset[str] = frozenset()
    node_config: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ProviderProfile:
    provider_id: str
    name: str
    capabilities: FunctionalCapabilities
    qos_offering: Mapping[str, float]
    qos_mode: QosMode


@dataclass(frozen=True)
class Catalog:
    attributes: tuple[QoSAttribute, ...]
    mode: QosMode
    providers: tuple[ProviderProfile, ...]

    def registry(self) -> dict[str, QoSAttribute]:
        return {a.id: a for a in self.attributes}

    def provider(self, provider_id: str) -> ProviderProfile | None:
        for p in self.providers:
            if p.provider_id == provider_id:
                return p
        return None

    def provider_ids(self) -> list[str]:
        return [p.provider_id for p in self.providers]


def canonical_name(value: str) -> str:
    """Canonical form for software products and render engine names."""
    return value.strip().casefold()


def canonical_version(value: str) -> str:
    # Versions compare as exact strings; only surrounding whitespace is noise.
    return value.strip()


def _reject_constant(token: str) -> float:
    raise SchemaError(f"non-finite number literal {token!r} is not accepted")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_keys(obj: Mapping[str, Any], required: set[str], optional: set[str],
                path: str, problems: list[str]) -> bool:
    """Schema check for one JSON object; returns True when usable."""
    ok = True
    for key in required:
        if key not in obj:
            problems.append(f"{path}: missing required field '{key}'")
            ok = False
    for key in obj:
        if key not in required and key not in optional:
            problems.append(f"{path}: unknown field '{key}'")
            ok = False
    return ok


def _parse_attributes(raw: Any, schema_problems: list[str],
                      violations: list[str]) -> list[QoSAttribute]:
    attributes: list[QoSAttribute] = []
    if not isinstance(raw, list):
        schema_problems.append("attributes: must be a list")
        return attributes
    seen: dict[str, str] = {}  # casefolded id -> first path
    for i, entry in enumerate(raw):
        path = f"attributes[{i}]"
        if not isinstance(entry, dict):
            schema_problems.append(f"{path}: must be an object")
            continue
        if not _check_keys(entry, {"id", "display_name", "tendency"}, {"unit"},
                           path, schema_problems):
            continue
        attr_id = entry["id"]
        display = entry["display_name"]
        tendency = entry["tendency"]
        unit = entry.get("unit", "")
        if not isinstance(attr_id, str) or not isinstance(display, str) \
                or not isinstance(unit, str):
            schema_problems.append(f"{path}: id, display_name and unit must be strings")
            continue
        if tendency not in (Tendency.POSITIVE.value, Tendency.NEGATIVE.value):
            schema_problems.append(
                f"{path}.tendency: must be 'positive' or 'negative', got {tendency!r}")
            continue
        attr_id = attr_id.strip()
        if not attr_id:
            violations.append(f"{path}.id: must be non-empty")
            continue
        folded = attr_id.casefold()
        if folded in seen:
            violations.append(
                f"{path}.id: '{attr_id}' duplicates {seen[folded]} (ids are case-insensitive-unique)")
            continue
        seen[folded] = f"{path}.id '{attr_id}'"
        attributes.append(QoSAttribute(attr_id, display, Tendency(tendency), unit))
    return attributes


def _parse_capabilities(raw: Any, path: str, schema_problems: list[str],
                        violations: list[str]) -> FunctionalCapabilities:
    if not isinstance(raw, dict):
        schema_problems.append(f"{path}: must be an object")
        return FunctionalCapabilities()
    _check_keys(raw, set(), {"software", "render_engines", "node_config"},
                path, schema_problems)

    software: set[tuple[str, str]] = set()
    raw_software = raw.get("software", [])
    if not isinstance(raw_software, list):
        schema_problems.append(f"{path}.software: must be a list")
        raw_software = []
    for j, pair in enumerate(raw_software):
        ppath = f"{path}.software[{j}]"
        if not isinstance(pair, dict) or not _check_keys(
                pair, {"product", "version"}, set(), ppath, schema_problems):
            continue
        if not isinstance(pair["product"], str) or not isinstance(pair["version"], str):
            schema_problems.append(f"{ppath}: product and version must be strings")
            continue
        software.add((canonical_name(pair["product"]), canonical_version(pair["version"])))

    engines: set[str] = set()
    raw_engines = raw.get("render_engines", [])
    if isinstance(raw_engines, list):
        for j, name in enumerate(raw_engines):
            if not isinstance(name, str):
                schema_problems.append(f"{path}.render_engines[{j}]: must be a string")
                continue
            engines.add(canonical_name(name))
    else:
        schema_problems.append(f"{path}.render_engines: must be a list")

    node_config: dict[str, float] = {}
    raw_node = raw.get("node_config", {})
    if isinstance(raw_node, dict):
        for resource, value in raw_node.items():
            if not _is_number(value):
                schema_problems.append(f"{path}.node_config.{resource}: must be a number")
            elif not (math.isfinite(value) and value > 0):
                violations.append(
                    f"{path}.node_config.{resource}: must be strictly positive and finite, got {value!r}")
            else:
                node_config[resource] = float(value)
    else:
        schema_problems.append(f"{path}.node_config: must be an object")

    return FunctionalCapabilities(frozenset(software), frozenset(engines), node_config)


def _validate_offering_value(value: float, mode: QosMode, tendency: Tendency,
                             path: str, violations: list[str]) -> None:
    if mode is QosMode.NORMALIZED:
        if not (0.0 <= value <= 1.0):
            violations.append(f"{path}: value {value!r} outside [0,1] (normalized mode)")
    else:
        if not (math.isfinite(value) and value >= 0.0):
            violations.append(f"{path}: value {value!r} must be a finite non-negative number (raw mode)")
        elif tendency is Tendency.NEGATIVE and value == 0.0:
            violations.append(
                f"{path}: negative-tendency raw value must be strictly positive (its reciprocal is taken)")


def ingest_catalog(document: str | bytes | Mapping[str, Any]) -> Catalog:
    """Parse and fully validate a catalog document.

    Raises SchemaError for malformed JSON or shape problems, ValidationError
    (or UnknownAttributeError when every breach is an unregistered-attribute
    reference) with the complete list of violations otherwise.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document, parse_constant=_reject_constant)
        except SchemaError:
            raise
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise SchemaError("catalog document must be a JSON object")

    schema_problems: list[str] = []
    violations: list[str] = []

    _check_keys(doc, {"attributes", "mode", "providers"}, {"description"},
                "catalog", schema_problems)

    mode_raw = doc.get("mode")
    mode = QosMode.NORMALIZED
    if mode_raw in (QosMode.NORMALIZED.value, QosMode.RAW.value):
        mode = QosMode(mode_raw)
    elif "mode" in doc:
        schema_problems.append(f"mode: must be 'normalized' or 'raw', got {mode_raw!r}")

    attributes = _parse_attributes(doc.get("attributes", []), schema_problems, violations)
    registry = {a.id: a for a in attributes}

    providers: list[ProviderProfile] = []
    raw_providers = doc.get("providers", [])
    if not isinstance(raw_providers, list):
        schema_problems.append("providers: must be a list")
        raw_providers = []

    seen_ids: set[str] = set()
    unknown_attr_count = 0
    for i, entry in enumerate(raw_providers):
        path = f"providers[{i}]"
        if not isinstance(entry, dict):
            schema_problems.append(f"{path}: must be an object")
            continue
        if not _check_keys(entry, {"provider_id", "name", "capabilities", "qos_offering"},
                           set(), path, schema_problems):
            continue
        pid = entry["provider_id"]
        name = entry["name"]
        if not isinstance(pid, str) or not isinstance(name, str):
            schema_problems.append(f"{path}: provider_id and name must be strings")
            continue
        pid = pid.strip()
        path = f"providers[{pid or i}]"
        if not pid:
            violations.append(f"providers[{i}].provider_id: must be non-empty")
            continue
        if pid in seen_ids:
            violations.append(f"{path}.provider_id: duplicate provider id '{pid}'")
            continue
        seen_ids.add(pid)

        capabilities = _parse_capabilities(entry["capabilities"], f"{path}.capabilities",
                                           schema_problems, violations)

        offering: dict[str, float] = {}
        raw_offering = entry["qos_offering"]
        if not isinstance(raw_offering, dict):
            schema_problems.append(f"{path}.qos_offering: must be an object")
            raw_offering = {}
        for attr_id, value in raw_offering.items():
            opath = f"{path}.qos_offering.{attr_id}"
            if attr_id not in registry:
                violations.append(f"{opath}: references unregistered attribute '{attr_id}'")
                unknown_attr_count += 1
                continue
            if not _is_number(value):
                schema_problems.append(f"{opath}: must be a number")
                continue
            value = float(value)
            _validate_offering_value(value, mode, registry[attr_id].tendency,
                                     opath, violations)
            offering[attr_id] = value

        providers.append(ProviderProfile(pid, name.strip(), capabilities, offering, mode))

    if schema_problems:
        raise SchemaError(schema_problems)
    if violations:
        if unknown_attr_count == len(violations):
            raise UnknownAttributeError(violations)
        raise ValidationError(violations)
    return Catalog(tuple(attributes), mode, tuple(providers))


def catalog_to_dict(catalog: Catalog) -> dict[str, Any]:
    """Serialize back to the document form; ingest(catalog_to_dict(c)) == c."""
    return {
        "attributes": [
            {"id": a.id, "display_name": a.display_name,
             "tendency": a.tendency.value, "unit": a.unit}
            for a in catalog.attributes
        ],
        "mode": catalog.mode.value,
        "providers": [
            {
                "provider_id": p.provider_id,
                "name": p.name,
                "capabilities": {
                    "software": [
                        {"product": product, "version": version}
                        for product, version in sorted(p.capabilities.software)
                    ],
                    "render_engines": sorted(p.capabilities.render_engines),
                    "node_config": {k: p.capabilities.node_config[k]
                                    for k in sorted(p.capabilities.node_config)},
                },
                "qos_offering": {k: p.qos_offering[k] for k in sorted(p.qos_offering)},
            }
            for p in catalog.providers
        ],
    }


class CatalogStore:
    """Append-only snapshot store on the local filesystem.

    Snapshots are immutable JSON files named by a monotonically increasing
    integer id. Writes go through a temp file + atomic rename, so a reader
    never observes a partially written snapshot. One lock serializes writers;
    reads need no locking.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create catalog store at {self.root}: {exc}") from exc
        self._write_lock = threading.Lock()

    def _path(self, snapshot_id: int) -> Path:
        return self.root / f"{snapshot_id:06d}.json"

    def ids(self) -> list[int]:
        out = []
        for p in self.root.glob("*.json"):
            try:
                out.append(int(p.stem))
            except ValueError:
                continue
        return sorted(out)

    def store(self, catalog: Catalog) -> int:
        with self._write_lock:
            existing = self.ids()
            snapshot_id = (existing[-1] + 1) if existing else 1
            path = self._path(snapshot_id)
            tmp = path.with_suffix(".json.tmp")
            try:
                tmp.write_text(json.dumps(catalog_to_dict(catalog), indent=2, sort_keys=True),
                               encoding="utf-8")
                os.replace(tmp, path)
            except OSError as exc:
                raise StorageError(f"cannot write snapshot {snapshot_id}: {exc}") from exc
            return snapshot_id

    def load(self, snapshot_id: int) -> Catalog:
        path = self._path(snapshot_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"unknown catalog snapshot id {snapshot_id!r}") from None
        except OSError as exc:
            raise StorageError(f"cannot read snapshot {snapshot_id}: {exc}") from exc
        # Snapshots re-validate on load; the round trip is lossless by test.
        return ingest_catalog(text)

    def latest_id(self) -> int | None:
        existing = self.ids()
        return existing[-1] if existing else None

    def latest(self) -> tuple[int, Catalog]:
        snapshot_id = self.latest_id()
        if snapshot_id is None:
            raise NotFoundError("catalog store is empty")
        return snapshot_id, self.load(snapshot_id)


def providers_by_id(providers: Iterable[ProviderProfile]) -> dict[str, ProviderProfile]:
    return {p.provider_id: p for p in providers}
