import json

import pytest
from hypothesis import HealthCheck, given, settings

from rfbroker.catalog import (
    CatalogStore,
    QosMode,
    Tendency,
    catalog_to_dict,
    ingest_catalog,
)
from rfbroker.errors import (
    NotFoundError,
    SchemaError,
    UnknownAttributeError,
    ValidationError,
)

from .strategies import catalog_documents


def minimal_doc(**overrides):
    doc = {
        "attributes": [
            {"id": "elasticity", "display_name": "Elasticity",
             "tendency": "positive", "unit": ""},
            {"id": "cost", "display_name": "Cost", "tendency": "negative",
             "unit": "USD"},
        ],
        "mode": "normalized",
        "providers": [
            {"provider_id": "rf1", "name": "Farm One",
             "capabilities": {"software": [], "render_engines": [],
                              "node_config": {}},
             "qos_offering": {"elasticity": 0.5, "cost": 0.9}},
        ],
    }
    doc.update(overrides)
    return doc


class TestIngest:
    def test_table1_five_providers_five_values(self, table1_catalog):
        assert len(table1_catalog.providers) == 5
        assert table1_catalog.mode is QosMode.NORMALIZED
        for p in table1_catalog.providers:
            assert len(p.qos_offering) == 5
        assert set(table1_catalog.registry()) == {
            "elasticity", "upload_time", "cost", "response_time", "availability"}
        assert table1_catalog.registry()["elasticity"].tendency is Tendency.POSITIVE
        assert table1_catalog.registry()["cost"].tendency is Tendency.NEGATIVE

    def test_empty_provider_list_keeps_registry(self):
        catalog = ingest_catalog(minimal_doc(providers=[]))
        assert catalog.providers == ()
        assert set(catalog.registry()) == {"elasticity", "cost"}

    def test_normalized_bound_violation_names_provider_and_attribute(self):
        doc = minimal_doc()
        doc["providers"][0]["qos_offering"]["elasticity"] = 1.2
        with pytest.raises(ValidationError) as exc:
            ingest_catalog(doc)
        (violation,) = exc.value.violations
        assert "rf1" in violation and "elasticity" in violation and "1.2" in violation

    def test_every_violation_reported_not_just_first(self):
        doc = minimal_doc()
        doc["providers"][0]["qos_offering"] = {"elasticity": 1.2, "cost": -0.1}
        doc["providers"].append({
            "provider_id": "rf2", "name": "Farm Two",
            "capabilities": {"software": [], "render_engines": [], "node_config": {}},
            "qos_offering": {"elasticity": 7.0},
        })
        with pytest.raises(ValidationError) as exc:
            ingest_catalog(doc)
        assert len(exc.value.violations) == 3

    def test_unknown_attribute_reference(self):
        doc = minimal_doc()
        doc["providers"][0]["qos_offering"]["karma"] = 0.5
        with pytest.raises(UnknownAttributeError) as exc:
            ingest_catalog(doc)
        assert "karma" in str(exc.value)

    def test_mixed_violations_raise_plain_validation_error(self):
        doc = minimal_doc()
        doc["providers"][0]["qos_offering"] = {"karma": 0.5, "elasticity": 1.5}
        with pytest.raises(ValidationError) as exc:
            ingest_catalog(doc)
        assert not isinstance(exc.value, UnknownAttributeError)
        assert len(exc.value.violations) == 2

    def test_rejects_nan_literal(self):
        text = json.dumps(minimal_doc()).replace("0.5", "NaN")
        with pytest.raises(SchemaError):
            ingest_catalog(text)

    def test_rejects_unknown_top_level_key(self):
        with pytest.raises(SchemaError):
            ingest_catalog(minimal_doc(sneaky=1))

    def test_description_key_is_allowed(self):
        catalog = ingest_catalog(minimal_doc(description="demo"))
        assert len(catalog.providers) == 1

    def test_duplicate_attribute_id_case_insensitive(self):
        doc = minimal_doc()
        doc["attributes"].append({"id": "Elasticity", "display_name": "E2",
                                  "tendency": "positive", "unit": ""})
        with pytest.raises(ValidationError):
            ingest_catalog(doc)

    def test_duplicate_provider_id(self):
        doc = minimal_doc()
        doc["providers"].append(dict(doc["providers"][0]))
        with pytest.raises(ValidationError):
            ingest_catalog(doc)

    def test_missing_tendency_is_schema_error(self):
        doc = minimal_doc()
        del doc["attributes"][0]["tendency"]
        with pytest.raises(SchemaError):
            ingest_catalog(doc)

    def test_raw_mode_zero_negative_tendency_rejected(self):
        doc = minimal_doc(mode="raw")
        doc["providers"][0]["qos_offering"] = {"elasticity": 3.0, "cost": 0.0}
        with pytest.raises(ValidationError) as exc:
            ingest_catalog(doc)
        assert "cost" in str(exc.value)

    def test_raw_mode_accepts_values_above_one(self):
        doc = minimal_doc(mode="raw")
        doc["providers"][0]["qos_offering"] = {"elasticity": 12.0, "cost": 4.5}
        catalog = ingest_catalog(doc)
        assert catalog.providers[0].qos_offering["cost"] == 4.5

    def test_node_config_must_be_positive(self):
        doc = minimal_doc()
        doc["providers"][0]["capabilities"]["node_config"] = {"cores": 0}
        with pytest.raises(ValidationError) as exc:
            ingest_catalog(doc)
        assert "cores" in str(exc.value)

    def test_software_and_engine_canonicalization(self):
        doc = minimal_doc()
        doc["providers"][0]["capabilities"]["software"] = [
            {"product": "  Maya ", "version": " 7.0 "}]
        doc["providers"][0]["capabilities"]["render_engines"] = ["  V-Ray "]
        catalog = ingest_catalog(doc)
        caps = catalog.providers[0].capabilities
        assert caps.software == frozenset({("maya", "7.0")})
        assert caps.render_engines == frozenset({"v-ray"})

    def test_ingestion_deterministic(self, table1_doc):
        text = json.dumps(table1_doc)
        assert ingest_catalog(text) == ingest_catalog(text)

    def test_boolean_is_not_a_number(self):
        doc = minimal_doc()
        doc["providers"][0]["qos_offering"]["elasticity"] = True
        with pytest.raises(SchemaError):
            ingest_catalog(doc)


class TestStore:
    def test_round_trip_identity(self, table1_catalog, tmp_path):
        store = CatalogStore(tmp_path)
        snapshot_id = store.store(table1_catalog)
        assert store.load(snapshot_id) == table1_catalog

    def test_unknown_snapshot_not_found(self, tmp_path):
        store = CatalogStore(tmp_path)
        with pytest.raises(NotFoundError):
            store.load(999)

    def test_snapshot_ids_strictly_increase(self, table1_catalog, tmp_path):
        store = CatalogStore(tmp_path)
        first = store.store(table1_catalog)
        second = store.store(table1_catalog)
        assert second > first

    def test_snapshots_are_immutable(self, table1_catalog, tmp_path):
        store = CatalogStore(tmp_path)
        snapshot_id = store.store(table1_catalog)
        before = (tmp_path / f"{snapshot_id:06d}.json").read_bytes()
        store.store(table1_catalog)
        assert (tmp_path / f"{snapshot_id:06d}.json").read_bytes() == before

    def test_latest_returns_newest(self, table1_catalog, tmp_path):
        store = CatalogStore(tmp_path)
        store.store(table1_catalog)
        newest = store.store(table1_catalog)
        assert store.latest()[0] == newest

    def test_empty_store_latest_not_found(self, tmp_path):
        with pytest.raises(NotFoundError):
            CatalogStore(tmp_path).latest()

    @settings(max_examples=60, suppress_health_check=[HealthCheck.function_scoped_fixture],
              deadline=None)
    @given(doc=catalog_documents())
    def test_round_trip_property(self, doc, tmp_path):
        catalog = ingest_catalog(doc)
        store = CatalogStore(tmp_path)
        assert store.load(store.store(catalog)) == catalog

    def test_serialization_round_trip_without_store(self, table1_catalog):
        assert ingest_catalog(catalog_to_dict(table1_catalog)) == table1_catalog
