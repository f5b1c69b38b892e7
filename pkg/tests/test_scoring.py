import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfbroker.catalog import (
    FunctionalCapabilities,
    ProviderProfile,
    QoSAttribute,
    QosMode,
    Tendency,
)
from rfbroker.errors import (
    DegenerateInputError,
    DomainError,
    KeyMismatchError,
    ValidationError,
)
from rfbroker.scoring import (
    MinimumRequirements,
    NormalizedOffer,
    SensitivityVector,
    WeightVector,
    aggregate_utility,
    individual_utility,
    normalize_offers,
    rank,
    threshold_utility,
    validate_request,
)

from .conftest import GOLDEN_AU, GOLDEN_EU

TABLE2_WEIGHTS = {"elasticity": 0.1, "upload_time": 0.2, "cost": 0.3,
                  "response_time": 0.3, "availability": 0.1}
TABLE2_SENSITIVITIES = {"elasticity": 7, "upload_time": 5, "cost": 9,
                        "response_time": 8, "availability": 4}
TABLE2_MINIMA = {"elasticity": 0.95, "upload_time": 0.9, "cost": 0.7,
                 "response_time": 0.6, "availability": 0.7}
RF1_OFFER = {"elasticity": 0.75, "upload_time": 0.98, "cost": 0.97,
             "response_time": 0.9, "availability": 0.7}
RF4_OFFER = {"elasticity": 0.6, "upload_time": 0.94, "cost": 0.7,
             "response_time": 0.6, "availability": 0.8}


def table2_vectors():
    return (WeightVector(TABLE2_WEIGHTS),
            SensitivityVector(TABLE2_SENSITIVITIES),
            MinimumRequirements(TABLE2_MINIMA))


class TestIndividualUtility:
    def test_exponentiation(self):
        u = individual_utility(0.98, 5)
        assert round(u, 6) == 0.903921
        # cross-check against repeated multiplication
        assert u == pytest.approx(0.98 * 0.98 * 0.98 * 0.98 * 0.98, abs=1e-15)

    def test_zero_sensitivity_means_indifference(self):
        assert individual_utility(0.4, 0) == 1.0

    def test_zero_to_the_zero_is_one(self):
        assert individual_utility(0.0, 0.0) == 1.0

    def test_identity_cases(self):
        assert individual_utility(1.0, 7) == 1.0
        assert individual_utility(0.0, 8) == 0.0

    @pytest.mark.parametrize("p,beta", [
        (1.2, 1.0), (-0.1, 1.0), (0.5, -1.0),
        (0.5, float("inf")), (0.5, float("nan")),
    ])
    def test_domain_errors(self, p, beta):
        with pytest.raises(DomainError):
            individual_utility(p, beta)


class TestAggregateUtility:
    def test_golden_rf1(self):
        w, b, _ = table2_vectors()
        au = aggregate_utility(NormalizedOffer("RF1", RF1_OFFER), w, b)
        assert au == pytest.approx(GOLDEN_AU["RF1"], abs=1e-12)
        assert round(au, 1) == 0.6

    def test_golden_rf4(self):
        w, b, _ = table2_vectors()
        au = aggregate_utility(NormalizedOffer("RF4", RF4_OFFER), w, b)
        assert au == pytest.approx(GOLDEN_AU["RF4"], abs=1e-12)
        assert round(au, 1) == 0.2

    def test_all_ones_scores_one(self):
        w, b, _ = table2_vectors()
        offer = NormalizedOffer("x", {a: 1.0 for a in TABLE2_WEIGHTS})
        assert aggregate_utility(offer, w, b) == 1.0

    def test_all_ones_exact_binary_weights(self):
        attrs = ["a", "b", "c", "d"]
        w = WeightVector({a: 0.25 for a in attrs})
        b = SensitivityVector({a: 3.0 for a in attrs})
        assert aggregate_utility(NormalizedOffer("x", {a: 1.0 for a in attrs}), w, b) == 1.0

    def test_key_mismatch(self):
        w, b, _ = table2_vectors()
        offer = NormalizedOffer("x", {"elasticity": 0.5})
        with pytest.raises(KeyMismatchError):
            aggregate_utility(offer, w, b)


class TestThresholdUtility:
    def test_golden_threshold(self):
        w, b, minima = table2_vectors()
        eu = threshold_utility(minima, w, b)
        assert eu == pytest.approx(GOLDEN_EU, abs=1e-12)
        assert abs(eu - 0.230) <= 0.005

    def test_zero_minima(self):
        attrs = ["a", "b"]
        eu = threshold_utility(
            MinimumRequirements({a: 0.0 for a in attrs}),
            WeightVector({a: 0.5 for a in attrs}),
            SensitivityVector({a: 2.0 for a in attrs}))
        assert eu == 0.0

    def test_one_minima(self):
        attrs = ["a", "b"]
        eu = threshold_utility(
            MinimumRequirements({a: 1.0 for a in attrs}),
            WeightVector({a: 0.5 for a in attrs}),
            SensitivityVector({a: 9.0 for a in attrs}))
        assert eu == 1.0

    def test_identity_with_aggregate(self):
        w, b, minima = table2_vectors()
        as_offer = NormalizedOffer("min", dict(TABLE2_MINIMA))
        assert threshold_utility(minima, w, b) == aggregate_utility(as_offer, w, b)


def raw_provider(pid, offering):
    return ProviderProfile(pid, pid, FunctionalCapabilities(), offering, QosMode.RAW)


RAW_REGISTRY = {
    "cost": QoSAttribute("cost", "Cost", Tendency.NEGATIVE, "USD"),
    "elasticity": QoSAttribute("elasticity", "Elasticity", Tendency.POSITIVE, ""),
}


class TestNormalizeOffers:
    def test_normalized_mode_passthrough(self, table1_catalog):
        offers = normalize_offers(list(table1_catalog.providers),
                                  table1_catalog.registry())
        by_id = {o.provider_id: o for o in offers}
        for p in table1_catalog.providers:
            assert by_id[p.provider_id].values == dict(p.qos_offering)

    def test_raw_negative_tendency_reciprocal_then_minmax(self):
        providers = [raw_provider("rfa", {"cost": 2.0}),
                     raw_provider("rfb", {"cost": 4.0})]
        offers = normalize_offers(providers, RAW_REGISTRY)
        values = {o.provider_id: o.values["cost"] for o in offers}
        assert values == {"rfa": 1.0, "rfb": 0.0}

    def test_raw_constant_attribute_normalizes_to_one(self):
        providers = [raw_provider(f"rf{i}", {"elasticity": 3.0}) for i in range(3)]
        offers = normalize_offers(providers, RAW_REGISTRY)
        assert all(o.values["elasticity"] == 1.0 for o in offers)

    def test_raw_positive_tendency_minmax(self):
        providers = [raw_provider("rfa", {"elasticity": 10.0}),
                     raw_provider("rfb", {"elasticity": 20.0}),
                     raw_provider("rfc", {"elasticity": 15.0})]
        offers = normalize_offers(providers, RAW_REGISTRY)
        values = {o.provider_id: o.values["elasticity"] for o in offers}
        assert values == {"rfa": 0.0, "rfb": 1.0, "rfc": 0.5}

    def test_empty_provider_list_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            normalize_offers([], RAW_REGISTRY)

    def test_zero_raw_value_on_negative_tendency(self):
        providers = [raw_provider("rfa", {"cost": 0.0})]
        with pytest.raises(DomainError):
            normalize_offers(providers, RAW_REGISTRY)

    def test_results_always_in_unit_interval(self):
        providers = [raw_provider("rfa", {"cost": 0.001, "elasticity": 7.0}),
                     raw_provider("rfb", {"cost": 123.0, "elasticity": 2.5}),
                     raw_provider("rfc", {"cost": 3.7, "elasticity": 4.4})]
        for offer in normalize_offers(providers, RAW_REGISTRY):
            for v in offer.values.values():
                assert 0.0 <= v <= 1.0


class TestRank:
    def test_golden_order_and_eligibility(self, table1_catalog):
        w, b, minima = table2_vectors()
        offers = normalize_offers(list(table1_catalog.providers),
                                  table1_catalog.registry())
        report = rank(offers, minima, w, b)
        assert [e.provider_id for e in report.entries] == ["RF1", "RF2", "RF3", "RF5", "RF4"]
        assert [e.eligible for e in report.entries] == [True, True, True, True, False]

    def test_tie_broken_by_provider_id(self):
        w = WeightVector({"a": 1.0})
        b = SensitivityVector({"a": 2.0})
        minima = MinimumRequirements({"a": 0.0})
        offers = [NormalizedOffer("zeta", {"a": 0.5}),
                  NormalizedOffer("alpha", {"a": 0.5})]
        report = rank(offers, minima, w, b)
        assert [e.provider_id for e in report.entries] == ["alpha", "zeta"]
        assert report.entries[0].aggregate_utility == report.entries[1].aggregate_utility

    def test_single_offer_above_threshold(self):
        w = WeightVector({"a": 1.0})
        b = SensitivityVector({"a": 1.0})
        report = rank([NormalizedOffer("only", {"a": 0.9})],
                      MinimumRequirements({"a": 0.5}), w, b)
        assert report.entries[0].eligible

    def test_entries_carry_utility_breakdown(self, table1_catalog):
        w, b, minima = table2_vectors()
        offers = normalize_offers(list(table1_catalog.providers),
                                  table1_catalog.registry())
        report = rank(offers, minima, w, b)
        top = report.entries[0]
        assert set(top.utilities) == set(TABLE2_WEIGHTS)
        assert top.utilities["upload_time"] == pytest.approx(0.98 ** 5, abs=1e-15)

    def test_empty_offers_rejected(self):
        w, b, minima = table2_vectors()
        with pytest.raises(DegenerateInputError):
            rank([], minima, w, b)

    @settings(max_examples=200, deadline=None)
    @given(instance=scoring_instances(min_attrs=2, max_attrs=6), data=st.data())
    def test_ranking_coherence(self, instance, data):
        # Order is a valid descending sort of the AU column, and eligibility
        # equals an independent AU >= EU recomputation per entry.
        attrs, weights, sensitivities, _values = instance
        w = WeightVector(weights)
        b = SensitivityVector(sensitivities)
        minima = MinimumRequirements(
            {a: data.draw(st.floats(0.0, 1.0, allow_nan=False)) for a in attrs})
        offers = [
            NormalizedOffer(f"p{i:02d}",
                            {a: data.draw(st.floats(0.0, 1.0, allow_nan=False))
                             for a in attrs})
            for i in range(data.draw(st.integers(1, 8)))
        ]
        report = rank(offers, minima, w, b)
        aus = [e.aggregate_utility for e in report.entries]
        assert aus == sorted(aus, reverse=True)
        eu = threshold_utility(minima, w, b)
        by_id = {o.provider_id: o for o in offers}
        for entry in report.entries:
            assert entry.eligible == (entry.aggregate_utility >= eu)
            assert aggregate_utility(by_id[entry.provider_id], w, b) \
                == entry.aggregate_utility


class TestValidateRequest:
    def test_table2_is_valid(self):
        w, b, m = validate_request(TABLE2_WEIGHTS, TABLE2_SENSITIVITIES, TABLE2_MINIMA)
        assert math.isclose(sum(w.weights.values()), 1.0, abs_tol=1e-9)
        assert b.sensitivities["cost"] == 9
        assert m.minima["elasticity"] == 0.95

    def test_weight_sum_violation_message(self):
        with pytest.raises(ValidationError) as exc:
            validate_request({"a": 0.5, "b": 0.6}, {"a": 1, "b": 1},
                             {"a": 0.1, "b": 0.1})
        assert any("sum" in v and "1.1" in v for v in exc.value.violations)

    def test_negative_sensitivity_names_attribute(self):
        with pytest.raises(ValidationError) as exc:
            validate_request({"a": 1.0}, {"a": -3}, {"a": 0.5})
        assert any("sensitivities[a]" in v for v in exc.value.violations)

    def test_minimum_out_of_range(self):
        with pytest.raises(ValidationError) as exc:
            validate_request({"a": 1.0}, {"a": 1}, {"a": 1.5})
        assert any("minima[a]" in v for v in exc.value.violations)

    def test_key_set_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            validate_request({"a": 1.0}, {"a": 1, "b": 2}, {"a": 0.5})
        assert any("missing attributes" in v for v in exc.value.violations)

    def test_all_violations_accumulate(self):
        with pytest.raises(ValidationError) as exc:
            validate_request({"a": 0.5, "b": 0.6}, {"a": -1, "b": 1},
                             {"a": 2.0, "b": 0.5})
        assert len(exc.value.violations) >= 3

    def test_custom_tolerance(self):
        weights = {"a": 0.5, "b": 0.5005}
        with pytest.raises(ValidationError):
            validate_request(weights, {"a": 1, "b": 1}, {"a": 0.1, "b": 0.1})
        w, _, _ = validate_request(weights, {"a": 1, "b": 1}, {"a": 0.1, "b": 0.1},
                                   tolerance=1e-2)
        assert w.weights == weights

    def test_weight_vector_rejects_negative(self):
        with pytest.raises(ValidationError):
            WeightVector({"a": -0.5, "b": 1.5})

    def test_normalized_offer_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            NormalizedOffer("x", {"a": 1.01})
