import json
from pathlib import Path

import pytest

from rfbroker import ingest_catalog
from rfbroker.pipeline import parse_selection_request

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Frozen expected values, recomputed independently at 50 significant digits
# (sum of weight * value**sensitivity over the five attributes).
GOLDEN_AU = {
    "RF1": 0.5753520286282445651,
    "RF2": 0.47553813230671875,
    "RF3": 0.4047739710060546875,
    "RF4": 0.20768509458,
    "RF5": 0.29978320637984375,
}
GOLDEN_EU = 0.229086659709375
GOLDEN_ORDER = ["RF1", "RF2", "RF3", "RF5", "RF4"]
GOLDEN_ROUNDED = {"RF1": 0.6, "RF2": 0.5, "RF3": 0.4, "RF5": 0.3, "RF4": 0.2}


@pytest.fixture(scope="session")
def table1_doc():
    return json.loads((FIXTURES / "table1.json").read_text())


@pytest.fixture(scope="session")
def table2_doc():
    return json.loads((FIXTURES / "table2.json").read_text())


@pytest.fixture(scope="session")
def table1_catalog(table1_doc):
    return ingest_catalog(table1_doc)


@pytest.fixture(scope="session")
def table2_request(table2_doc):
    return parse_selection_request(table2_doc)
