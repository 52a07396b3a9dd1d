from __future__ import annotations

import json
from pathlib import Path

import pytest

from revinst.inference import MockInferenceClient
from revinst.records import default_registry

CONTRACTS_DIR = Path(__file__).resolve().parent.parent / "contracts" / "inference_v1"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture()
def mock_client(registry):
    return MockInferenceClient(registry)


@pytest.fixture(scope="session")
def contract_cases():
    cases = []
    for path in sorted(CONTRACTS_DIR.glob("*.json")):
        with open(path, encoding="utf-8") as f:
            cases.append(json.load(f))
    assert cases, "contract golden files missing"
    return cases
