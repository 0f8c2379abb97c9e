import json

import pytest

from chiralwalk.catalog import CLAIMS, build_catalog, evaluate

ENTRIES = build_catalog()


@pytest.mark.parametrize("entry", ENTRIES, ids=[e.name for e in ENTRIES])
def test_catalog_entry(entry):
    result = evaluate(entry)
    assert result.passed, result.to_dict()


def test_catalog_sorted_and_unique():
    names = [e.name for e in ENTRIES]
    assert names == sorted(names)
    assert len(set(names)) == len(names)


def test_catalog_claims_known():
    assert {e.claim for e in ENTRIES} <= set(CLAIMS)


@pytest.mark.parametrize("fragment", [
    "H(1,2)", "H(2,2)", "H(1,3)", "H(2,3)", "H(1,4)", "H(2,4)",
    "oriented H(1,4)", "oriented H(2,4)", "K13^2", "K5 no", "K8 no",
    "oriented C5", "oriented C7", "tournament T2", "tournament T8", "S3",
])
def test_catalog_covers(fragment):
    assert any(fragment in e.name for e in ENTRIES)


def test_catalog_is_deterministic():
    a = json.dumps([evaluate(e).to_dict() for e in ENTRIES], sort_keys=True)
    b = json.dumps([evaluate(e).to_dict() for e in build_catalog()], sort_keys=True)
    assert a == b
