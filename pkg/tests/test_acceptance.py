"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import pytest

from chiralwalk.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    print(result.line())
    assert result.passed, result.line()
