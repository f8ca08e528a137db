"""One test per acceptance criterion; each prints a PASS/FAIL line.

Tolerances live in :mod:`ddepair.acceptance`; nothing here relaxes them.
"""
import pytest

from ddepair.acceptance import run_all

_RESULTS = {}


def _results():
    if not _RESULTS:
        for res in run_all():
            _RESULTS[res.number] = res
    return _RESULTS


@pytest.mark.parametrize("number", range(1, 13))
def test_criterion(number, capsys):
    res = _results()[number]
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
