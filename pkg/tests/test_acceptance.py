"""Every acceptance criterion at full size and stated tolerance.

Run ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line per criterion.
"""

import pytest

from tik import acceptance


@pytest.mark.parametrize("number", range(1, len(acceptance.CRITERIA) + 1))
def test_criterion(number):
    res = acceptance.run(number, quick=False)
    print()
    print(res.line())
    assert res.passed, res.detail


def test_quick_suite_runs(capsys):
    lines = []
    results = acceptance.run_all(quick=True, echo=lines.append)
    assert len(lines) == len(acceptance.CRITERIA)
    assert all(line.startswith("criterion ") for line in lines)
    assert all(r.passed for r in results)
