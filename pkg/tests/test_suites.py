import pytest

from planarloops.exactlin import DifferentialError
from planarloops.suites import SUITE_NAMES, SUITES, Check, CheckResult, run_suite


def test_every_check_has_provenance():
    for checks in SUITES.values():
        for check in checks:
            assert check.provenance in {"PUBLISHED", "DERIVED", "TRIVIAL"}
            assert check.source


def test_report_lines():
    results = run_suite("cups")
    assert all(r.passed for r in results)
    line = results[0].line()
    assert line.startswith("PASS") and "[PUBLISHED:" in line and "computed=" in line


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert "all" in SUITE_NAMES


def test_crash_is_a_failure_but_inconsistency_propagates(monkeypatch):
    def boom():
        raise ValueError("bad")

    def broken():
        raise DifferentialError("d∘d != 0")

    monkeypatch.setitem(SUITES, "tmp", [Check("crash", 1, boom, "TRIVIAL", "test")])
    (res,) = run_suite("tmp")
    assert not res.passed and "ValueError" in res.line()
    monkeypatch.setitem(SUITES, "tmp", [Check("broken", 1, broken, "TRIVIAL", "test")])
    with pytest.raises(DifferentialError):
        run_suite("tmp")
    assert isinstance(res, CheckResult)
