"""Golden cases recompute their recorded facts."""

import pytest

from poisson_pairs import registry
from poisson_pairs.errors import UsageError
from poisson_pairs.registry import CaseRecord, case_ids, get_case, run_case, run_cases


def _params():
    return [
        pytest.param(case.case_id, marks=pytest.mark.slow) if case.slow else case.case_id
        for case in registry.CASES
    ]


@pytest.mark.parametrize("case_id", _params())
def test_case_reproduces_its_facts(case_id):
    result = run_case(case_id)
    assert result.error is None
    failing = [(c.name, c.expected, c.actual) for c in result.checks if not c.passed]
    assert not failing


def test_case_ids_are_unique():
    assert len(set(case_ids())) == len(case_ids())


def test_unknown_case():
    with pytest.raises(UsageError) as info:
        get_case("no-such-case")
    assert "five-dim-nonflat" in str(info.value)


def test_errors_are_captured(monkeypatch):
    def explode():
        raise ZeroDivisionError("boom")

    record = CaseRecord("boom", "always fails", "test", {}, {"fact": "1"}, explode)
    monkeypatch.setitem(registry._BY_ID, "boom", record)
    result = run_case("boom")
    assert not result.passed
    assert result.error == "ZeroDivisionError: boom"
    assert result.checks[0].actual is None


def test_mismatch_fails(monkeypatch):
    record = CaseRecord("off", "wrong value", "test", {}, {"fact": "1"}, lambda: {"fact": "2"})
    monkeypatch.setitem(registry._BY_ID, "off", record)
    result = run_case("off")
    assert result.error is None
    assert not result.passed


def test_run_cases_keeps_order():
    ids = ["character-extension", "plane-normal-form"]
    assert [r.case_id for r in run_cases(ids)] == ids


def test_run_cases_checks_ids_first():
    with pytest.raises(UsageError):
        run_cases(["character-extension", "missing"])
