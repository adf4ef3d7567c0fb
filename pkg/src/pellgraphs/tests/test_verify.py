import json

import pytest

from pellgraphs.graphs import BuildLimitExceeded
from pellgraphs.options import set_options
from pellgraphs.seq import FormulaError, exact_div
from pellgraphs.verify import (
    CHECKS,
    Check,
    GraphCache,
    ReportEntry,
    VerificationReport,
    compare,
    run_checks,
)


def test_check_base_class():
    check = Check(3, GraphCache())

    assert list(check.orders) == [1, 2, 3]
    with pytest.raises(NotImplementedError):
        check.run()

    class DummyCheck(Check):
        name = "dummy"
        min_n = 2

        def run_n(self, n):
            return [ReportEntry(self.name, n, None, n, n)]

    entries = DummyCheck(4, GraphCache()).run()
    assert [e.n for e in entries] == [2, 3, 4]
    assert all(e.passed for e in entries)


def test_report_entry_json():
    entry = ReportEntry("convolution-displayed", 4, 4, 29, 1, informational=True)

    assert entry.to_json() == {
        "check": "convolution-displayed",
        "n": 4,
        "i": 4,
        "expected": 29,
        "actual": 1,
        "pass": False,
        "informational": True,
    }


def test_report_ignores_informational_entries():
    report = VerificationReport()
    report.add("convolution", [ReportEntry("convolution-displayed", 4, 4, 29, 1, True)], 0.0)

    assert report.ok
    assert report.counts() == {"passed": 0, "failed": 0, "informational": 1}

    report.add("irr", [ReportEntry("irr", 2, None, 4, 5)], 0.0)
    assert not report.ok
    assert "FAIL" in report.summary()


def test_run_checks_irr():
    report = run_checks(3, ["irr"], threads=1)

    assert report.ok
    assert ReportEntry("irr", 2, None, 4, 4) in report.entries
    assert [json.loads(line)["n"] for line in report.ndjson()] == [1, 1, 2, 2, 3, 3]


def test_run_checks_smallest():
    report = run_checks(1, threads=1)

    assert report.ok
    assert set(report.timings) == set(CHECKS)


@pytest.mark.parametrize("threads", [1, 4])
def test_run_checks_all(threads):
    report = run_checks(6, threads=threads)

    assert report.ok, [e.to_json() for e in report.failures]
    assert report.counts()["failed"] == 0


def test_run_checks_deterministic():
    checks = ["histogram", "closed-form", "classify", "expansion"]
    first = list(run_checks(5, checks, threads=1, seed=3).ndjson())
    second = list(run_checks(5, checks, threads=3, seed=3).ndjson())

    assert first == second


def test_convolution_records_displayed_mismatch():
    report = run_checks(5, ["convolution"], threads=1)
    entries = {(e.check, e.n): e for e in report.entries}

    assert report.ok
    assert entries[("convolution", 4)].passed
    displayed = entries[("convolution-displayed", 4)]
    assert (displayed.expected, displayed.actual, displayed.informational) == (29, 1, True)


def test_closed_forms_below_four_are_informational():
    report = run_checks(4, ["closed-form"], threads=1)
    informational = {(e.n, e.i) for e in report.entries if e.informational}

    assert informational == {(1, 1), (2, 0), (2, 1), (2, 3)} | {(3, i) for i in range(5)}
    assert {(e.n, e.i) for e in report.entries if not e.informational} == {(4, i) for i in range(5)}
    assert all(e.passed for e in report.entries)


def test_formula_error_is_a_failed_entry():
    entry = compare("irr", 3, None, lambda: exact_div(7, 2, "irr_closed(n=3)"), 18)

    assert not entry.passed
    assert entry.expected is None
    assert entry.to_json()["error"] == "irr_closed(n=3): 7 is not divisible by 2"


def test_run_checks_reports_formula_error(monkeypatch):
    def broken(n):
        raise FormulaError(f"irr_closed(n={n}): evaluates to negative value -1")

    monkeypatch.setattr("pellgraphs.verify.irr_closed", broken)
    report = run_checks(3, ["irr"], threads=1)

    assert not report.ok
    assert [e.check for e in report.failures] == ["irr", "irr", "irr"]
    assert all("negative value" in e.error for e in report.failures)


def test_expansion_check_sample_size():
    report = run_checks(8, ["expansion"], threads=2)
    random_entries = [e for e in report.entries if e.check == "expansion"]

    assert len(random_entries) >= 200
    assert report.ok
    assert any(e.check == "expansion-example" and e.actual == 10 for e in report.entries)
    closed = [e for e in report.entries if e.check.endswith(("-printed", "-peripheral"))]
    assert closed and all(e.informational for e in closed)


def test_recognition_check():
    report = run_checks(4, ["recognition"], threads=2)
    entries = {(e.check, e.n): e for e in report.entries}

    assert report.ok
    assert entries[("recognition:cycle", 5)].actual == 0
    assert entries[("recognition:complete", 4)].actual == 0
    assert entries[("recognition-replay:Pi", 4)].actual == 1


def test_run_checks_errors():
    with pytest.raises(ValueError, match=r"unknown check"):
        run_checks(3, ["irr", "bogus"])

    with pytest.raises(ValueError, match=r"at least 1"):
        run_checks(0)

    with set_options(pell_build_limit=4):
        with pytest.raises(BuildLimitExceeded, match=r"max_n=5"):
            run_checks(5, ["irr"])
