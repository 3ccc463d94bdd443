import pytest

from shell_averages.shared.errors import CapacityError
from shell_averages.verification import CHECKS, CheckResult, run_verification


def test_check_result_caps_listed_failures():
    result = CheckResult("demo", "demo check")
    for index in range(25):
        result.record(index % 2 == 0, f"case {index}")
    assert result.cases == 25
    assert result.failure_count == 12
    assert len(result.failures) == 10
    assert not result.passed


def test_small_run_passes():
    report = run_verification(max_ell=1, max_n=3, progress=False)
    failed = {check.name: check.failures for check in report.checks if not check.passed}
    assert failed == {}
    assert [check.name for check in report.checks] == [name for name, _, _ in CHECKS]
    assert all(check.cases > 0 for check in report.checks)


def test_report_json_has_no_timing_by_default():
    data = run_verification(max_ell=0, max_n=2, progress=False).to_json()
    assert data["summary"]["max_n"] == 2
    assert all("duration_seconds" not in check for check in data["checks"])
    assert data["summary"]["total_checks"] == len(CHECKS)


def test_unbounded_electron_count_is_reported_as_all():
    data = run_verification(max_ell=0, max_n=None, progress=False).to_json(with_timing=True)
    assert data["summary"]["max_n"] == "all"
    assert all("duration_seconds" in check for check in data["checks"])


def test_generating_cap_reaches_the_checks():
    with pytest.raises(CapacityError):
        run_verification(max_ell=0, max_n=1, progress=False, generating_cap=2)


def test_raised_generating_cap_admits_larger_shells():
    report = run_verification(max_ell=7, max_n=1, progress=False, generating_cap=8)
    assert report.passed, [check.name for check in report.checks if not check.passed]


@pytest.mark.slow
def test_default_run_passes():
    report = run_verification(progress=False)
    assert report.passed, [check.name for check in report.checks if not check.passed]
