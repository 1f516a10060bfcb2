import re

from graphcfg import verify
from graphcfg.graph import load_fixture as real_load
from graphcfg.verify import VerifyResult, run_verify


def test_overall_is_conjunction():
    result = run_verify(["radial"])
    assert result.passed == all(c.passed for c in result.checks)
    assert result.checks and all(c.provenance in ("paper", "derived", "trivial") for c in result.checks)


def test_corrupted_fixture_is_named(monkeypatch):
    def corrupted(name):
        return real_load("star4" if name == "star3" else name)

    monkeypatch.setattr(verify, "load_fixture", corrupted)
    result = run_verify(["fixtures"])
    assert not result.passed
    failing = [c.name for c in result.checks if not c.passed]
    assert "star3 N=3 b1" in failing


def test_crashing_check_counts_as_failure():
    rec = verify._Recorder("demo")
    rec.check("boom", 1, lambda: 1 // 0, "trivial")
    assert not rec.checks[0].passed
    assert rec.checks[0].computed.startswith("error:")


def test_stable_table_has_no_timing():
    result = VerifyResult(verify.radial_checks())
    assert not re.search(r"\d\.\d\ds$", result.format_table(stable=True), re.M)
    assert re.search(r"\d\.\d\ds$", result.format_table(), re.M)
    assert result.to_dict(stable=True)["checks"][0].keys() >= {"expected", "computed", "provenance", "passed"}
