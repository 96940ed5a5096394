"""The verify_suite operation: filtering, summaries, and the full-suite
exit-0 contract."""

import json

from feasilab.verification import CHECKS, verify_suite


def test_unknown_filter_is_an_error():
    code, summary = verify_suite("no-such-check", echo=lambda *_: None)
    assert code == 2


def test_single_check_summary():
    lines = []
    code, summary = verify_suite("fact-identities", echo=lines.append)
    assert code == 0
    assert len(lines) == 1 and lines[0].startswith("[PASS] fact-identities")
    assert summary["passed"] is True
    assert summary["checks"][0]["name"] == "fact-identities"
    json.dumps(summary)  # machine readable


def test_failure_is_named_and_nonzero(monkeypatch):
    def broken():
        raise RuntimeError("boom")

    monkeypatch.setitem(CHECKS, "fact-identities", broken)
    lines = []
    code, summary = verify_suite("fact-identities", echo=lines.append)
    assert code == 1
    assert lines[0].startswith("[FAIL] fact-identities")
    assert "boom" in summary["checks"][0]["details"]["error"]


def test_full_suite_exit_zero():
    code, summary = verify_suite(None, echo=lambda *_: None)
    failing = [c["name"] for c in summary["checks"] if not c["passed"]]
    assert code == 0, f"failing checks: {failing}"
    assert len(summary["checks"]) == len(CHECKS)
