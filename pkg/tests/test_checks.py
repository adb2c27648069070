"""
Tests for the Check base class.

Tests cover discovery by demo name, pass/fail/error reporting and the
summary line.
"""

import pytest

from gevreyflow.checks import Check

DEMO = "check-unit-tests"


class PassingCheck(Check):
    title = "Always passes"
    demo = DEMO

    @staticmethod
    def run(context):
        return True


class FailingCheck(Check):
    title = "Fails when a_3 is too large"
    demo = DEMO

    @staticmethod
    def run(context):
        return True if context["a_3"] < 100 else f"a_3 = {context['a_3']}"


class BadReturnCheck(Check):
    title = "Returns a number"
    demo = DEMO

    @staticmethod
    def run(context):
        return 1


class RaisingCheck(Check):
    title = "Raises"
    demo = DEMO

    @staticmethod
    def run(context):
        raise KeyError("missing")


class OtherDemoCheck(Check):
    title = "Belongs elsewhere"
    demo = "another-demo"

    @staticmethod
    def run(context):
        return "should not run"


def test_run_all_counts(capsys):
    summary = Check.run_all(context={"a_3": 120}, demo=DEMO)

    captured = capsys.readouterr()
    assert summary["total"] == 4
    assert (summary["passed"], summary["failed"], summary["errors"]) == (1, 1, 2)
    assert "✅ PASS" in captured.err
    assert "❌ FAIL: a_3 = 120" in captured.err
    assert "💥 ERROR: Invalid return type" in captured.err
    assert "=" * 44 in captured.err
    assert "Summary: 1 passed · 1 failed · 2 errors" in captured.err
    assert "Belongs elsewhere" not in captured.err


def test_results_list():
    summary = Check.run_all(context={"a_3": 6}, demo=DEMO, is_plain_text_print=True)

    statuses = {r["check"]: r["status"] for r in summary["results"]}
    assert statuses == {
        "Always passes": "PASS",
        "Fails when a_3 is too large": "PASS",
        "Returns a number": "ERROR",
        "Raises": "ERROR",
    }


def test_plain_text(capsys):
    Check.run_all(context={"a_3": 120}, demo=DEMO, is_plain_text_print=True)

    captured = capsys.readouterr()
    assert "FAIL: a_3 = 120" in captured.err
    assert "\033[" not in captured.err
    assert "Summary: 1 passed - 1 failed - 2 errors" in captured.err


def test_no_checks(capsys):
    summary = Check.run_all(context={}, demo="nothing-registered")

    assert summary["total"] == 0
    assert "No checks found." in capsys.readouterr().err


def test_abstract_class():
    with pytest.raises(TypeError):
        Check()


def test_ansi_colors():
    assert Check.ansi_green("ok") == "\033[92mok\033[0m"
    assert Check.ansi_red("no") == "\033[91mno\033[0m"
