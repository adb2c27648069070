"""
Tests for the built-in demos.

Tests cover the embedded problem documents, step construction, dry runs and
full runs of every demo with all of its checks passing.
"""

import pytest

from gevreyflow.demos import DEMO_NAMES, DEMO_PROBLEMS, DEMOS, build_steps, run_demo
from gevreyflow.problem import ProblemBudgetError
from gevreyflow.settings import Settings


class TestDemoProblems:
    """The embedded problem registry."""

    def test_every_demo_has_a_problem(self):
        assert set(DEMO_NAMES) == set(DEMO_PROBLEMS)

    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_budgets_hold(self, name):
        DEMO_PROBLEMS.get_problem(name).check_budget()

    def test_jet_orders(self):
        orders = {name: DEMO_PROBLEMS.get_problem(name).s for name in DEMO_NAMES}
        assert orders["constant-field"] == 0
        assert orders["exponential"] == 0
        assert orders["kovalevskaia"] == 2
        assert orders["kdv"] == 3


class TestBuildSteps:
    """Step construction."""

    def test_linear_demo_gets_both_methods(self):
        problem = DEMO_PROBLEMS.get_problem("kovalevskaia")
        steps = build_steps(DEMOS["kovalevskaia"], problem, Settings())
        assert list(steps)[:2] == ["flow_recurrence", "flow_linear_exp"]
        assert "winding_once" in steps
        assert "gevrey_min_R" in steps

    def test_nonlinear_demo_skips_exponential(self):
        problem = DEMO_PROBLEMS.get_problem("kdv")
        steps = build_steps(DEMOS["kdv"], problem, Settings())
        assert "flow_linear_exp" not in steps
        assert "laplace_plus" not in steps


class TestRunDemo:
    """End-to-end demo runs."""

    def test_dry_run(self, capsys):
        report = run_demo("kdv", is_just_print=True)
        assert report["dry_run"] is True
        assert report["steps"][0] == "flow_recurrence"
        assert "NOTHING WAS COMPUTED" in capsys.readouterr().err

    @pytest.mark.parametrize("name", DEMO_NAMES)
    def test_checks_pass(self, name, capsys):
        report = run_demo(name, is_plain_text_print=True)
        checks = report["checks"]
        assert checks["total"] >= 1
        assert checks["failed"] == 0, checks["results"]
        assert checks["errors"] == 0, checks["results"]
        assert report["demo"] == name

    def test_kovalevskaia_report(self, capsys):
        report = run_demo("kovalevskaia")
        assert report["s"] == 2
        assert report["methods"] == ["recurrence", "linear_exp"]
        assert report["sequence"]["values"][:4] == ["1/1", "2/1", "12/1", "120/1"]
        assert report["minR_table"][0] == [1, "divergent"]
        assert report["laplace"]["borel_check"] is True
        assert "cross_check" in report["laplace"]["winding_1"]

    def test_budget_override_is_rejected(self):
        with pytest.raises(ProblemBudgetError):
            run_demo("kovalevskaia", trunc_deg=10)

    def test_order_override(self, capsys):
        report = run_demo("taylor-shift", order_t=5, trunc_deg=6)
        assert report["problem"]["order_t"] == 5
        assert report["checks"]["failed"] == 0
