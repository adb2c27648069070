"""
Tests for StepLoop.

Tests cover dry-run mode, execution mode, result passing between steps,
DataFrame display, plain text output and error propagation.
"""

import pandas as pd
import pytest

from gevreyflow.steploop import StepLoop


class TestStepLoopBasicFunctionality:
    """Test basic StepLoop functionality."""

    def setup_method(self):
        self.calls = []

        def first(results):
            self.calls.append("first")
            return 2

        def second(results):
            self.calls.append("second")
            return results["flow_first"] * 10

        self.steps = {"flow_first": first, "norm_second": second}

    def test_dry_run_mode(self, capsys):
        """Steps are listed but never called."""
        results = StepLoop.run_step_loop(self.steps, is_just_print=True)

        captured = capsys.readouterr()
        assert results == {}
        assert self.calls == []
        assert "⏩ =====  DRY-RUN MODE – NO STEP WILL BE RUN =====" in captured.err
        assert "🌊 (1 of 2) flow_first" in captured.err
        assert "📏 (2 of 2) norm_second" in captured.err
        assert "🟡 ===== NOTHING WAS COMPUTED =====" in captured.err
        assert captured.out == ""

    def test_execution_mode(self, capsys):
        """Each step sees the results of the steps before it."""
        results = StepLoop.run_step_loop(self.steps)

        captured = capsys.readouterr()
        assert results == {"flow_first": 2, "norm_second": 20}
        assert self.calls == ["first", "second"]
        assert "RUNNING STEP LOOP" in captured.err
        assert "Step ran in:" in captured.err
        assert "STEP LOOP COMPLETE" in captured.err

    def test_plain_text(self, capsys):
        StepLoop.run_step_loop(self.steps, is_just_print=True, is_plain_text_print=True)

        captured = capsys.readouterr()
        assert "-- START =====  DRY-RUN MODE - NO STEP WILL BE RUN =====" in captured.err
        assert "-- FLOW (1 of 2) flow_first" in captured.err
        assert "⏩" not in captured.err

    def test_dataframe_results_are_shown(self, capsys):
        frame = pd.DataFrame({"k": range(30), "a_k": [float(k) for k in range(30)]})
        StepLoop.run_step_loop({"norm_table": lambda r: frame}, display_rows=5)

        captured = capsys.readouterr()
        assert "norm_table (showing 5 of 30 rows):" in captured.err

    def test_error_propagation(self, capsys):
        def broken(results):
            raise ValueError("window too short")

        with pytest.raises(ValueError, match="window too short"):
            StepLoop.run_step_loop({"gevrey_fit": broken, "laplace_plus": lambda r: 1})

        captured = capsys.readouterr()
        assert "Error in step gevrey_fit" in captured.err
        assert "Step loop terminated due to error" in captured.err
        assert "(2 of 2)" not in captured.err


class TestStepIcons:
    """Icon lookup by step name prefix."""

    @pytest.mark.parametrize("name,icon,text", [
        ("flow_recurrence", "🌊", "FLOW"),
        ("norm_sequence", "📏", "NORM"),
        ("gevrey_min_R", "📈", "GEVREY"),
        ("borel_check", "🧮", "BOREL"),
        ("laplace_plus", "∫", "LAPLACE"),
        ("winding_once", "🌀", "WINDING"),
        ("something_else", "▶", "STEP"),
    ])
    def test_icons(self, name, icon, text):
        assert StepLoop.get_step_icon(name) == icon
        assert StepLoop.get_step_icon(name, is_plain_text=True) == text
