"""
StepLoop - Runs an ordered mapping of named computation steps.

Each step is a callable taking the shared results dict; its return value is
stored under the step's name. Console narration goes to stderr so stdout
stays free for JSON reports.
"""

import datetime as dt
import sys
import time
from typing import Any, Callable, Dict, Mapping, Optional, TextIO

import human_readable
import pandas as pd

Step = Callable[[Dict[str, Any]], Any]

_STEP_KINDS = (
    ("flow", "🌊", "FLOW"),
    ("norm", "📏", "NORM"),
    ("gevrey", "📈", "GEVREY"),
    ("borel", "🧮", "BOREL"),
    ("laplace", "∫", "LAPLACE"),
    ("winding", "🌀", "WINDING"),
)


class StepLoop:
    """Loop-and-run over named steps, with a dry-run mode that only lists them."""

    @staticmethod
    def get_step_icon(step_name: str, *, is_plain_text: bool = False) -> str:
        """
        Icon for a step, chosen by the prefix of its name.

        Examples:
            >>> StepLoop.get_step_icon("flow_recurrence", is_plain_text=True)
            'FLOW'
            >>> StepLoop.get_step_icon("something_else")
            '▶'
        """
        lowered = step_name.strip().lower()
        for prefix, icon, text in _STEP_KINDS:
            if lowered.startswith(prefix):
                return text if is_plain_text else icon
        return "STEP" if is_plain_text else "▶"

    @staticmethod
    def run_step_loop(
        steps: Mapping[str, Step],
        *,
        is_just_print: bool = False,
        is_plain_text_print: bool = False,
        display_rows: int = 20,
        stream: Optional[TextIO] = None,
    ) -> Dict[str, Any]:
        """
        Execute steps in mapping order.

        Args:
            steps: Mapping of step names to callables. Each receives the
                results collected so far.
            is_just_print: If True, steps are listed but not run.
            is_plain_text_print: If True, ASCII words replace the icons.
            display_rows: Rows shown for steps that return a DataFrame.
            stream: Where narration is written. Defaults to sys.stderr.

        Returns:
            The results dict, keyed by step name. Empty in dry-run mode.

        Raises:
            Whatever the failing step raised, after an error block is printed.
        """
        out = sys.stderr if stream is None else stream

        if is_plain_text_print:
            start_icon, end_icon, warning_icon = "START", "END", "WARNING"
            time_icon, results_icon = "TIME", "RESULTS"
            error_icon, stop_icon = "ERROR", "STOP"
            dash_char = "-"
        else:
            start_icon, end_icon, warning_icon = "⏩", "⏪", "🟡"
            time_icon, results_icon = "⏱️", "📊"
            error_icon, stop_icon = "❌", "🛑"
            dash_char = "–"

        def say(message: str = "") -> None:
            print(message, file=out)

        if is_just_print:
            say(f"-- {start_icon} =====  DRY-RUN MODE {dash_char} NO STEP WILL BE RUN =====")
        else:
            say(f"-- {start_icon} =====  RUNNING STEP LOOP =====")

        results: Dict[str, Any] = {}
        total = len(steps)
        for position, (name, step) in enumerate(steps.items(), start=1):
            icon = StepLoop.get_step_icon(name, is_plain_text=is_plain_text_print)
            say(f"-- {icon} ({position} of {total}) {name}")
            if is_just_print:
                continue

            started = time.perf_counter()
            try:
                result = step(results)
            except Exception as e:
                line = "-" * 60
                say(f"-- {error_icon} Error in step {name}:\n-- Error Start {line}v\n-- \n-- {e}\n-- \n-- ^{line} Error End")
                say(f"-- {stop_icon} Step loop terminated due to error")
                raise
            elapsed = dt.timedelta(seconds=time.perf_counter() - started)
            say(f"-- {time_icon}  Step ran in: {human_readable.precise_delta(elapsed, minimum_unit='seconds')}")

            if isinstance(result, pd.DataFrame):
                shown = result.head(display_rows)
                say(f"-- {results_icon} {name} (showing {len(shown)} of {len(result)} rows):")
                say(shown.to_string(index=False))
            results[name] = result

        say(f"-- {end_icon} ===== STEP LOOP COMPLETE =====")
        if is_just_print:
            say(f"-- {warning_icon} ===== NOTHING WAS COMPUTED =====")
        return results
