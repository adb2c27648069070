"""
Check - Post-run verifications for the demos.

Checks run after a demo's steps: they complain loudly but never raise.
A check is a single subclass with a title, the demo it belongs to and a
static run(context) returning True or a failure message.
"""

import sys
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, TextIO, Union


class Check(ABC):
    """
    Child classes must implement:
    - title: str
    - demo: str (the demo name the check belongs to)
    - run(context) -> True | str (static method)
    """

    title: str = "Unnamed check"
    demo: str = ""

    @staticmethod
    @abstractmethod
    def run(context: Dict[str, Any]) -> Union[bool, str]:
        pass

    @staticmethod
    def ansi_green(text: str) -> str:
        return f"\033[92m{text}\033[0m"

    @staticmethod
    def ansi_red(text: str) -> str:
        return f"\033[91m{text}\033[0m"

    @staticmethod
    def _discover(demo: str) -> List[type]:
        found, pending = [], list(Check.__subclasses__())
        while pending:
            cls = pending.pop(0)
            pending.extend(cls.__subclasses__())
            if getattr(cls, "demo", "") == demo:
                found.append(cls)
        return found

    @staticmethod
    def run_all(
        *,
        context: Dict[str, Any],
        demo: str,
        is_plain_text_print: bool = False,
        stream: Optional[TextIO] = None,
    ) -> Dict[str, Any]:
        """
        Discover and run every Check subclass registered for demo.

        Args:
            context: Results of the demo's step loop.
            demo: Demo name used to select checks.
            is_plain_text_print: If True, no colours or emoji are printed.
            stream: Where narration is written. Defaults to sys.stderr.

        Returns:
            {"passed", "failed", "errors", "total", "results"}
        """
        out = sys.stderr if stream is None else stream
        green = (lambda s: s) if is_plain_text_print else Check.ansi_green
        red = (lambda s: s) if is_plain_text_print else Check.ansi_red
        pass_mark, fail_mark, error_mark = (
            ("PASS", "FAIL", "ERROR") if is_plain_text_print else ("✅ PASS", "❌ FAIL", "💥 ERROR")
        )

        print("===== CHECKS =====", file=out)
        checks = Check._discover(demo)
        if not checks:
            print("No checks found.", file=out)
            return {"passed": 0, "failed": 0, "errors": 0, "total": 0, "results": []}

        passed = failed = errors = 0
        results = []
        for check_class in checks:
            title = getattr(check_class, "title", check_class.__name__)
            print(f"{'>' if is_plain_text_print else '▶'} Running: {title}", file=out)
            try:
                outcome = check_class.run(context)
                if outcome is True:
                    print(green(pass_mark), file=out)
                    passed += 1
                    results.append({"check": title, "status": "PASS", "message": None})
                elif isinstance(outcome, str):
                    print(red(f"{fail_mark}: {outcome}"), file=out)
                    failed += 1
                    results.append({"check": title, "status": "FAIL", "message": outcome})
                else:
                    message = f"Invalid return type from check: {type(outcome)}. Expected True or str."
                    print(red(f"{error_mark}: {message}"), file=out)
                    errors += 1
                    results.append({"check": title, "status": "ERROR", "message": message})
            except Exception as e:
                message = f"Exception in check: {e}"
                print(red(f"{error_mark}: {message}"), file=out)
                errors += 1
                results.append({"check": title, "status": "ERROR", "message": message})

        print("=" * 44, file=out)
        parts = []
        if passed:
            parts.append(f"{passed} passed")
        if failed:
            parts.append(f"{failed} failed")
        if errors:
            parts.append(f"{errors} errors")
        separator = " - " if is_plain_text_print else " · "
        print("Summary: " + separator.join(parts), file=out)

        return {
            "passed": passed,
            "failed": failed,
            "errors": errors,
            "total": len(checks),
            "results": results,
        }
