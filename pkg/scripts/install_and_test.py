#!/usr/bin/env python3
"""
Install gevreyflow in development mode and smoke-test it end to end:
the package API on the heat equation, then the console script on a demo
and on a Laplace integral, then the test suite.
"""
import json
import math
import os
import subprocess
import sys
from fractions import Fraction

SMOKE_COMMANDS = [
    ("gevreyflow demo taylor-shift --plain-text", "Taylor-shift demo"),
    ("gevreyflow laplace --w 10,0 --path winding --winding 1", "winding Laplace integral"),
    ("gevreyflow borel-check --order-t 20", "central binomial identity"),
]


def run_command(cmd, description):
    """Run cmd and return its parsed JSON report, or None on a nonzero exit."""
    print(f"\n▶ {description}: {cmd}")
    result = subprocess.run(cmd, shell=True, capture_output=True, text=True)
    if result.returncode != 0:
        print(f"✗ exit code {result.returncode}")
        print(result.stderr.strip())
        return None
    try:
        report = json.loads(result.stdout) if result.stdout.strip() else {}
    except json.JSONDecodeError as e:
        print(f"✗ report is not JSON: {e}")
        return None
    print("✓ ok")
    return report


def check_heat_flow():
    """The heat flow at 1/(1-z) must give a_k = (2k)!/k! at the origin."""
    print("\n▶ heat flow through the package API")
    try:
        from gevreyflow import ProblemSpec, compute_flow, norm_sequence
    except ImportError as e:
        print(f"✗ Failed to import gevreyflow: {e}")
        return False

    problem = ProblemSpec.from_dict({
        "space_vars": ["z"],
        "components": ["u"],
        "field": ["D(u,[2])"],
        "initial": ["inv(1-z)"],
        "order_t": 6,
        "trunc_deg": 12,
    })
    values = norm_sequence(compute_flow(problem), mode="abs_at_origin").values
    expected = tuple(Fraction(math.factorial(2 * k), math.factorial(k)) for k in range(7))
    if values != expected:
        print(f"✗ got {[str(v) for v in values]}")
        return False
    print(f"✓ a_0..a_6 = {', '.join(str(v) for v in values)}")
    return True


def check_reports():
    for cmd, description in SMOKE_COMMANDS:
        report = run_command(cmd, description)
        if report is None:
            return False
        checks = report.get("checks")
        if checks and (checks.get("failed") or checks.get("errors")):
            print(f"✗ {description}: {checks}")
            return False
        if report.get("ok") is False:
            print(f"✗ {description} reported ok = false")
            return False
    return True


def main():
    print("=== gevreyflow install and smoke test ===")

    if not os.path.exists("gevreyflow/__init__.py"):
        print("✗ Run this script from the gevreyflow project root")
        sys.exit(1)

    install = subprocess.run("pip install -e .[dev]", shell=True, capture_output=True, text=True)
    if install.returncode != 0:
        print(f"✗ pip install failed:\n{install.stderr}")
        sys.exit(1)
    print("✓ installed in development mode")

    if not check_heat_flow() or not check_reports():
        sys.exit(1)

    tests = subprocess.run("python -m pytest tests/ -q", shell=True)
    print("\n✓ All tests passed!" if tests.returncode == 0 else "\n! Tests failed or pytest not available")
    sys.exit(tests.returncode)


if __name__ == "__main__":
    main()
