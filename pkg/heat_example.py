#!/usr/bin/env python3
"""
gevreyflow Heat Equation Example

Walks through the heat equation u_t = u_zz at u(0, z) = 1/(1 - z) with the
gevreyflow components:
- SettingsFinder for tolerances and the growth window
- ProblemRegistry for the problem document
- StepLoop for the computation steps
- Check for post-run verifications

Run this script to see the formal flow, its Gevrey growth and the Laplace
integrals of the Borel sum on both sides of the singular direction.
"""

from fractions import Fraction
from math import factorial

from gevreyflow import (
    Check,
    PathSpec,
    ProblemRegistry,
    QuadParams,
    SettingsFinder,
    StepLoop,
    compute_flow,
    estimate_order,
    flat_difference,
    laplace_ray,
    min_R_for_s,
    norm_sequence,
    winding_value,
)
from gevreyflow.gevrey import sequence_table


def main():
    print("=== gevreyflow Heat Equation Example ===")
    print("=" * 50)

    # Step 1: settings from the environment, a .env file or the defaults
    print("Step 1: Resolving settings...")
    settings = SettingsFinder.detect_config(verbose=True, overrides={"window": (6, 12)})
    params = QuadParams(rel_tol=settings.rel_tol, max_subdiv=settings.max_subdiv)

    # Step 2: the problem document
    print("\nStep 2: Registering the problem...")
    problems = ProblemRegistry({
        "heat": {
            "space_vars": ["z"],
            "components": ["u"],
            "field": ["D(u,[2])"],
            "initial": ["inv(1-z)"],
            "order_t": 12,
            "trunc_deg": 24,
        },
    })
    problem = problems.get_problem("heat")
    problem.check_budget()
    print(f"Jet order s = {problem.s}, K = {problem.order_t}, D = {problem.trunc_deg}")

    # Step 3: every computation as a named step
    print("\nStep 3: Running the steps...")
    w = 10.0
    steps = {
        "flow_recurrence": lambda r: compute_flow(problem),
        "norm_sequence": lambda r: norm_sequence(r["flow_recurrence"], mode=settings.mode),
        "norm_table": lambda r: r["norm_sequence"].to_frame(),
        "gevrey_fit": lambda r: estimate_order(r["norm_sequence"], settings.window),
        "gevrey_min_R": lambda r: [min_R_for_s(r["norm_sequence"], s, settings.window) for s in (1, 2)],
        "gevrey_table": lambda r: sequence_table(r["norm_sequence"], r["gevrey_min_R"]),
        "laplace_flat": lambda r: flat_difference(w, params),
        "laplace_plus": lambda r: laplace_ray(w, PathSpec.plus(), params),
        "laplace_minus": lambda r: laplace_ray(w, PathSpec.minus(), params),
        "winding_once": lambda r: winding_value(w, 1, params),
    }
    results = StepLoop.run_step_loop(steps, display_rows=13)

    fit = results["gevrey_fit"]
    print(f"\nEstimated order s = {fit.s_hat:.3f}, radius factor R = {fit.R_hat:.3f}")
    print(f"f+(10) = {results['laplace_plus'].value}")
    print(f"f-(10) = {results['laplace_minus'].value}")
    print(f"a(10)  = {results['laplace_flat'].value}")

    # Step 4: verifications
    print("\nStep 4: Checking the results...")

    class HeatSequence(Check):
        title = "Values at the origin are (2k)!/k!"
        demo = "heat-example"

        @staticmethod
        def run(context):
            for k, value in enumerate(context["norm_sequence"].values):
                if value != Fraction(factorial(2 * k), factorial(k)):
                    return f"a_{k} = {value}"
            return True

    class RaysDifferByTwiceTheFlatFunction(Check):
        title = "f- - f+ = 2 a(w)"
        demo = "heat-example"

        @staticmethod
        def run(context):
            jump = context["laplace_minus"].value - context["laplace_plus"].value
            expected = 2 * context["laplace_flat"].value
            if abs(jump - expected) <= 1e-8 * abs(expected):
                return True
            return f"f- - f+ = {jump}, expected {expected}"

    summary = Check.run_all(context=results, demo="heat-example")
    if summary["failed"] or summary["errors"]:
        print("❌ Some checks did not pass")
    else:
        print("✅ Heat example complete")


if __name__ == "__main__":
    main()
