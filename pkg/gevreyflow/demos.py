"""
demos - Built-in worked examples, run end to end through the step loop.

Every demo is an embedded problem document plus the growth and Laplace steps
that make sense for it, followed by its post-run checks.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, TextIO, Tuple

from .borel import (
    PathSpec,
    QuadParams,
    borel_series_check,
    flat_difference,
    flat_difference_closed_form,
    laplace_ray,
    winding_value,
)
from .checks import Check
from .flow import FlowResult, closed_form_flow, compute_flow
from .gevrey import (
    HEURISTIC_LABEL,
    NormSeq,
    estimate_order,
    min_R_for_s,
    norm_sequence,
    sequence_table,
)
from .problem import is_linear_field
from .registry import ProblemRegistry
from .series import format_coeff
from .settings import Settings
from .steploop import StepLoop


def _problem(field, initial, order_t, trunc_deg, *, space_vars=("z",), components=("u",)):
    return {
        "space_vars": list(space_vars),
        "components": list(components),
        "field": list(field),
        "initial": list(initial),
        "order_t": order_t,
        "trunc_deg": trunc_deg,
    }


DEMO_PROBLEMS = ProblemRegistry({
    "taylor-shift": _problem(["D(u,[1])"], ["z^3"], 3, 3),
    "constant-field": _problem(["1"], ["z"], 3, 1),
    "exponential": _problem(["u"], ["1"], 12, 0),
    "burgers-second-order": _problem(["u*D(u,[1])"], ["inv(1-z)"], 2, 10),
    "closed-form": _problem(["inv(1-z)*D(u,[2])"], ["inv(1-z)"], 8, 25),
    "kovalevskaia": _problem(["D(u,[2])"], ["inv(1-z)"], 12, 24),
    "kdv": _problem(["D(u,[3]) + u*D(u,[1])"], ["inv(1-z^2)"], 12, 50),
})


@dataclass(frozen=True)
class Demo:
    name: str
    title: str
    gevrey_s: Tuple[int, ...] = ()
    window: Optional[Tuple[int, int]] = None
    laplace_w: Optional[float] = None


DEMOS: Dict[str, Demo] = {
    demo.name: demo
    for demo in (
        Demo("taylor-shift", "Translation flow of z^3"),
        Demo("constant-field", "Constant field, s = 0"),
        Demo("exponential", "Linear ODE x' = x"),
        Demo("burgers-second-order", "Second-order coefficient of u_t = u u_z"),
        Demo("closed-form", "Closed form for inv(1-z) * u_zz", gevrey_s=(1, 2), window=(4, 8)),
        Demo("kovalevskaia", "Heat equation at 1/(1-z)", gevrey_s=(1, 2), window=(6, 12), laplace_w=10.0),
        Demo("kdv", "KdV at 1/(1-z^2)", gevrey_s=(2, 3), window=(5, 12)),
    )
}

DEMO_NAMES = tuple(DEMOS)


def _flow_steps(problem) -> Dict[str, Callable[[Dict[str, Any]], Any]]:
    steps: Dict[str, Callable[[Dict[str, Any]], Any]] = {
        "flow_recurrence": lambda r: compute_flow(problem, method="recurrence"),
    }
    if all(is_linear_field(e) for e in problem.field):
        steps["flow_linear_exp"] = lambda r: compute_flow(problem, method="linear_exp")
    return steps


def build_steps(demo: Demo, problem, settings: Settings) -> Dict[str, Callable[[Dict[str, Any]], Any]]:
    steps = _flow_steps(problem)
    degree = None
    if settings.mode == "max_coeff":
        degree = problem.trunc_deg - problem.s * problem.order_t
    steps["norm_sequence"] = lambda r: norm_sequence(r["flow_recurrence"], mode=settings.mode, degree=degree)
    steps["norm_table"] = lambda r: r["norm_sequence"].to_frame()

    if demo.gevrey_s:
        window = settings.window or demo.window
        steps["gevrey_fit"] = lambda r: estimate_order(r["norm_sequence"], window)
        steps["gevrey_min_R"] = lambda r: [min_R_for_s(r["norm_sequence"], s, window) for s in demo.gevrey_s]
        steps["gevrey_table"] = lambda r: sequence_table(r["norm_sequence"], r["gevrey_min_R"])

    if demo.laplace_w is not None:
        params = QuadParams(rel_tol=settings.rel_tol, max_subdiv=settings.max_subdiv)
        w = demo.laplace_w
        steps["borel_check"] = lambda r: borel_series_check(problem.order_t)
        steps["laplace_flat"] = lambda r: flat_difference(w, params)
        steps["laplace_plus"] = lambda r: laplace_ray(w, PathSpec.plus(), params)
        steps["laplace_minus"] = lambda r: laplace_ray(w, PathSpec.minus(), params)
        steps["winding_once"] = lambda r: winding_value(w, 1, params)
    return steps


def summarize(demo: Demo, problem, results: Dict[str, Any], checks: Dict[str, Any]) -> Dict[str, Any]:
    """Deterministic JSON summary of one demo run."""
    flow: FlowResult = results["flow_recurrence"]
    seq: NormSeq = results["norm_sequence"]
    summary: Dict[str, Any] = {
        "demo": demo.name,
        "title": demo.title,
        "problem": problem.to_dict(),
        "s": problem.s,
        "valid_degrees": list(flow.valid_degrees),
        "methods": ["recurrence"] + (["linear_exp"] if "flow_linear_exp" in results else []),
        "sequence": seq.to_dict(),
        "checks": {key: checks[key] for key in ("passed", "failed", "errors", "total", "results")},
    }
    if "gevrey_fit" in results:
        fit = results["gevrey_fit"]
        summary["fit"] = {
            "s_hat": fit.s_hat,
            "R_hat": fit.R_hat,
            "c_hat": fit.c_hat,
            "residual": fit.residual,
            "window": list(fit.window),
        }
        summary["minR_table"] = [[m.s, m.report_value()] for m in results["gevrey_min_R"]]
        summary["heuristic"] = HEURISTIC_LABEL
    if "laplace_flat" in results:
        summary["laplace"] = {
            "w": [demo.laplace_w, 0.0],
            "borel_check": results["borel_check"],
            "flat": results["laplace_flat"].to_dict(),
            "plus": results["laplace_plus"].to_dict(),
            "minus": results["laplace_minus"].to_dict(),
            "winding_1": results["winding_once"].to_dict(),
        }
    return summary


def run_demo(
    name: str,
    *,
    settings: Settings = Settings(),
    order_t: Optional[int] = None,
    trunc_deg: Optional[int] = None,
    is_just_print: bool = False,
    is_plain_text_print: bool = False,
    stream: Optional[TextIO] = None,
) -> Dict[str, Any]:
    """
    Run a named demo and return its summary.

    In dry-run mode the steps are only listed and the summary holds the
    problem and the step names.
    """
    problem = DEMO_PROBLEMS.get_problem(name, order_t=order_t, trunc_deg=trunc_deg)
    problem.check_budget()
    demo = DEMOS[name]
    steps = build_steps(demo, problem, settings)
    results = StepLoop.run_step_loop(
        steps,
        is_just_print=is_just_print,
        is_plain_text_print=is_plain_text_print,
        stream=stream,
    )
    if is_just_print:
        return {"demo": name, "problem": problem.to_dict(), "steps": list(steps), "dry_run": True}
    checks = Check.run_all(context=results, demo=name, is_plain_text_print=is_plain_text_print, stream=stream)
    return summarize(demo, problem, results, checks)


# ----- checks ----------------------------------------------------------------

def _rel_close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


class MethodsAgree(Check):
    title = "Recurrence and exponential flows agree exactly"

    @staticmethod
    def run(context):
        if "flow_linear_exp" not in context:
            return "Field is not linear; no exponential flow was computed"
        if context["flow_recurrence"].series != context["flow_linear_exp"].series:
            return "The two flows differ"
        return True


class TaylorShiftMethodsAgree(MethodsAgree):
    demo = "taylor-shift"


class ExponentialMethodsAgree(MethodsAgree):
    demo = "exponential"


class ClosedFormMethodsAgree(MethodsAgree):
    demo = "closed-form"


class KovalevskaiaMethodsAgree(MethodsAgree):
    demo = "kovalevskaia"


class TaylorShiftBinomial(Check):
    title = "Flow of z^3 is the binomial expansion of (z+t)^3"
    demo = "taylor-shift"

    @staticmethod
    def run(context):
        series = context["flow_recurrence"].series
        for k, v in enumerate(series):
            expected = {(3 - k,): Fraction(math.comb(3, k))} if k <= 3 else {}
            if dict(v[0].terms) != expected:
                return f"v_{k} = {v[0]!r}, expected {math.comb(3, k)} z^{3 - k}"
        return True


class ConstantFieldLine(Check):
    title = "Constant field gives u = z + t"
    demo = "constant-field"

    @staticmethod
    def run(context):
        series = context["flow_recurrence"].series
        if dict(series[0][0].terms) != {(1,): 1} or dict(series[1][0].terms) != {(0,): 1}:
            return "v_0 or v_1 is wrong"
        late = [k for k in range(2, len(series)) if not series[k][0].is_zero()]
        return True if not late else f"v_k is nonzero for k = {late}"


class ExponentialFactorials(Check):
    title = "x' = x gives coefficients 1/k!"
    demo = "exponential"

    @staticmethod
    def run(context):
        for k, v in enumerate(context["flow_recurrence"].series):
            if v[0].constant_term() != Fraction(1, math.factorial(k)):
                return f"v_{k} = {format_coeff(v[0].constant_term())}"
        return True


class BurgersSecondOrder(Check):
    title = "v_2 = (2 u0 u0'^2 + u0^2 u0'') / 2"
    demo = "burgers-second-order"

    @staticmethod
    def run(context):
        flow = context["flow_recurrence"]
        u0 = flow.series[0][0]
        d1 = u0.derive(0)
        d2 = d1.derive(0)
        expected = (u0 * d1 * d1 * 2 + u0 * u0 * d2).scale(Fraction(1, 2))
        if flow.series[2][0] != expected:
            return f"v_2 = {flow.series[2][0]!r}, expected {expected!r}"
        return True


class ClosedFormMatches(Check):
    title = "Flow matches u_j t^j (1-z)^-(3j+1)"
    demo = "closed-form"

    @staticmethod
    def run(context):
        flow = context["flow_recurrence"]
        problem = flow.problem
        expected = closed_form_flow(2, problem.order_t, problem.trunc_deg)
        return True if flow.series == expected else "Flow differs from the closed form"


class ClosedFormOrder(Check):
    title = "Estimated Gevrey order is close to 2"
    demo = "closed-form"

    @staticmethod
    def run(context):
        s_hat = context["gevrey_fit"].s_hat
        return True if abs(s_hat - 2) <= 0.5 else f"s_hat = {s_hat:.3f}"


class KovalevskaiaSequence(Check):
    title = "Heat sequence equals (2k)!/k!"
    demo = "kovalevskaia"

    @staticmethod
    def run(context):
        seq = context["norm_sequence"]
        if seq.mode == "max_coeff":
            return "Sequence identity is stated for the value at the origin"
        for k, value in enumerate(seq.values):
            expected = Fraction(math.factorial(2 * k), math.factorial(k))
            if value != expected:
                return f"a_{k} = {format_coeff(value)}, expected {format_coeff(expected)}"
        return True


class KovalevskaiaGevreyTwo(Check):
    title = "Heat flow is Gevrey 2 and not analytic"
    demo = "kovalevskaia"

    @staticmethod
    def run(context):
        rows = {m.s: m for m in context["gevrey_min_R"]}
        if not rows[1].is_divergent:
            return "s = 1 was not flagged divergent"
        if rows[2].is_divergent or not 3.0 <= rows[2].R <= 4.5:
            return f"min R for s = 2 is {float(rows[2].R):.6f} (divergent={rows[2].is_divergent})"
        return True


class KovalevskaiaLaplace(Check):
    title = "Flat function, ray difference and winding agree"
    demo = "kovalevskaia"

    @staticmethod
    def run(context):
        flat = context["laplace_flat"].value
        closed = flat_difference_closed_form(10.0)
        if not _rel_close(flat, closed, 1e-8):
            return f"a(10) = {flat}, closed form {closed}"
        jump = context["laplace_minus"].value - context["laplace_plus"].value
        if not _rel_close(jump, 2 * flat, 1e-8):
            return f"f- - f+ = {jump}, expected {2 * flat}"
        expected = context["laplace_plus"].value + 2 * flat
        if not _rel_close(context["winding_once"].value, expected, 1e-7):
            return "Winding value differs from f+ + 2a"
        if context["borel_check"] is not True:
            return "Borel coefficients do not match (1 - 4 xi)^(-1/2)"
        return True


class KdvGevreyThree(Check):
    title = "KdV flow looks Gevrey 3 and not Gevrey 2"
    demo = "kdv"

    @staticmethod
    def run(context):
        s_hat = context["gevrey_fit"].s_hat
        if not 2.5 <= s_hat <= 3.5:
            return f"s_hat = {s_hat:.3f}"
        rows = {m.s: m for m in context["gevrey_min_R"]}
        if rows[3].is_divergent:
            return "s = 3 was flagged divergent"
        if not rows[2].is_divergent:
            return "s = 2 was not flagged divergent"
        return True
