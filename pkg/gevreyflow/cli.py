"""
Command-line front end.

    gevreyflow flow --problem heat.json
    gevreyflow gevrey --coeffs flow.json --mode abs_at_origin --s 2 --window 5:15
    gevreyflow borel-check --order-t 20
    gevreyflow laplace --w 10,0 --path winding --winding 1
    gevreyflow demo kovalevskaia

Reports are JSON on stdout (or --out). Narration and diagnostics go to stderr.
Exit codes: 0 success, 2 input errors, 3 numeric failures.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type

import numpy as np

from . import __version__
from .borel import (
    L_PLUS,
    PATH_KINDS,
    LaplaceError,
    PathError,
    PathSpec,
    QuadParams,
    QuadratureError,
    WindingMismatchError,
    borel_series_check,
    central_binomials,
    flat_difference,
    laplace_ray,
    winding_value,
)
from .demos import DEMO_NAMES, run_demo
from .flow import METHODS, FlowError, compute_flow
from .gevrey import (
    HEURISTIC_LABEL,
    NORM_MODES,
    GevreyError,
    estimate_order,
    min_R_for_s,
    norm_sequence,
    sequence_table,
)
from .problem import ProblemError, ProblemSpec, ProblemValidationError
from .series import SeriesError, TSeries, format_coeff
from .settings import Settings, SettingsError, SettingsFinder

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _read_json_object(path: str, error: Type[Exception], what: str) -> Dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise error(f"{path}: not valid UTF-8 at byte {e.start}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise error(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise error(f"{path}: a {what} file must hold a JSON object")
    return data


def load_problem(path: str, *, order_t: Optional[int] = None, trunc_deg: Optional[int] = None) -> ProblemSpec:
    """
    Read and validate a problem file.

    JSON errors are reported with line and column; the budget
    trunc_deg >= s * order_t is checked after any override.
    """
    data = _read_json_object(path, ProblemValidationError, "problem")
    problem = ProblemSpec.from_dict(data).with_overrides(order_t=order_t, trunc_deg=trunc_deg)
    problem.check_budget()
    return problem


def _load_series(path: str) -> TSeries:
    return TSeries.from_dict(_read_json_object(path, SeriesError, "coefficient"))


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def emit_report(result: Any, fmt: str = "json") -> bytes:
    """Sorted-key JSON with a trailing newline; identical inputs give identical bytes."""
    if fmt != "json":
        raise SettingsError(f"Unknown report format '{fmt}'")
    if hasattr(result, "to_dict"):
        result = result.to_dict()
    return (json.dumps(result, sort_keys=True, indent=2, default=_json_default) + "\n").encode("utf-8")


def parse_complex(text: str) -> complex:
    """'RE,IM' or 'RE' -> complex."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"'{text}' is not of the form RE,IM")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gevreyflow",
        description="Formal flows, Gevrey growth diagnostics and Laplace integrals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--verbose", action="store_true", help="narrate on stderr")
    common.add_argument("--plain-text", action="store_true", help="ASCII narration, no colours or emoji")
    common.add_argument("--env-file", default=".env", help="dotenv file with GEVREYFLOW_* settings")
    common.add_argument("--rel-tol", type=float, help="relative tolerance for quadrature")
    common.add_argument("--strict", action="store_const", const=True, help="divergence flags and failed checks exit 3")

    growth = argparse.ArgumentParser(add_help=False)
    growth.add_argument("--mode", choices=NORM_MODES)
    growth.add_argument("--window", help="k_min:k_max")

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--order-t", type=int, help="override order_t (K)")
    sizes.add_argument("--trunc-deg", type=int, help="override trunc_deg (D)")

    sub = parser.add_subparsers(dest="command", required=True)

    flow = sub.add_parser("flow", parents=[common, sizes], help="compute the formal flow of a problem")
    flow.add_argument("--problem", required=True)
    flow.add_argument("--method", choices=METHODS, default="recurrence")

    gevrey = sub.add_parser("gevrey", parents=[common, growth, sizes], help="growth report for flow coefficients")
    source = gevrey.add_mutually_exclusive_group(required=True)
    source.add_argument("--coeffs", help="TSeries JSON, e.g. the output of 'flow'")
    source.add_argument("--problem", help="problem file; the flow is computed first")
    gevrey.add_argument("--degree", type=int, help="degree bound for max_coeff")
    gevrey.add_argument("--s", type=int, default=2, help="tabulate min R for s = 1..S")

    borel = sub.add_parser("borel-check", parents=[common], help="central binomial identity")
    borel.add_argument("--order-t", type=int, default=20)

    laplace = sub.add_parser("laplace", parents=[common], help="Laplace integral of the heat Borel function")
    laplace.add_argument("--w", type=parse_complex, required=True, help="RE,IM")
    laplace.add_argument("--path", choices=PATH_KINDS, default="ray")
    laplace.add_argument("--angle", type=float, help="ray angle in radians (ray paths only; default pi/4)")
    laplace.add_argument("--winding", type=int, help="turns around xi = 1/4 (winding paths only)")
    laplace.add_argument("--max-subdiv", type=int)

    demo = sub.add_parser("demo", parents=[common, growth, sizes], help="run a built-in worked example")
    demo.add_argument("name", choices=DEMO_NAMES)
    demo.add_argument("--dry-run", action="store_true", help="list the steps without running them")

    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {
        "rel_tol": args.rel_tol,
        "strict": args.strict,
        "mode": getattr(args, "mode", None),
        "window": getattr(args, "window", None),
        "max_subdiv": getattr(args, "max_subdiv", None),
    }
    return SettingsFinder.detect_config(env_path=args.env_file, verbose=args.verbose, overrides=overrides)


def _cmd_flow(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    problem = load_problem(args.problem, order_t=args.order_t, trunc_deg=args.trunc_deg)
    result = compute_flow(problem, method=args.method)
    if args.verbose:
        print(f"[flow] s = {problem.s}, valid degrees {list(result.valid_degrees)}", file=sys.stderr)
    return result.to_dict()


def _cmd_gevrey(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    if args.s < 1:
        raise GevreyError(f"--s must be at least 1 (got {args.s})")
    if args.coeffs:
        series = _load_series(args.coeffs)
    else:
        problem = load_problem(args.problem, order_t=args.order_t, trunc_deg=args.trunc_deg)
        series = compute_flow(problem).series
    seq = norm_sequence(series, mode=settings.mode, degree=args.degree)
    fit = estimate_order(seq, settings.window)
    rows = [min_R_for_s(seq, s, fit.window) for s in range(1, args.s + 1)]
    if args.verbose:
        print(sequence_table(seq, rows).to_string(index=False), file=sys.stderr)
    frame = seq.to_frame()
    return {
        "mode": seq.mode,
        "window": list(fit.window),
        "s_hat": fit.s_hat,
        "R_hat": fit.R_hat,
        "c_hat": fit.c_hat,
        "residual": fit.residual,
        "minR_table": [[row.s, row.report_value()] for row in rows],
        "heuristic": HEURISTIC_LABEL,
        "sequence": {column: frame[column].tolist() for column in frame.columns},
        "_strict_failed": rows[-1].is_divergent,
    }


def _cmd_borel_check(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    ok = borel_series_check(args.order_t)
    return {
        "order_t": args.order_t,
        "ok": ok,
        "coefficients": [format_coeff(c) for c in central_binomials(args.order_t)],
        "_failed": not ok,
    }


def _cmd_laplace(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    params = QuadParams(rel_tol=settings.rel_tol, max_subdiv=settings.max_subdiv)
    w = args.w
    if args.angle is not None and args.path != "ray":
        raise PathError(f"--angle only applies to --path ray (got --path {args.path})")
    if args.winding is not None and args.path != "winding":
        raise PathError(f"--winding only applies to --path winding (got --path {args.path})")
    if args.path == "ray":
        angle = L_PLUS if args.angle is None else args.angle
        value = laplace_ray(w, PathSpec.ray(angle), params)
    elif args.path == "real_cut":
        value = flat_difference(w, params)
    else:
        value = winding_value(w, args.winding or 0, params)
    report = value.to_dict()
    report["w"] = [w.real, w.imag]
    return report


COMMANDS = {
    "flow": _cmd_flow,
    "gevrey": _cmd_gevrey,
    "borel-check": _cmd_borel_check,
    "laplace": _cmd_laplace,
}


def _write(report: Dict[str, Any], out: Optional[str]) -> None:
    data = emit_report(report)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    error_icon = "ERROR" if args.plain_text else "❌"
    try:
        settings = _settings(args)
        if args.command == "demo":
            report = run_demo(
                args.name,
                settings=settings,
                order_t=args.order_t,
                trunc_deg=args.trunc_deg,
                is_just_print=args.dry_run,
                is_plain_text_print=args.plain_text,
            )
            checks = report.get("checks", {})
            failed = bool(checks.get("failed") or checks.get("errors"))
        else:
            report = COMMANDS[args.command](args, settings)
            failed = bool(report.pop("_failed", False))
            if report.pop("_strict_failed", False) and settings.strict:
                failed = True
                print(f"{error_icon} Row s = {args.s} is flagged divergent ({HEURISTIC_LABEL})", file=sys.stderr)
        _write(report, args.out)
    except (QuadratureError, WindingMismatchError) as e:
        print(f"{error_icon} {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ProblemError, SeriesError, FlowError, GevreyError, SettingsError, LaplaceError, OSError) as e:
        print(f"{error_icon} {e}", file=sys.stderr)
        return EXIT_INPUT

    if failed and (args.command == "borel-check" or settings.strict):
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
