"""
gevrey - Growth diagnostics for flow coefficients.

A series sum a_k t^k is Gevrey of class s when sum a_k t^k / (k!)^(s-1) is
analytic, i.e. a_k <= C R^k (k!)^(s-1). Nothing about analyticity can be
decided from finitely many coefficients, so this module offers finite
surrogates: a least-squares estimate of s, the smallest R that satisfies the
bound on a window, and a heuristic flag for windows where no R will do.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .flow import FlowResult
from .series import MSeries, TSeries, format_coeff

NORM_MODES = ("at_origin", "abs_at_origin", "max_coeff")
R_GRID = 10 ** 6
DIVERGENCE_EXPONENT = 0.5
HEURISTIC_LABEL = (
    "heuristic: flagged when the required R grows strictly across the window "
    "with log-log growth exponent >= 0.5"
)


class GevreyError(Exception):
    """Base exception for growth analysis."""
    pass


class GevreyFitError(GevreyError):
    """Raised when a sequence cannot support the requested fit or norm."""
    pass


Window = Tuple[int, int]


@dataclass(frozen=True)
class NormSeq:
    values: Tuple[Fraction, ...]
    mode: str
    degree: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise GevreyError("Norm sequences must be nonnegative")

    @property
    def order_t(self) -> int:
        return len(self.values) - 1

    def to_frame(self) -> pd.DataFrame:
        """Plot-ready table: k, float value and exact value."""
        return pd.DataFrame({
            "k": list(range(len(self.values))),
            "a_k": [float(v) for v in self.values],
            "exact": [format_coeff(v) for v in self.values],
        })

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"mode": self.mode, "values": [format_coeff(v) for v in self.values]}
        if self.degree is not None:
            out["degree"] = self.degree
        return out


@dataclass(frozen=True)
class GevreyEstimate:
    s_hat: float
    R_hat: float
    c_hat: float
    window: Window
    residual: float
    points: int


@dataclass(frozen=True)
class MinRResult:
    s: int
    R: Fraction
    is_divergent: bool
    window: Window
    required: Tuple[Tuple[int, Fraction], ...]
    growth_exponent: Optional[float]

    def report_value(self) -> str:
        return "divergent" if self.is_divergent else format_coeff(self.R)


@dataclass(frozen=True)
class CauchyMajorant:
    """The comparison series A / (B - z)."""

    A: Fraction
    B: Fraction

    def expansion(self, trunc_deg: int) -> MSeries:
        denominator = MSeries(1, trunc_deg, {(0,): self.B, (1,): -1})
        return denominator.invert().scale(self.A)


def log_fraction(value: Fraction) -> float:
    """Natural log of a positive rational without overflowing to float first."""
    value = Fraction(value)
    if value <= 0:
        raise GevreyFitError(f"log of a nonpositive value {value}")
    return math.log(value.numerator) - math.log(value.denominator)


def norm_sequence(
    source: Union[FlowResult, TSeries],
    *,
    mode: str = "abs_at_origin",
    degree: Optional[int] = None,
) -> NormSeq:
    """
    Reduce each t-coefficient v_k to one nonnegative rational.

    at_origin     |psi(v_k)(0)|
    abs_at_origin psi(abs v_k)(0)
    max_coeff     max |coefficient| of psi(v_k) over degrees <= degree
    """
    series = source.series if isinstance(source, FlowResult) else source
    if mode not in NORM_MODES:
        raise GevreyError(f"Unknown norm mode '{mode}'. Expected one of: {', '.join(NORM_MODES)}")
    origin = (0,) * series.nvars
    values: List[Fraction] = []
    for k, v in enumerate(series):
        if mode == "at_origin":
            values.append(abs(v.component_sum().coeff_at(origin)))
        elif mode == "abs_at_origin":
            values.append(v.abs_series().component_sum().coeff_at(origin))
        else:
            if degree is None:
                raise GevreyError("max_coeff mode needs a degree")
            if degree > v.trunc_deg:
                raise GevreyFitError(
                    f"Degree {degree} exceeds the valid degree {v.trunc_deg} of v_{k}"
                )
            values.append(max(
                (abs(c) for idx, c in v.component_sum().items() if sum(idx) <= degree),
                default=Fraction(0),
            ))
    return NormSeq(tuple(values), mode, degree if mode == "max_coeff" else None)


def _resolve_window(seq: NormSeq, window: Optional[Window]) -> Window:
    if window is None:
        window = (1, seq.order_t)
    k_min, k_max = int(window[0]), int(window[1])
    if k_min < 1 or k_max > seq.order_t or k_min >= k_max:
        raise GevreyFitError(
            f"Window {k_min}:{k_max} must satisfy 1 <= k_min < k_max <= {seq.order_t}"
        )
    return k_min, k_max


def estimate_order(seq: NormSeq, window: Optional[Window] = None) -> GevreyEstimate:
    """
    Least-squares fit of a_k ~ C R^k (k!)^(s-1) over the window.

    Consecutive nonzero entries k < k' give one point
    x = (ln k'! - ln k!) / (k' - k), y = ln(a_k' / a_k) / (k' - k)
    on the line y = (s - 1) x + ln R. With no zeros this is the fit of
    ln(a_{k+1}/a_k) against ln(k+1). Zeros (for instance from parity) are
    skipped; at least three nonzero entries are needed.
    """
    k_min, k_max = _resolve_window(seq, window)
    nonzero = [k for k in range(k_min, k_max + 1) if seq.values[k] > 0]
    if len(nonzero) < 3:
        raise GevreyFitError(
            f"Only {len(nonzero)} nonzero values in window {k_min}:{k_max}; need at least 3 "
            "(flat or terminating series?)"
        )

    logs = {k: log_fraction(seq.values[k]) for k in nonzero}
    xs, ys = [], []
    for k, k_next in zip(nonzero, nonzero[1:]):
        gap = k_next - k
        xs.append((math.lgamma(k_next + 1) - math.lgamma(k + 1)) / gap)
        ys.append((logs[k_next] - logs[k]) / gap)

    x = np.array(xs)
    y = np.array(ys)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    residual = float(np.sqrt(np.mean((y - fitted) ** 2)))

    log_c = np.mean([logs[k] - k * intercept - slope * math.lgamma(k + 1) for k in nonzero])
    return GevreyEstimate(
        s_hat=float(1.0 + slope),
        R_hat=float(math.exp(intercept)),
        c_hat=float(math.exp(log_c)),
        window=(k_min, k_max),
        residual=residual,
        points=len(xs),
    )


def _kth_root_upper(value: Fraction, k: int) -> Fraction:
    """Smallest multiple r of 1/R_GRID with r^k >= value (exact check)."""
    if value <= 0:
        return Fraction(0)
    exponent = log_fraction(value) / k + math.log(R_GRID)
    hi = max(1, int(math.exp(min(exponent, 700.0))) + 1)
    target_num = value.numerator * R_GRID ** k
    target_den = value.denominator

    def covers(candidate: int) -> bool:
        return candidate ** k * target_den >= target_num

    while not covers(hi):
        hi *= 2
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if covers(mid):
            hi = mid
        else:
            lo = mid
    return Fraction(hi, R_GRID)


def min_R_for_s(seq: NormSeq, s: int, window: Optional[Window] = None) -> MinRResult:
    """
    Smallest R (to 1e-6, rounded up) with a_k <= (k!)^(s-1) R^k on the window.

    The divergence flag is heuristic: the per-k required R must increase
    strictly over the nonzero entries and grow at least like k^0.5 in a
    log-log fit. A bound that saturates (such as C(2k,k)^(1/k) -> 4) is not
    flagged; a factorial deficit (required R ~ k) is.
    """
    if s < 1:
        raise GevreyError(f"s must be a positive integer (got {s})")
    k_min, k_max = _resolve_window(seq, window)
    required: List[Tuple[int, Fraction]] = []
    for k in range(k_min, k_max + 1):
        scaled = seq.values[k] / Fraction(math.factorial(k)) ** (s - 1)
        if scaled > 0:
            required.append((k, _kth_root_upper(scaled, k)))

    R = max((r for _, r in required), default=Fraction(0))
    growth: Optional[float] = None
    is_divergent = False
    if len(required) >= 3:
        ks = np.array([math.log(k) for k, _ in required])
        rs = np.array([math.log(float(r)) for _, r in required])
        growth = float(np.polyfit(ks, rs, 1)[0])
        increasing = all(b[1] > a[1] for a, b in zip(required, required[1:]))
        is_divergent = increasing and growth >= DIVERGENCE_EXPONENT

    return MinRResult(
        s=s,
        R=R,
        is_divergent=is_divergent,
        window=(k_min, k_max),
        required=tuple(required),
        growth_exponent=growth,
    )


def gevrey_bound_holds(seq: NormSeq, s: int, R: Fraction, window: Optional[Window] = None) -> bool:
    """Exact check of a_k <= (k!)^(s-1) R^k for every k in the window."""
    k_min, k_max = _resolve_window(seq, window)
    R = Fraction(R)
    return all(
        seq.values[k] <= Fraction(math.factorial(k)) ** (s - 1) * R ** k
        for k in range(k_min, k_max + 1)
    )


def borel_transform(seq: NormSeq, s: int) -> NormSeq:
    """b_k = a_k / (k!)^(s-1)."""
    if s < 1:
        raise GevreyError(f"s must be a positive integer (got {s})")
    return NormSeq(
        tuple(v / Fraction(math.factorial(k)) ** (s - 1) for k, v in enumerate(seq.values)),
        seq.mode,
        seq.degree,
    )


def cauchy_majorant(u: MSeries, B: Union[int, Fraction]) -> CauchyMajorant:
    """Minimal A with |u_n| <= A B^-(n+1) for all computed n, so that A/(B-z) majorizes u."""
    if u.nvars != 1:
        raise GevreyError(f"cauchy_majorant needs a univariate series (got {u.nvars} variables)")
    B = Fraction(B)
    if B <= 0:
        raise GevreyError(f"B must be positive (got {B})")
    A = max((abs(c) * B ** (idx[0] + 1) for idx, c in u.items()), default=Fraction(0))
    return CauchyMajorant(A=A, B=B)


def sequence_table(seq: NormSeq, results: Sequence[MinRResult]) -> pd.DataFrame:
    """Side-by-side table of a_k and the required R_k for each s, for console display."""
    frame = seq.to_frame()[["k", "a_k"]]
    for result in results:
        lookup = dict(result.required)
        frame[f"R_k(s={result.s})"] = [float(lookup[k]) if k in lookup else None for k in frame["k"]]
    return frame
