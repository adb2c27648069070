"""
gevreyflow - Formal flows of evolution equations, their Gevrey growth, and
Laplace integrals of the Borel-summed heat series.
"""

__version__ = "0.1.0"

from .series import (
    MSeries,
    VSeries,
    TSeries,
    majorizes,
    format_coeff,
    parse_coeff,
    SeriesError,
    SeriesShapeError,
    NonInvertibleError,
    TruncationError,
)
from .problem import (
    ProblemSpec,
    parse_expr,
    format_expr,
    eval_field,
    eval_field_series,
    jet_order,
    ProblemError,
    ProblemSyntaxError,
    ProblemValidationError,
    ProblemBudgetError,
)
from .flow import (
    FlowResult,
    compute_flow,
    flow_recurrence,
    flow_linear_exp,
    closed_form_coeff,
    model_growth_coeffs,
    FlowError,
    NonLinearFieldError,
)
from .gevrey import (
    NormSeq,
    norm_sequence,
    estimate_order,
    min_R_for_s,
    borel_transform,
    cauchy_majorant,
    GevreyError,
    GevreyFitError,
)
from .borel import (
    PathSpec,
    QuadParams,
    LaplaceValue,
    borel_series_check,
    laplace_ray,
    flat_difference,
    winding_value,
    LaplaceError,
    PathError,
    QuadratureError,
    WindingMismatchError,
)
from .settings import Settings, SettingsFinder, SettingsError
from .registry import ProblemRegistry, DuplicateProblemError
from .steploop import StepLoop
from .checks import Check

__all__ = [
    "__version__",
    "MSeries",
    "VSeries",
    "TSeries",
    "majorizes",
    "format_coeff",
    "parse_coeff",
    "SeriesError",
    "SeriesShapeError",
    "NonInvertibleError",
    "TruncationError",
    "ProblemSpec",
    "parse_expr",
    "format_expr",
    "eval_field",
    "eval_field_series",
    "jet_order",
    "ProblemError",
    "ProblemSyntaxError",
    "ProblemValidationError",
    "ProblemBudgetError",
    "FlowResult",
    "compute_flow",
    "flow_recurrence",
    "flow_linear_exp",
    "closed_form_coeff",
    "model_growth_coeffs",
    "FlowError",
    "NonLinearFieldError",
    "NormSeq",
    "norm_sequence",
    "estimate_order",
    "min_R_for_s",
    "borel_transform",
    "cauchy_majorant",
    "GevreyError",
    "GevreyFitError",
    "PathSpec",
    "QuadParams",
    "LaplaceValue",
    "borel_series_check",
    "laplace_ray",
    "flat_difference",
    "winding_value",
    "LaplaceError",
    "PathError",
    "QuadratureError",
    "WindingMismatchError",
    "Settings",
    "SettingsFinder",
    "SettingsError",
    "ProblemRegistry",
    "DuplicateProblemError",
    "StepLoop",
    "Check",
]
