"""
flow - Formal flows of d_t u = f(z, u, d_z u, ...) to order K in t.

flow_recurrence is the general algorithm: v_0 = u_0 and
v_{k+1} = [t^k] f(v_0 + v_1 t + ... + v_k t^k) / (k + 1).
flow_linear_exp is the exponential form sum_k t^k X^k(u_0) / k!, valid when
f is linear in the jets. Both produce the same TSeries on linear problems.

Each v_k is exact at the z-degrees D_k = D - s*k, where s is the order of
the field; the TSeries records those degrees per coefficient.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .problem import (
    JetExpr,
    ProblemSpec,
    evaluate,
    is_linear_field,
    linear_coefficients,
)
from .series import MIndex, MSeries, TSeries, VSeries


class FlowError(Exception):
    """Base exception for flow computations."""
    pass


class NonLinearFieldError(FlowError):
    """Raised when the exponential form is requested for a field that is not linear in the jets."""
    pass


METHODS = ("recurrence", "linear_exp")


@dataclass(frozen=True)
class FlowResult:
    series: TSeries
    problem: ProblemSpec
    method: str

    @property
    def valid_degrees(self) -> Tuple[int, ...]:
        return self.series.valid_degrees

    def to_dict(self) -> Dict:
        """TSeries document plus the metadata the CLI reports."""
        out = self.series.to_dict()
        out.update({
            "method": self.method,
            "s": self.problem.s,
            "valid_degrees": list(self.valid_degrees),
            "problem": self.problem.to_dict(),
        })
        return out


def flow_recurrence(problem: ProblemSpec) -> FlowResult:
    """
    Compute the formal flow by t-coefficient extraction.

    Derivatives of earlier coefficients are cached by (component, order, k),
    and jet-free parts of the field (such as inv(1-z)) are evaluated once.
    """
    problem.check_budget()
    nvars, trunc = problem.nvars, problem.trunc_deg
    coeffs: List[VSeries] = [problem.initial_data()]
    derivatives: Dict[Tuple[int, MIndex, int], MSeries] = {}
    static_cache: Dict[JetExpr, MSeries] = {}

    def derivative(component: int, order: MIndex, k: int) -> MSeries:
        key = (component, order, k)
        if key not in derivatives:
            derivatives[key] = coeffs[k][component].derive_multi(order)
        return derivatives[key]

    for k in range(problem.order_t):

        def jet_lookup(component: int, order: MIndex) -> Tuple[MSeries, ...]:
            return tuple(derivative(component, order, i) for i in range(k + 1))

        next_components = []
        for expr in problem.field:
            expansion = evaluate(
                expr,
                nvars=nvars,
                trunc_deg=trunc,
                order_t=k,
                jet_lookup=jet_lookup,
                cache=static_cache,
            )
            next_components.append(expansion[k].scale(Fraction(1, k + 1)))
        coeffs.append(VSeries.common(next_components))

    return FlowResult(series=TSeries(coeffs), problem=problem, method="recurrence")


def apply_field(problem: ProblemSpec, u: VSeries, *, cache: Optional[Dict[JetExpr, MSeries]] = None) -> VSeries:
    """X(u): every field expression evaluated at u."""
    return VSeries.common([
        evaluate(
            expr,
            nvars=u.nvars,
            trunc_deg=problem.trunc_deg,
            order_t=0,
            jet_lookup=lambda l, j: (u[l].derive_multi(j),),
            cache=cache,
        )[0]
        for expr in problem.field
    ])


def flow_linear_exp(problem: ProblemSpec) -> FlowResult:
    """v_k = X(v_{k-1}) / k, i.e. u = e^{tX} u_0 for a field linear in the jets."""
    for l, expr in enumerate(problem.field):
        if not is_linear_field(expr):
            raise NonLinearFieldError(
                f"Field for '{problem.components[l]}' is not linear in the jets "
                f"({problem.format_field()[l]}); use the recurrence method"
            )
    problem.check_budget()
    cache: Dict[JetExpr, MSeries] = {}
    coeffs = [problem.initial_data()]
    for k in range(1, problem.order_t + 1):
        coeffs.append(apply_field(problem, coeffs[-1], cache=cache).scale(Fraction(1, k)))
    return FlowResult(series=TSeries(coeffs), problem=problem, method="linear_exp")


def compute_flow(problem: ProblemSpec, *, method: str = "recurrence") -> FlowResult:
    if method == "recurrence":
        return flow_recurrence(problem)
    if method == "linear_exp":
        return flow_linear_exp(problem)
    raise FlowError(f"Unknown flow method '{method}'. Expected one of: {', '.join(METHODS)}")


def flow_residual(result: FlowResult) -> List[VSeries]:
    """
    [t^k] f(u) - (k+1) v_{k+1} for k < K, evaluated on the computed flow.

    All entries are zero for a correct flow.
    """
    problem, series = result.problem, result.series
    residuals = []
    for k in range(series.order_t):
        comps = []
        for l, expr in enumerate(problem.field):
            expansion = evaluate(
                expr,
                nvars=series.nvars,
                trunc_deg=problem.trunc_deg,
                order_t=k,
                jet_lookup=lambda c, j: tuple(series[i][c].derive_multi(j) for i in range(k + 1)),
            )
            comps.append(expansion[k].sub(series[k + 1][l].scale(k + 1)))
        residuals.append(VSeries.common(comps))
    return residuals


# ----- closed form for inv(1-z) * D(u,[s]) ---------------------------------

def closed_form_coeff(s: int, j: int) -> Fraction:
    """u_j = j((s+1)j - 1)! / ((s+1)^(j-1) (j!)^2)."""
    if s < 1 or j < 1:
        raise FlowError(f"closed_form_coeff needs s >= 1 and j >= 1 (got s={s}, j={j})")
    return Fraction(j * factorial((s + 1) * j - 1), (s + 1) ** (j - 1) * factorial(j) ** 2)


def closed_form_flow(s: int, order_t: int, trunc_deg: int) -> TSeries:
    """sum_j u_j t^j (1-z)^-(js+j+1) with v_j cut at trunc_deg - s*j."""
    if trunc_deg < s * order_t:
        raise FlowError(f"trunc_deg {trunc_deg} is below s*order_t = {s * order_t}")
    coeffs = []
    for j in range(order_t + 1):
        u_j = Fraction(1) if j == 0 else closed_form_coeff(s, j)
        base = MSeries.inverse_power([j * s + j + 1], trunc_deg=trunc_deg - s * j)
        coeffs.append(VSeries([base.scale(u_j)]))
    return TSeries(coeffs)


# ----- scalar linear operators and the reductions ------------------------

class LinearOperator:
    """
    The scalar operator sum_j f_j d^j acting on MSeries in nvars variables.

    Examples:
        >>> op = LinearOperator(1, {(2,): MSeries.constant(1, nvars=1, trunc_deg=10)})
        >>> op.flow(MSeries.geometric(trunc_deg=10), 3).valid_degrees
        (10, 8, 6, 4)
    """

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], MSeries]):
        self.nvars = nvars
        self.terms: Dict[MIndex, MSeries] = {}
        for order, coeff in terms.items():
            order = tuple(order)
            if len(order) != nvars:
                raise FlowError(f"Derivative order {order} does not match {nvars} variables")
            if coeff.nvars != nvars:
                raise FlowError(f"Coefficient of d^{order} has {coeff.nvars} variables, expected {nvars}")
            self.terms[order] = self.terms[order].add(coeff) if order in self.terms else coeff
        if not self.terms:
            raise FlowError("A LinearOperator needs at least one term")

    @property
    def order(self) -> int:
        return max(sum(j) for j in self.terms)

    def apply(self, u: MSeries) -> MSeries:
        total: Optional[MSeries] = None
        for order, coeff in sorted(self.terms.items()):
            term = coeff.mul(u.derive_multi(order))
            total = term if total is None else total.add(term)
        return total

    def flow(self, u0: MSeries, order_t: int) -> TSeries:
        """e^{tL} u_0 to order order_t."""
        coeffs = [u0]
        for k in range(1, order_t + 1):
            coeffs.append(self.apply(coeffs[-1]).scale(Fraction(1, k)))
        return TSeries([VSeries([c]) for c in coeffs])

    def is_nonnegative(self) -> bool:
        return all(c.is_nonnegative() for c in self.terms.values())

    def __repr__(self) -> str:
        return f"LinearOperator(nvars={self.nvars}, orders={sorted(self.terms)})"


def psi_reduction(problem: ProblemSpec) -> Tuple[LinearOperator, MSeries]:
    """
    Collapse a linear system to the scalar operator sum_j g_j d^j acting on
    psi(u_0) = u_{0,1} + ... + u_{0,m}, where g_j sums f_{l,k,j} over l and k.
    """
    terms: Dict[MIndex, MSeries] = {}
    for l, expr in enumerate(problem.field):
        if not is_linear_field(expr):
            raise NonLinearFieldError(f"Field for '{problem.components[l]}' is not linear in the jets")
        for (_, order), coeff in linear_coefficients(
            expr, nvars=problem.nvars, trunc_deg=problem.trunc_deg
        ).items():
            terms[order] = terms[order].add(coeff) if order in terms else coeff
    return LinearOperator(problem.nvars, terms), problem.initial_data().component_sum()


def diagonal_reduction(operator: LinearOperator, u0: MSeries) -> Tuple[LinearOperator, MSeries]:
    """Pull back along z -> (z, ..., z): sum_j R*f_j (d/dz)^|j| acting on R*u_0."""
    terms: Dict[MIndex, MSeries] = {}
    for order, coeff in operator.terms.items():
        key = (sum(order),)
        restricted = coeff.diagonal_restrict()
        terms[key] = terms[key].add(restricted) if key in terms else restricted
    return LinearOperator(1, terms), u0.diagonal_restrict()


def model_growth_coeffs(
    alpha: Sequence[int],
    j: Sequence[int],
    N: Sequence[int],
    order_t: int,
    *,
    trunc_deg: Optional[int] = None,
    is_jet_exponents: bool = False,
) -> List[MSeries]:
    """
    Flow coefficients L^k u_0 / k! of the model operator L = z^alpha d^j.

    u_0 = z^N times (1 - z_i)^-1 for every i with j_i != 0; with
    is_jet_exponents=True the factors are (1 - z_i)^-j_i instead.
    """
    alpha, j, N = tuple(alpha), tuple(j), tuple(N)
    if not len(alpha) == len(j) == len(N):
        raise FlowError("alpha, j and N must have the same number of variables")
    if sum(j) < 1:
        raise FlowError("The model operator needs |j| >= 1")
    if trunc_deg is None:
        trunc_deg = sum(j) * order_t + order_t * sum(alpha) + sum(N)
    if trunc_deg < sum(j) * order_t:
        raise FlowError(f"trunc_deg {trunc_deg} is below |j|*K = {sum(j) * order_t}")

    exponents = [(e if is_jet_exponents else 1) if e else 0 for e in j]
    base = MSeries.inverse_power(exponents, trunc_deg=trunc_deg)
    u0 = MSeries.monomial(N, trunc_deg=trunc_deg).mul(base)
    operator = LinearOperator(len(j), {j: MSeries.monomial(alpha, trunc_deg=trunc_deg)})
    return list(operator.flow(u0, order_t).component(0))
