"""
borel - Laplace integrals of the central-binomial Borel sum.

The heat series u(t, 0) = sum (2k)!/k! t^k is Gevrey of order 2. Its Borel
transform is sum C(2k,k) xi^k = (1 - 4 xi)^(-1/2), singular at xi = 1/4, and
the Laplace integral

    f_G(w) = integral over G of exp(-xi w) (1 - 4 xi)^(-1/2) d xi

depends on which side of the singularity the path G passes. The rays L+ and
L- (angles +pi/4 and -pi/4) differ by twice the flat function

    a(w) = -(i/2) sqrt(pi/w) exp(-w/4),

the integral along the cut [1/4, oo) with (1 - 4 xi) approached from the upper
half-plane. The square root has monodromy -1 around xi = 1/4, so a path that
winds k times around it before leaving along L+ gives f+ for even k and
f+ + 2a = f- for odd k.

Branch convention: principal square root of 1 - 4 xi, cut on [1/4, oo).
"""

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Tuple

from scipy.integrate import IntegrationWarning, quad

PATH_KINDS = ("ray", "real_cut", "winding")
L_PLUS = math.pi / 4
L_MINUS = -math.pi / 4
BRANCH = "upper"
CIRCLE_RADIUS = 0.125


class LaplaceError(Exception):
    """Base exception for the Laplace integrals."""
    pass


class PathError(LaplaceError):
    """Raised for paths along which the integral is not defined."""
    pass


class QuadratureError(LaplaceError):
    """Raised when adaptive quadrature cannot reach the requested tolerance."""
    pass


class WindingMismatchError(LaplaceError):
    """Raised when the direct winding quadrature disagrees with f+ plus the flat jumps."""
    pass


@dataclass(frozen=True)
class PathSpec:
    kind: str
    angle: float = L_PLUS
    winding: int = 0

    def __post_init__(self) -> None:
        if self.kind not in PATH_KINDS:
            raise PathError(f"Unknown path kind '{self.kind}'. Expected one of: {', '.join(PATH_KINDS)}")
        if self.kind == "ray":
            if not -math.pi / 2 < self.angle < math.pi / 2:
                raise PathError(f"Ray angle {self.angle} must lie in (-pi/2, pi/2)")
            if self.angle == 0:
                raise PathError("The ray at angle 0 runs into the singularity at xi = 1/4")

    @classmethod
    def ray(cls, angle: float) -> "PathSpec":
        return cls("ray", angle=angle)

    @classmethod
    def plus(cls) -> "PathSpec":
        return cls("ray", angle=L_PLUS)

    @classmethod
    def minus(cls) -> "PathSpec":
        return cls("ray", angle=L_MINUS)

    @classmethod
    def real_cut(cls) -> "PathSpec":
        return cls("real_cut", angle=0.0)

    @classmethod
    def winding_path(cls, k: int, base_angle: float = L_PLUS) -> "PathSpec":
        return cls("winding", angle=base_angle, winding=int(k))

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"kind": self.kind}
        if self.kind == "ray":
            out["angle"] = self.angle
        if self.kind == "winding":
            out["base_angle"] = self.angle
            out["winding"] = self.winding
        return out


@dataclass(frozen=True)
class QuadParams:
    rel_tol: float = 1e-10
    max_subdiv: int = 2 ** 16
    cutoff_T: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise LaplaceError(f"rel_tol must be positive (got {self.rel_tol})")
        if self.max_subdiv < 1:
            raise LaplaceError(f"max_subdiv must be positive (got {self.max_subdiv})")

    def cutoff_for(self, decay: float) -> float:
        """Length T with exp(-T * decay) below rel_tol * 1e-3."""
        if self.cutoff_T is not None:
            return self.cutoff_T
        return math.log(1.0 / (self.rel_tol * 1e-3)) / decay


@dataclass(frozen=True)
class LaplaceValue:
    value: complex
    est_error: float
    path: PathSpec
    branch: str = BRANCH
    cross_check: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "value": [self.value.real, self.value.imag],
            "est_error": self.est_error,
            "branch": self.branch,
            "path": self.path.to_dict(),
        }
        if self.cross_check is not None:
            out["cross_check"] = self.cross_check
        return out


def _check_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise QuadratureError(f"{what} is not finite: {value}")
    return value


def _quad_complex(
    integrand: Callable[[float], complex],
    a: float,
    b: float,
    params: QuadParams,
    *,
    scale: float,
    points: Optional[List[float]] = None,
) -> Tuple[complex, float]:
    """Integrate a complex function of a real variable as two real quadratures."""
    pieces = []
    errors = []
    for part in (lambda r: integrand(r).real, lambda r: integrand(r).imag):
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                value, error = quad(
                    part,
                    a,
                    b,
                    epsabs=params.rel_tol * scale * 1e-2,
                    epsrel=params.rel_tol,
                    limit=params.max_subdiv,
                    points=points,
                )
            except IntegrationWarning as e:
                raise QuadratureError(f"Quadrature on [{a}, {b}] did not converge: {e}")
        pieces.append(value)
        errors.append(error)
    return complex(pieces[0], pieces[1]), math.fsum(errors)


def _borel_sum(xi: complex) -> complex:
    return 1.0 / cmath.sqrt(1.0 - 4.0 * xi)


def borel_series_check(order: int) -> bool:
    """
    (2k)!/(k!)^2 equals the k-th binomial coefficient of (1 - 4 xi)^(-1/2)
    for every k <= order, computed with exact rationals.
    """
    if order < 0:
        raise LaplaceError(f"order must be nonnegative (got {order})")
    binomial = Fraction(1)  # binom(-1/2, k), built by the ratio (-1/2 - k) / (k + 1)
    for k in range(order + 1):
        central = Fraction(factorial(2 * k), factorial(k) ** 2)
        if central != (-4) ** k * binomial or central != comb(2 * k, k):
            return False
        binomial *= (Fraction(-1, 2) - k) / (k + 1)
    return True


def central_binomials(order: int) -> List[Fraction]:
    return [Fraction(comb(2 * k, k)) for k in range(order + 1)]


def laplace_ray(w: complex, path: PathSpec, params: QuadParams = QuadParams()) -> LaplaceValue:
    """
    f_G(w) along the ray xi = r e^{i theta}, r in [0, T], plus a certified tail bound.

    The tail beyond T is at most exp(-cT) / c / sqrt(max(4T - 1, 4T|sin theta|))
    with c = Re(w e^{i theta}); it is added to the reported error.
    """
    if path.kind != "ray":
        raise PathError(f"laplace_ray needs a ray path, got '{path.kind}'")
    w = complex(w)
    direction = cmath.exp(1j * path.angle)
    decay = (w * direction).real
    if decay <= 0:
        raise PathError(
            f"exp(-xi w) does not decay along angle {path.angle} for w = {w} (Re(w e^(i theta)) = {decay})"
        )
    T = params.cutoff_for(decay)
    closest = 0.25 * math.cos(path.angle)
    points = [closest] if 0 < closest < T else None

    def integrand(r: float) -> complex:
        xi = r * direction
        return cmath.exp(-xi * w) * _borel_sum(xi) * direction

    value, error = _quad_complex(integrand, 0.0, T, params, scale=1.0 / abs(w), points=points)
    tail = math.exp(-decay * T) / decay / math.sqrt(max(4 * T - 1, 4 * T * abs(math.sin(path.angle))))
    return LaplaceValue(
        value=_check_finite(value, "Laplace integral"),
        est_error=math.fsum([error, tail]),
        path=path,
    )


def flat_difference_closed_form(w: complex) -> complex:
    """-(i/2) sqrt(pi/w) exp(-w/4)."""
    w = complex(w)
    if w.real <= 0:
        raise PathError(f"The flat function needs Re(w) > 0 (got {w})")
    return -0.5j * cmath.sqrt(math.pi / w) * cmath.exp(-w / 4)


def flat_difference(w: complex, params: QuadParams = QuadParams()) -> LaplaceValue:
    """
    a(w) by quadrature along the cut.

    With xi = 1/4 + sigma^2 the integrand -i (4 xi - 1)^(-1/2) exp(-xi w) d xi
    becomes -i exp(-w/4) exp(-w sigma^2) d sigma, which is smooth at the
    endpoint.
    """
    w = complex(w)
    if w.real <= 0:
        raise PathError(f"The flat function needs Re(w) > 0 (got {w})")
    S = math.sqrt(params.cutoff_for(w.real))

    def integrand(sigma: float) -> complex:
        return cmath.exp(-w * sigma * sigma)

    gaussian, error = _quad_complex(integrand, 0.0, S, params, scale=1.0 / math.sqrt(abs(w)))
    tail = math.exp(-w.real * S * S) / (2 * w.real * S)
    prefactor = -1j * cmath.exp(-w / 4)
    return LaplaceValue(
        value=_check_finite(prefactor * gaussian, "Flat function"),
        est_error=abs(prefactor) * math.fsum([error, tail]),
        path=PathSpec.real_cut(),
    )


def winding_quadrature(w: complex, k: int, params: QuadParams = QuadParams()) -> LaplaceValue:
    """
    Direct quadrature along a path that winds k times around xi = 1/4.

    The path runs along [0, 1/8], around the circle |xi - 1/4| = 1/8 k times
    (counterclockwise for k > 0) and leaves from 1/8 along the direction of L+.
    The Borel sum is continued along the circle, so after an odd number of
    turns the outgoing ray carries the opposite sign.
    """
    w = complex(w)
    k = int(k)
    direction = cmath.exp(1j * L_PLUS)
    decay = (w * direction).real
    if decay <= 0:
        raise PathError(f"exp(-xi w) does not decay along L+ for w = {w}")
    start = 0.25 - CIRCLE_RADIUS
    scale = 1.0 / abs(w)

    segment, err_segment = _quad_complex(
        lambda x: cmath.exp(-x * w) * _borel_sum(x), 0.0, start, params, scale=scale
    )

    def on_circle(phi: float) -> complex:
        xi = 0.25 + CIRCLE_RADIUS * cmath.exp(1j * phi)
        continued = math.sqrt(1.0 / (4 * CIRCLE_RADIUS)) * cmath.exp(-0.5j * (phi - math.pi))
        return cmath.exp(-xi * w) * continued * 1j * CIRCLE_RADIUS * cmath.exp(1j * phi)

    if k:
        loop, err_loop = _quad_complex(on_circle, math.pi, math.pi + 2 * math.pi * k, params, scale=scale)
    else:
        loop, err_loop = 0j, 0.0

    T = params.cutoff_for(decay)
    sign = -1.0 if k % 2 else 1.0

    def on_ray(r: float) -> complex:
        xi = start + r * direction
        return sign * cmath.exp(-xi * w) * _borel_sum(xi) * direction

    ray, err_ray = _quad_complex(on_ray, 0.0, T, params, scale=scale)
    tail = math.exp(-decay * T) * abs(cmath.exp(-start * w)) / decay / math.sqrt(4 * T * math.sin(L_PLUS))

    value = complex(
        math.fsum([segment.real, loop.real, ray.real]),
        math.fsum([segment.imag, loop.imag, ray.imag]),
    )
    return LaplaceValue(
        value=_check_finite(value, "Winding integral"),
        est_error=math.fsum([err_segment, err_loop, err_ray, tail]),
        path=PathSpec.winding_path(k),
    )


def winding_value(
    w: complex,
    k: int,
    params: QuadParams = QuadParams(),
    *,
    is_cross_check: bool = True,
) -> LaplaceValue:
    """
    f along a path winding k times around xi = 1/4 before leaving along L+.

    Equal to f+ for even k and f+ + 2a(w) for odd k. For |k| = 1 the value is
    confirmed against winding_quadrature within 10 * rel_tol (relative) plus
    the two error estimates.
    """
    w = complex(w)
    if w.real <= 0:
        raise PathError(f"Winding values need Re(w) > 0 (got {w})")
    f_plus = laplace_ray(w, PathSpec.plus(), params)
    if k % 2 == 0:
        value, error = f_plus.value, f_plus.est_error
    else:
        flat = flat_difference(w, params)
        value = f_plus.value + 2 * flat.value
        error = f_plus.est_error + 2 * flat.est_error

    mismatch: Optional[float] = None
    if is_cross_check and abs(k) == 1:
        direct = winding_quadrature(w, k, params)
        mismatch = abs(direct.value - value)
        tolerance = 10 * params.rel_tol * abs(value) + error + direct.est_error
        if mismatch > tolerance:
            raise WindingMismatchError(
                f"Winding {k}: direct quadrature {direct.value} differs from {value} "
                f"by {mismatch:.3e} (tolerance {tolerance:.3e})"
            )

    return LaplaceValue(
        value=value,
        est_error=error,
        path=PathSpec.winding_path(k),
        cross_check=mismatch,
    )


def asymptotic_partial_sum(w: complex, n_terms: int) -> complex:
    """sum_{k < n_terms} (2k)!/k! w^-(k+1), the termwise Laplace transform of the Borel series."""
    w = complex(w)
    return complex(sum(
        (factorial(2 * k) // factorial(k)) / w ** (k + 1)
        for k in range(n_terms)
    ))


def optimal_truncation(w: complex) -> int:
    """Least-term truncation order round(|w| / 4) for a Gevrey-2 series with singularity at 1/4."""
    return max(1, round(abs(complex(w)) / 4))
