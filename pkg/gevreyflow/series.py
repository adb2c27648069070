"""
series - Exact truncated multivariate formal power series.

MSeries is a sparse map from multi-indices to Fractions, cut at a total degree D.
Every operation records the tightest truncation its result is valid to (the
smaller of the operand truncations) instead of raising, so results compose
without ever reporting a coefficient that was not actually computed.

VSeries groups m MSeries into a vector u = (u_1, ..., u_m) and TSeries stores
the t-coefficients v_0 ... v_K of a flow. The JSON helpers here are the
interchange format shared by every CLI subcommand.
"""

from fractions import Fraction
from itertools import product
from math import comb
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

MIndex = Tuple[int, ...]
Coeff = Fraction
Number = Union[int, Fraction]


class SeriesError(Exception):
    """Base exception for series-related errors."""
    pass


class SeriesShapeError(SeriesError):
    """Raised when operands disagree on variable count, component count or length."""
    pass


class NonInvertibleError(SeriesError):
    """Raised when inverting a series whose constant term is zero."""
    pass


class TruncationError(SeriesError):
    """Raised when a coefficient beyond the truncation degree is requested."""
    pass


def format_coeff(value: Number) -> str:
    """Canonical "p/q" text for a rational; the denominator is always written."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_coeff(text: str) -> Fraction:
    """Read "p/q" or "p" back into a Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SeriesError(f"Invalid coefficient string '{text}': {e}")


def multi_indices(nvars: int, max_degree: int) -> Iterator[MIndex]:
    """Yield every multi-index in nvars variables with total degree <= max_degree."""
    if max_degree < 0:
        return
    for idx in product(range(max_degree + 1), repeat=nvars):
        if sum(idx) <= max_degree:
            yield idx


class MSeries:
    """
    A truncated power series in nvars variables with exact rational coefficients.

    Terms above trunc_deg are dropped on construction and zero coefficients are
    never stored, so two MSeries are equal exactly when nvars, trunc_deg and the
    stored terms agree.

    Examples:
        >>> z = MSeries.variable(0, nvars=1, trunc_deg=3)
        >>> (MSeries.constant(1, nvars=1, trunc_deg=3) - z).invert()
        MSeries(nvars=1, trunc_deg=3, 1 + z^(1,) + z^(2,) + z^(3,))
    """

    __slots__ = ("nvars", "trunc_deg", "_terms")

    def __init__(self, nvars: int, trunc_deg: int, terms: Optional[Mapping[Iterable[int], Number]] = None):
        if nvars < 1:
            raise SeriesShapeError(f"nvars must be at least 1 (got {nvars})")
        if trunc_deg < 0:
            raise SeriesShapeError(f"trunc_deg must be nonnegative (got {trunc_deg})")

        clean: Dict[MIndex, Fraction] = {}
        for raw_idx, raw_value in (terms or {}).items():
            idx = tuple(int(e) for e in raw_idx)
            if len(idx) != nvars:
                raise SeriesShapeError(
                    f"Multi-index {idx} has {len(idx)} entries but the series has {nvars} variables"
                )
            if any(e < 0 for e in idx):
                raise SeriesShapeError(f"Multi-index {idx} has a negative exponent")
            if sum(idx) > trunc_deg:
                continue
            value = Fraction(raw_value)
            if value:
                clean[idx] = value

        self.nvars = nvars
        self.trunc_deg = trunc_deg
        self._terms = clean

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, trunc_deg: int) -> "MSeries":
        return cls(nvars, trunc_deg)

    @classmethod
    def constant(cls, value: Number, *, nvars: int, trunc_deg: int) -> "MSeries":
        return cls(nvars, trunc_deg, {(0,) * nvars: value})

    @classmethod
    def variable(cls, var: int, *, nvars: int, trunc_deg: int) -> "MSeries":
        if not 0 <= var < nvars:
            raise SeriesShapeError(f"Variable index {var} out of range for {nvars} variables")
        idx = tuple(1 if i == var else 0 for i in range(nvars))
        return cls(nvars, trunc_deg, {idx: 1})

    @classmethod
    def monomial(cls, idx: Sequence[int], value: Number = 1, *, trunc_deg: int) -> "MSeries":
        return cls(len(idx), trunc_deg, {tuple(idx): value})

    @classmethod
    def geometric(cls, *, trunc_deg: int, nvars: int = 1, var: int = 0) -> "MSeries":
        """Sum of z_var^k for k <= trunc_deg, i.e. the expansion of 1/(1 - z_var)."""
        exponents = [0] * nvars
        exponents[var] = 1
        return cls.inverse_power(exponents, trunc_deg=trunc_deg)

    @classmethod
    def inverse_power(cls, exponents: Sequence[int], *, trunc_deg: int) -> "MSeries":
        """Expansion of the product of (1 - z_i)^(-e_i) over all variables."""
        nvars = len(exponents)
        terms: Dict[MIndex, Fraction] = {}
        active = [i for i, e in enumerate(exponents) if e > 0]
        for partial in multi_indices(len(active), trunc_deg) if active else [()]:
            idx = [0] * nvars
            value = 1
            for i, k in zip(active, partial):
                idx[i] = k
                value *= comb(exponents[i] - 1 + k, k)
            terms[tuple(idx)] = Fraction(value)
        return cls(nvars, trunc_deg, terms)

    # ----- basic access -------------------------------------------------

    @property
    def terms(self) -> Mapping[MIndex, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterable[Tuple[MIndex, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_nonnegative(self) -> bool:
        return all(value >= 0 for value in self._terms.values())

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coeff_at(self, idx: Sequence[int]) -> Fraction:
        """
        Coefficient of z^idx.

        Raises TruncationError if idx lies beyond trunc_deg, which keeps
        "not computed" distinct from "zero".
        """
        idx = tuple(idx)
        if len(idx) != self.nvars:
            raise SeriesShapeError(f"Multi-index {idx} does not match {self.nvars} variables")
        if sum(idx) > self.trunc_deg:
            raise TruncationError(
                f"Coefficient {idx} has degree {sum(idx)} beyond trunc_deg {self.trunc_deg}"
            )
        return self._terms.get(idx, Fraction(0))

    def truncate(self, trunc_deg: int) -> "MSeries":
        return MSeries(self.nvars, min(trunc_deg, self.trunc_deg), self._terms)

    def with_trunc(self, trunc_deg: int) -> "MSeries":
        """Same stored terms under a different declared truncation."""
        return MSeries(self.nvars, trunc_deg, self._terms)

    def _check_nvars(self, other: "MSeries") -> None:
        if not isinstance(other, MSeries):
            raise SeriesShapeError(f"Expected MSeries, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise SeriesShapeError(
                f"Variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    # ----- ring operations ----------------------------------------------

    def add(self, other: "MSeries") -> "MSeries":
        self._check_nvars(other)
        out = dict(self._terms)
        for idx, value in other._terms.items():
            out[idx] = out.get(idx, 0) + value
        return MSeries(self.nvars, min(self.trunc_deg, other.trunc_deg), out)

    def neg(self) -> "MSeries":
        return MSeries(self.nvars, self.trunc_deg, {idx: -v for idx, v in self._terms.items()})

    def sub(self, other: "MSeries") -> "MSeries":
        return self.add(other.neg())

    def scale(self, factor: Number) -> "MSeries":
        factor = Fraction(factor)
        return MSeries(self.nvars, self.trunc_deg, {idx: factor * v for idx, v in self._terms.items()})

    def mul(self, other: "MSeries") -> "MSeries":
        """Cauchy product, discarding every term above the smaller truncation."""
        self._check_nvars(other)
        trunc = min(self.trunc_deg, other.trunc_deg)
        left = sorted((sum(idx), idx, v) for idx, v in self._terms.items() if sum(idx) <= trunc)
        right = sorted((sum(idx), idx, v) for idx, v in other._terms.items() if sum(idx) <= trunc)

        out: Dict[MIndex, Fraction] = {}
        for deg_a, idx_a, val_a in left:
            budget = trunc - deg_a
            for deg_b, idx_b, val_b in right:
                if deg_b > budget:
                    break
                idx = tuple(x + y for x, y in zip(idx_a, idx_b))
                out[idx] = out.get(idx, 0) + val_a * val_b
        return MSeries(self.nvars, trunc, out)

    def derive(self, var: int) -> "MSeries":
        """Partial derivative in z_var; the truncation drops by one (and stays at 0)."""
        if not 0 <= var < self.nvars:
            raise SeriesShapeError(f"Variable index {var} out of range for {self.nvars} variables")
        if self.trunc_deg == 0:
            return MSeries.zero(self.nvars, 0)
        out: Dict[MIndex, Fraction] = {}
        for idx, value in self._terms.items():
            power = idx[var]
            if power:
                lowered = idx[:var] + (power - 1,) + idx[var + 1:]
                out[lowered] = value * power
        return MSeries(self.nvars, self.trunc_deg - 1, out)

    def derive_multi(self, order: Sequence[int]) -> "MSeries":
        """Apply the derivative d^order = d_1^j_1 ... d_n^j_n."""
        if len(order) != self.nvars:
            raise SeriesShapeError(f"Derivative order {tuple(order)} does not match {self.nvars} variables")
        result = self
        for var, count in enumerate(order):
            for _ in range(count):
                result = result.derive(var)
        return result

    def invert(self) -> "MSeries":
        """
        Multiplicative inverse up to trunc_deg.

        Newton iteration b <- b(2 - ab), doubling the number of correct
        degrees at each pass.
        """
        a0 = self.constant_term()
        if a0 == 0:
            raise NonInvertibleError("Cannot invert a series with zero constant term")

        one = (0,) * self.nvars
        inverse = MSeries(self.nvars, 0, {one: 1 / a0})
        precision = 0
        while precision < self.trunc_deg:
            precision = min(2 * precision + 1, self.trunc_deg)
            b = inverse.with_trunc(precision)
            two = MSeries.constant(2, nvars=self.nvars, trunc_deg=precision)
            inverse = b.mul(two.sub(self.truncate(precision).mul(b)))
        return inverse.with_trunc(self.trunc_deg)

    def pow(self, exponent: int) -> "MSeries":
        if exponent < 0:
            return self.invert().pow(-exponent)
        result = MSeries.constant(1, nvars=self.nvars, trunc_deg=self.trunc_deg)
        base = self
        while exponent:
            if exponent & 1:
                result = result.mul(base)
            exponent >>= 1
            if exponent:
                base = base.mul(base)
        return result

    # ----- majorant calculus --------------------------------------------

    def abs_series(self) -> "MSeries":
        return MSeries(self.nvars, self.trunc_deg, {idx: abs(v) for idx, v in self._terms.items()})

    def diagonal_restrict(self) -> "MSeries":
        """Substitute z_i := z for every variable (the pull-back along z -> (z, ..., z))."""
        out: Dict[MIndex, Fraction] = {}
        for idx, value in self._terms.items():
            key = (sum(idx),)
            out[key] = out.get(key, 0) + value
        return MSeries(1, self.trunc_deg, out)

    # ----- dunder plumbing ----------------------------------------------

    def _coerce(self, other: Any) -> "MSeries":
        if isinstance(other, MSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return MSeries.constant(other, nvars=self.nvars, trunc_deg=self.trunc_deg)
        return NotImplemented

    def __add__(self, other: Any) -> "MSeries":
        other = self._coerce(other)
        return other if other is NotImplemented else self.add(other)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "MSeries":
        other = self._coerce(other)
        return other if other is NotImplemented else self.sub(other)

    def __rsub__(self, other: Any) -> "MSeries":
        other = self._coerce(other)
        return other if other is NotImplemented else other.sub(self)

    def __mul__(self, other: Any) -> "MSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, MSeries):
            return self.mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "MSeries":
        return self.neg()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MSeries):
            return False
        return (
            self.nvars == other.nvars
            and self.trunc_deg == other.trunc_deg
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.trunc_deg, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            body = "0"
        else:
            parts = []
            for idx in sorted(self._terms):
                value = self._terms[idx]
                if not any(idx):
                    parts.append(str(value))
                else:
                    parts.append(f"{value}*z^{idx}" if value != 1 else f"z^{idx}")
            body = " + ".join(parts)
        return f"MSeries(nvars={self.nvars}, trunc_deg={self.trunc_deg}, {body})"

    # ----- JSON ---------------------------------------------------------

    def terms_to_list(self) -> List[List[Any]]:
        return [[list(idx), format_coeff(self._terms[idx])] for idx in sorted(self._terms)]

    def to_dict(self) -> Dict[str, Any]:
        return {"nvars": self.nvars, "trunc_deg": self.trunc_deg, "terms": self.terms_to_list()}

    @classmethod
    def from_terms_list(cls, nvars: int, trunc_deg: int, terms: Sequence[Sequence[Any]]) -> "MSeries":
        parsed: Dict[MIndex, Fraction] = {}
        if not isinstance(terms, (list, tuple)):
            raise SeriesError(f"Terms must be a list of [exponents, \"p/q\"] entries (got {terms!r})")
        for entry in terms:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise SeriesError(f"Term entry {entry!r} must be [exponents, \"p/q\"]")
            try:
                idx = tuple(int(e) for e in entry[0])
            except (TypeError, ValueError):
                raise SeriesError(f"Exponents {entry[0]!r} must be a list of integers")
            if idx in parsed:
                raise SeriesError(f"Duplicate term {idx}")
            parsed[idx] = parse_coeff(entry[1])
        return cls(nvars, trunc_deg, parsed)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MSeries":
        try:
            return cls.from_terms_list(int(data["nvars"]), int(data["trunc_deg"]), data["terms"])
        except KeyError as e:
            raise SeriesError(f"Series document is missing field {e}")


class VSeries:
    """A vector (u_1, ..., u_m) of MSeries sharing nvars and trunc_deg."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[MSeries]):
        comps = tuple(components)
        if not comps:
            raise SeriesShapeError("A VSeries needs at least one component")
        first = comps[0]
        for comp in comps[1:]:
            if comp.nvars != first.nvars:
                raise SeriesShapeError(f"Components disagree on nvars: {first.nvars} vs {comp.nvars}")
            if comp.trunc_deg != first.trunc_deg:
                raise SeriesShapeError(
                    f"Components disagree on trunc_deg: {first.trunc_deg} vs {comp.trunc_deg}"
                )
        self.components = comps

    @classmethod
    def common(cls, components: Sequence[MSeries]) -> "VSeries":
        """Build a VSeries, clamping every component to the smallest truncation."""
        comps = list(components)
        if not comps:
            raise SeriesShapeError("A VSeries needs at least one component")
        trunc = min(c.trunc_deg for c in comps)
        return cls([c.truncate(trunc) for c in comps])

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def trunc_deg(self) -> int:
        return self.components[0].trunc_deg

    def _check_shape(self, other: "VSeries") -> None:
        if not isinstance(other, VSeries):
            raise SeriesShapeError(f"Expected VSeries, got {type(other).__name__}")
        if other.m != self.m:
            raise SeriesShapeError(f"Component count mismatch: {self.m} vs {other.m}")

    def map(self, fn: Callable[[MSeries], MSeries]) -> "VSeries":
        return VSeries.common([fn(c) for c in self.components])

    def add(self, other: "VSeries") -> "VSeries":
        self._check_shape(other)
        return VSeries.common([a.add(b) for a, b in zip(self.components, other.components)])

    def scale(self, factor: Number) -> "VSeries":
        return self.map(lambda c: c.scale(factor))

    def abs_series(self) -> "VSeries":
        return self.map(MSeries.abs_series)

    def truncate(self, trunc_deg: int) -> "VSeries":
        return self.map(lambda c: c.truncate(trunc_deg))

    def component_sum(self) -> MSeries:
        """The map (u_1, ..., u_m) -> u_1 + ... + u_m."""
        total = self.components[0]
        for comp in self.components[1:]:
            total = total.add(comp)
        return total

    def is_nonnegative(self) -> bool:
        return all(c.is_nonnegative() for c in self.components)

    def __getitem__(self, index: int) -> MSeries:
        return self.components[index]

    def __iter__(self) -> Iterator[MSeries]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VSeries) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"VSeries({list(self.components)!r})"


class TSeries:
    """
    The truncated t-series v_0 + v_1 t + ... + v_K t^K with VSeries coefficients.

    Each coefficient keeps its own truncation D_k, so a flow of order s
    typically carries valid_degrees (D, D - s, D - 2s, ...).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[VSeries]):
        items = tuple(coeffs)
        if not items:
            raise SeriesShapeError("A TSeries needs at least the coefficient v_0")
        first = items[0]
        for k, item in enumerate(items[1:], start=1):
            if item.m != first.m or item.nvars != first.nvars:
                raise SeriesShapeError(
                    f"Coefficient v_{k} has shape (m={item.m}, nvars={item.nvars}), "
                    f"expected (m={first.m}, nvars={first.nvars})"
                )
        self.coeffs = items

    @property
    def order_t(self) -> int:
        return len(self.coeffs) - 1

    @property
    def m(self) -> int:
        return self.coeffs[0].m

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars

    @property
    def trunc_deg(self) -> int:
        return self.coeffs[0].trunc_deg

    @property
    def valid_degrees(self) -> Tuple[int, ...]:
        return tuple(v.trunc_deg for v in self.coeffs)

    def component(self, index: int) -> Tuple[MSeries, ...]:
        """The scalar t-series of component u_index."""
        return tuple(v[index] for v in self.coeffs)

    def abs_series(self) -> "TSeries":
        return TSeries([v.abs_series() for v in self.coeffs])

    def __getitem__(self, k: int) -> VSeries:
        return self.coeffs[k]

    def __iter__(self) -> Iterator[VSeries]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TSeries(order_t={self.order_t}, valid_degrees={self.valid_degrees})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nvars": self.nvars,
            "m": self.m,
            "trunc_deg": self.trunc_deg,
            "order_t": self.order_t,
            "coeffs": [
                {
                    "trunc_deg": v.trunc_deg,
                    "components": [c.terms_to_list() for c in v.components],
                }
                for v in self.coeffs
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TSeries":
        try:
            nvars = int(data["nvars"])
            coeffs = data["coeffs"]
            order_t = int(data["order_t"])
        except KeyError as e:
            raise SeriesError(f"TSeries document is missing field {e}")
        except (TypeError, ValueError) as e:
            raise SeriesError(f"TSeries document has a malformed header: {e}")
        if not isinstance(coeffs, list) or len(coeffs) != order_t + 1:
            found = len(coeffs) if isinstance(coeffs, list) else type(coeffs).__name__
            raise SeriesError(f"order_t is {order_t} but coeffs holds {found}")
        items = []
        for k, entry in enumerate(coeffs):
            try:
                trunc = int(entry["trunc_deg"])
                components = entry["components"]
            except KeyError as e:
                raise SeriesError(f"coeffs[{k}] is missing field {e}")
            except (TypeError, ValueError) as e:
                raise SeriesError(f"coeffs[{k}] is malformed: {e}")
            if not isinstance(components, list):
                raise SeriesError(f"coeffs[{k}].components must be a list")
            items.append(VSeries([MSeries.from_terms_list(nvars, trunc, terms) for terms in components]))
        return cls(items)


SeriesLike = Union[MSeries, VSeries, TSeries]


def majorizes(minor: SeriesLike, major: SeriesLike) -> bool:
    """
    True iff |minor_n| <= major_n for every index up to the shared truncation.

    This is a statement about the computed orders only. VSeries and TSeries
    are compared componentwise and coefficientwise.
    """
    if isinstance(minor, MSeries) and isinstance(major, MSeries):
        if minor.nvars != major.nvars:
            raise SeriesShapeError(f"Variable count mismatch: {minor.nvars} vs {major.nvars}")
        trunc = min(minor.trunc_deg, major.trunc_deg)
        for idx in set(minor._terms) | set(major._terms):
            if sum(idx) > trunc:
                continue
            if abs(minor._terms.get(idx, 0)) > major._terms.get(idx, 0):
                return False
        return True
    if isinstance(minor, VSeries) and isinstance(major, VSeries):
        if minor.m != major.m:
            raise SeriesShapeError(f"Component count mismatch: {minor.m} vs {major.m}")
        return all(majorizes(a, b) for a, b in zip(minor, major))
    if isinstance(minor, TSeries) and isinstance(major, TSeries):
        if minor.order_t != major.order_t:
            raise SeriesShapeError(f"order_t mismatch: {minor.order_t} vs {major.order_t}")
        return all(majorizes(a, b) for a, b in zip(minor, major))
    raise SeriesShapeError(
        f"Cannot compare {type(minor).__name__} with {type(major).__name__}"
    )


# Scalar t-series helpers: tuples (s_0, ..., s_K) of MSeries standing for sum s_k t^k.

def t_add(a: Sequence[MSeries], b: Sequence[MSeries]) -> Tuple[MSeries, ...]:
    return tuple(x.add(y) for x, y in zip(a, b))


def t_mul(a: Sequence[MSeries], b: Sequence[MSeries]) -> Tuple[MSeries, ...]:
    order = min(len(a), len(b))
    out = []
    for k in range(order):
        acc = a[0].mul(b[k])
        for i in range(1, k + 1):
            acc = acc.add(a[i].mul(b[k - i]))
        out.append(acc)
    return tuple(out)


def t_invert(a: Sequence[MSeries]) -> Tuple[MSeries, ...]:
    """Inverse in the t-series ring; needs an invertible t^0 coefficient."""
    b0 = a[0].invert()
    out = [b0]
    for k in range(1, len(a)):
        acc = a[1].mul(out[k - 1])
        for i in range(2, k + 1):
            acc = acc.add(a[i].mul(out[k - i]))
        out.append(b0.mul(acc).neg())
    return tuple(out)
