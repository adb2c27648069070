"""
problem - The jet-expression language that defines a Cauchy problem.

A problem is the right-hand side f(z, u, d_z u, ...) of d_t u = f together
with initial data u_0. Expressions are small trees over constants, space
variables z_i and jets D(u_l, [j_1, ..., j_n]); a bare component name is the
jet of order zero.

Grammar (whitespace-insensitive, left-associative):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' uint)?
    atom     := rational | name | 'D(' name ',' '[' uint (',' uint)* ']' ')'
              | 'inv(' expr ')' | '(' expr ')' | '-' atom
    rational := uint ('/' uint)?

Unary minus is part of the atom, so "-z^2" reads as (-z)^2; write -(z^2)
for the negated square.
"""

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .series import (
    MIndex,
    MSeries,
    TruncationError,
    TSeries,
    VSeries,
    t_add,
    t_invert,
    t_mul,
)


class ProblemError(Exception):
    """Base exception for problem-definition errors."""
    pass


class ProblemSyntaxError(ProblemError):
    """Raised when an expression does not match the grammar. Carries the 0-based position."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.detail = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class ProblemValidationError(ProblemError):
    """Raised when a problem is well-formed text but violates a structural rule."""
    pass


class ProblemBudgetError(ProblemValidationError):
    """Raised when trunc_deg cannot cover s * order_t derivatives."""
    pass


# ----- expression nodes --------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class SpaceVar:
    index: int


@dataclass(frozen=True)
class Jet:
    component: int
    order: MIndex


@dataclass(frozen=True)
class Add:
    children: Tuple["JetExpr", ...]


@dataclass(frozen=True)
class Mul:
    children: Tuple["JetExpr", ...]


@dataclass(frozen=True)
class Pow:
    base: "JetExpr"
    exponent: int


@dataclass(frozen=True)
class Inv:
    child: "JetExpr"


@dataclass(frozen=True)
class Neg:
    child: "JetExpr"


JetExpr = Union[Const, SpaceVar, Jet, Add, Mul, Pow, Inv, Neg]

RESERVED_NAMES = {"D", "inv"}
NAME_PATTERN = re.compile(r"^[a-zA-Z][a-zA-Z0-9_]*$")
MAX_NAME_LENGTH = 60


def children_of(node: JetExpr) -> Tuple[JetExpr, ...]:
    if isinstance(node, (Add, Mul)):
        return node.children
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, (Inv, Neg)):
        return (node.child,)
    return ()


def iter_jets(node: JetExpr):
    """Yield every Jet node in the tree."""
    if isinstance(node, Jet):
        yield node
    for child in children_of(node):
        yield from iter_jets(child)


def has_jets(node: JetExpr) -> bool:
    return next(iter_jets(node), None) is not None


def expr_jet_order(node: JetExpr) -> int:
    return max((sum(j.order) for j in iter_jets(node)), default=0)


def _flatten(kind: type, items: Sequence[JetExpr]) -> JetExpr:
    flat: List[JetExpr] = []
    for item in items:
        if isinstance(item, kind):
            flat.extend(item.children)
        else:
            flat.append(item)
    return flat[0] if len(flat) == 1 else kind(tuple(flat))


# ----- tokenizer and parser ----------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*^/(),\[\]]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ProblemSyntaxError(f"Unexpected character '{text[bad]}'", bad, text)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser; one instance per expression string."""

    def __init__(self, text: str, space_vars: Sequence[str], components: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.space_index = {name: i for i, name in enumerate(space_vars)}
        self.component_index = {name: l for l, name in enumerate(components)}
        self.nvars = len(space_vars)

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def expect(self, value: str) -> Tuple[str, str, int]:
        kind, text, pos = self.peek()
        if text != value or kind not in ("sym", "name"):
            found = text or "end of input"
            raise ProblemSyntaxError(f"Expected '{value}' but found '{found}'", pos, self.text)
        return self.advance()

    def parse(self) -> JetExpr:
        node = self.parse_expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ProblemSyntaxError(f"Unexpected '{text}'", pos, self.text)
        return node

    def parse_expr(self) -> JetExpr:
        terms = [self.parse_term()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "sym":
            op = self.advance()[1]
            term = self.parse_term()
            terms.append(term if op == "+" else Neg(term))
        return _flatten(Add, terms)

    def parse_term(self) -> JetExpr:
        factors = [self.parse_factor()]
        while self.peek()[:2] == ("sym", "*"):
            self.advance()
            factors.append(self.parse_factor())
        return _flatten(Mul, factors)

    def parse_factor(self) -> JetExpr:
        node = self.parse_atom()
        if self.peek()[:2] == ("sym", "^"):
            self.advance()
            node = Pow(node, self.parse_uint())
        return node

    def parse_uint(self) -> int:
        kind, text, pos = self.peek()
        if kind != "num":
            raise ProblemSyntaxError(f"Expected a nonnegative integer but found '{text or 'end of input'}'", pos, self.text)
        self.advance()
        return int(text)

    def parse_atom(self) -> JetExpr:
        kind, text, pos = self.peek()
        if kind == "sym" and text == "-":
            self.advance()
            return Neg(self.parse_atom())
        if kind == "num":
            numerator = self.parse_uint()
            if self.peek()[:2] == ("sym", "/"):
                self.advance()
                den_pos = self.peek()[2]
                denominator = self.parse_uint()
                if denominator == 0:
                    raise ProblemSyntaxError("Zero denominator", den_pos, self.text)
                return Const(Fraction(numerator, denominator))
            return Const(Fraction(numerator))
        if kind == "sym" and text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        if kind == "name":
            if text == "D" and self.tokens[self.i + 1][1] == "(":
                return self.parse_jet()
            if text == "inv" and self.tokens[self.i + 1][1] == "(":
                self.advance()
                self.expect("(")
                child = self.parse_expr()
                self.expect(")")
                return Inv(child)
            self.advance()
            if text in self.space_index:
                return SpaceVar(self.space_index[text])
            if text in self.component_index:
                return Jet(self.component_index[text], (0,) * self.nvars)
            raise ProblemSyntaxError(f"Unknown name '{text}'", pos, self.text)
        raise ProblemSyntaxError(f"Unexpected '{text or 'end of input'}'", pos, self.text)

    def parse_jet(self) -> JetExpr:
        self.advance()  # D
        self.expect("(")
        kind, name, pos = self.peek()
        if kind != "name" or name not in self.component_index:
            raise ProblemSyntaxError(f"D(...) needs a component name, got '{name or 'end of input'}'", pos, self.text)
        self.advance()
        self.expect(",")
        bracket_pos = self.peek()[2]
        self.expect("[")
        order = [self.parse_uint()]
        while self.peek()[:2] == ("sym", ","):
            self.advance()
            order.append(self.parse_uint())
        self.expect("]")
        self.expect(")")
        if len(order) != self.nvars:
            raise ProblemSyntaxError(
                f"D({name},[...]) has {len(order)} entries but there are {self.nvars} space variables",
                bracket_pos,
                self.text,
            )
        return Jet(self.component_index[name], tuple(order))


def parse_expr(text: str, *, space_vars: Sequence[str], components: Sequence[str] = ()) -> JetExpr:
    """
    Parse one expression string into a normalized JetExpr.

    Add and Mul are flattened and "a - b" becomes Add(a, Neg(b)).

    Examples:
        >>> parse_expr("inv(1-z)", space_vars=["z"], components=["u"])
        Inv(child=Add(children=(Const(value=Fraction(1, 1)), Neg(child=SpaceVar(index=0)))))
    """
    return _Parser(text, space_vars, components).parse()


# ----- canonical printer -------------------------------------------------

def format_expr(node: JetExpr, *, space_vars: Sequence[str], components: Sequence[str] = ()) -> str:
    """Canonical text for a normalized expression; parse_expr reads it back unchanged."""

    def atom_safe(n: JetExpr) -> bool:
        return isinstance(n, (Const, SpaceVar, Jet, Inv)) and not (isinstance(n, Const) and n.value < 0)

    def as_factor(n: JetExpr) -> str:
        text = fmt(n)
        return f"({text})" if isinstance(n, (Add, Mul)) or (isinstance(n, Const) and n.value < 0) else text

    def negated(n: JetExpr) -> str:
        text = fmt(n)
        return f"-({text})" if isinstance(n, (Add, Mul, Pow)) or (isinstance(n, Const) and n.value < 0) else f"-{text}"

    def fmt(n: JetExpr) -> str:
        if isinstance(n, Const):
            value = n.value
            return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        if isinstance(n, SpaceVar):
            return space_vars[n.index]
        if isinstance(n, Jet):
            name = components[n.component]
            if not any(n.order):
                return name
            return f"D({name},[{','.join(str(e) for e in n.order)}])"
        if isinstance(n, Add):
            parts = []
            for i, child in enumerate(n.children):
                if isinstance(child, Neg):
                    inner = child.child
                    inner_text = f"({fmt(inner)})" if isinstance(inner, Add) else fmt(inner)
                    parts.append(negated(inner) if i == 0 else f" - {inner_text}")
                else:
                    text = f"({fmt(child)})" if isinstance(child, Add) else fmt(child)
                    parts.append(text if i == 0 else f" + {text}")
            return "".join(parts)
        if isinstance(n, Mul):
            return "*".join(as_factor(child) for child in n.children)
        if isinstance(n, Pow):
            base = fmt(n.base) if atom_safe(n.base) else f"({fmt(n.base)})"
            return f"{base}^{n.exponent}"
        if isinstance(n, Inv):
            return f"inv({fmt(n.child)})"
        if isinstance(n, Neg):
            return negated(n.child)
        raise ProblemValidationError(f"Unknown expression node {n!r}")

    return fmt(node)


# ----- evaluation --------------------------------------------------------

JetLookup = Callable[[int, MIndex], Tuple[MSeries, ...]]


def evaluate(
    node: JetExpr,
    *,
    nvars: int,
    trunc_deg: int,
    order_t: int,
    jet_lookup: JetLookup,
    cache: Optional[Dict[JetExpr, MSeries]] = None,
) -> Tuple[MSeries, ...]:
    """
    Evaluate an expression on t-series operands.

    Returns the coefficients of t^0 ... t^order_t. Constants and space
    variables enter at trunc_deg; jets come from jet_lookup. Jet-free
    subtrees are constant in t and are memoized in cache when one is given.
    """
    length = order_t + 1
    zero = MSeries.zero(nvars, trunc_deg)

    def pad(value: MSeries) -> Tuple[MSeries, ...]:
        return (value,) + (zero,) * (length - 1)

    def walk(n: JetExpr) -> Tuple[MSeries, ...]:
        if not isinstance(n, (Const, SpaceVar, Jet)) and cache is not None and not has_jets(n):
            if n in cache:
                return pad(cache[n])
        if isinstance(n, Const):
            return pad(MSeries.constant(n.value, nvars=nvars, trunc_deg=trunc_deg))
        if isinstance(n, SpaceVar):
            return pad(MSeries.variable(n.index, nvars=nvars, trunc_deg=trunc_deg))
        if isinstance(n, Jet):
            return tuple(jet_lookup(n.component, n.order))[:length]
        if isinstance(n, Add):
            result = walk(n.children[0])
            for child in n.children[1:]:
                result = t_add(result, walk(child))
        elif isinstance(n, Mul):
            result = walk(n.children[0])
            for child in n.children[1:]:
                result = t_mul(result, walk(child))
        elif isinstance(n, Neg):
            result = tuple(s.neg() for s in walk(n.child))
        elif isinstance(n, Pow):
            result = pad(MSeries.constant(1, nvars=nvars, trunc_deg=trunc_deg))
            if n.exponent:
                base = walk(n.base)
                for _ in range(n.exponent):
                    result = t_mul(result, base)
        elif isinstance(n, Inv):
            result = t_invert(walk(n.child))
        else:
            raise ProblemValidationError(f"Unknown expression node {n!r}")
        if cache is not None and not has_jets(n):
            cache[n] = result[0]
        return result

    return walk(node)


def _checked_derivative(series: MSeries, order: MIndex) -> MSeries:
    if sum(order) > series.trunc_deg:
        raise TruncationError(
            f"Derivative of order {sum(order)} exceeds the available degree {series.trunc_deg}"
        )
    return series.derive_multi(order)


def eval_field(expr: JetExpr, u: VSeries) -> MSeries:
    """Substitute z_i and d^j u_l from u into expr and evaluate in the truncated ring."""
    return evaluate(
        expr,
        nvars=u.nvars,
        trunc_deg=u.trunc_deg,
        order_t=0,
        jet_lookup=lambda l, j: (_checked_derivative(u[l], j),),
    )[0]


def eval_field_series(expr: JetExpr, u: TSeries) -> Tuple[MSeries, ...]:
    """t-expansion of expr(u) up to u.order_t, jets taken coefficientwise."""
    return evaluate(
        expr,
        nvars=u.nvars,
        trunc_deg=u.trunc_deg,
        order_t=u.order_t,
        jet_lookup=lambda l, j: tuple(_checked_derivative(v[l], j) for v in u),
    )


# ----- structure of the field in jets ------------------------------------

Monomial = Tuple[Tuple[int, MIndex], ...]


def jet_degrees(node: JetExpr) -> Optional[FrozenSet[int]]:
    """
    Set of total jet degrees of the monomials of node, or None when node is
    not polynomial in the jets (an inv(...) around a jet).
    """
    if isinstance(node, (Const, SpaceVar)):
        return frozenset({0})
    if isinstance(node, Jet):
        return frozenset({1})
    if isinstance(node, Add):
        out: set = set()
        for child in node.children:
            sub = jet_degrees(child)
            if sub is None:
                return None
            out |= sub
        return frozenset(out)
    if isinstance(node, Mul):
        acc = frozenset({0})
        for child in node.children:
            sub = jet_degrees(child)
            if sub is None:
                return None
            acc = frozenset(a + b for a in acc for b in sub)
        return acc
    if isinstance(node, Pow):
        sub = jet_degrees(node.base)
        if sub is None:
            return None
        acc = frozenset({0})
        for _ in range(node.exponent):
            acc = frozenset(a + b for a in acc for b in sub)
        return acc
    if isinstance(node, Neg):
        return jet_degrees(node.child)
    if isinstance(node, Inv):
        return frozenset({0}) if not has_jets(node.child) else None
    raise ProblemValidationError(f"Unknown expression node {node!r}")


def is_linear_field(node: JetExpr) -> bool:
    """True iff every monomial of node carries exactly one jet."""
    return jet_degrees(node) == frozenset({1})


def expand_jets(node: JetExpr, *, nvars: int, trunc_deg: int) -> Dict[Monomial, MSeries]:
    """
    Expand node as a polynomial in the jets with series coefficients.

    Keys are sorted tuples of (component, order) pairs; the empty tuple is
    the jet-free part. inv(...) is only allowed around jet-free subtrees.
    """

    def mul_poly(a: Dict[Monomial, MSeries], b: Dict[Monomial, MSeries]) -> Dict[Monomial, MSeries]:
        out: Dict[Monomial, MSeries] = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(sorted(ka + kb))
                term = va.mul(vb)
                out[key] = out[key].add(term) if key in out else term
        return out

    def add_into(out: Dict[Monomial, MSeries], more: Dict[Monomial, MSeries]) -> None:
        for key, value in more.items():
            out[key] = out[key].add(value) if key in out else value

    def walk(n: JetExpr) -> Dict[Monomial, MSeries]:
        if isinstance(n, Jet):
            return {((n.component, n.order),): MSeries.constant(1, nvars=nvars, trunc_deg=trunc_deg)}
        if isinstance(n, (Const, SpaceVar)) or (isinstance(n, Inv) and not has_jets(n)):
            value = evaluate(
                n, nvars=nvars, trunc_deg=trunc_deg, order_t=0, jet_lookup=_no_jets
            )[0]
            return {(): value}
        if isinstance(n, Inv):
            raise ProblemValidationError("inv(...) of a jet-dependent expression is not polynomial in the jets")
        if isinstance(n, Add):
            out: Dict[Monomial, MSeries] = {}
            for child in n.children:
                add_into(out, walk(child))
            return out
        if isinstance(n, Mul):
            acc = walk(n.children[0])
            for child in n.children[1:]:
                acc = mul_poly(acc, walk(child))
            return acc
        if isinstance(n, Pow):
            acc = {(): MSeries.constant(1, nvars=nvars, trunc_deg=trunc_deg)}
            base = walk(n.base)
            for _ in range(n.exponent):
                acc = mul_poly(acc, base)
            return acc
        if isinstance(n, Neg):
            return {key: value.neg() for key, value in walk(n.child).items()}
        raise ProblemValidationError(f"Unknown expression node {n!r}")

    return {key: value for key, value in walk(node).items() if not value.is_zero()}


def _no_jets(component: int, order: MIndex) -> Tuple[MSeries, ...]:
    raise ProblemValidationError("Initial data and coefficients may not contain jets")


def linear_coefficients(node: JetExpr, *, nvars: int, trunc_deg: int) -> Dict[Tuple[int, MIndex], MSeries]:
    """Coefficients f_{k,j} of a linear field sum_{k,j} f_{k,j} d^j u_k."""
    if not is_linear_field(node):
        raise ProblemValidationError("Field is not linear in the jets")
    out: Dict[Tuple[int, MIndex], MSeries] = {}
    for key, value in expand_jets(node, nvars=nvars, trunc_deg=trunc_deg).items():
        if len(key) != 1:
            raise ProblemValidationError(f"Field has a non-linear monomial {key}")
        out[key[0]] = value
    return out


def is_nonnegative_expr(node: JetExpr, *, nvars: int, trunc_deg: int) -> bool:
    """All Taylor coefficients of the expanded expression are >= 0 (checked at truncation)."""
    return all(v.is_nonnegative() for v in expand_jets(node, nvars=nvars, trunc_deg=trunc_deg).values())


# ----- problem documents -------------------------------------------------

def _validate_name(name: str, role: str) -> None:
    if not name:
        raise ProblemValidationError(f"{role} name cannot be empty")
    if len(name) > MAX_NAME_LENGTH:
        raise ProblemValidationError(
            f"{role} name '{name}' exceeds {MAX_NAME_LENGTH} character limit (got {len(name)})"
        )
    if not name[0].isalpha():
        raise ProblemValidationError(f"{role} name '{name}' must start with a letter")
    if not NAME_PATTERN.match(name):
        raise ProblemValidationError(
            f"{role} name '{name}' contains invalid characters. "
            "Only letters, numbers and underscores are allowed"
        )
    if name in RESERVED_NAMES:
        raise ProblemValidationError(f"{role} name '{name}' is reserved")


@dataclass(frozen=True)
class ProblemSpec:
    """
    A characteristic Cauchy problem d_t u = f(z, u, d_z u, ...), u(0) = u_0.

    field[l] is the right-hand side for component l and initial[l] is u_0
    for that component; both use 0-based indices internally.
    """

    space_vars: Tuple[str, ...]
    components: Tuple[str, ...]
    field: Tuple[JetExpr, ...]
    initial: Tuple[JetExpr, ...]
    order_t: int
    trunc_deg: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "space_vars", tuple(self.space_vars))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "field", tuple(self.field))
        object.__setattr__(self, "initial", tuple(self.initial))

        if not self.space_vars:
            raise ProblemValidationError("At least one space variable is required")
        if not self.components:
            raise ProblemValidationError("At least one component is required")
        for name in self.space_vars:
            _validate_name(name, "space variable")
        for name in self.components:
            _validate_name(name, "component")
        names = list(self.space_vars) + list(self.components)
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ProblemValidationError(f"Names used more than once: {', '.join(duplicates)}")

        m = len(self.components)
        if len(self.field) != m:
            raise ProblemValidationError(f"Expected {m} field expressions, got {len(self.field)}")
        if len(self.initial) != m:
            raise ProblemValidationError(f"Expected {m} initial expressions, got {len(self.initial)}")
        if self.order_t < 0:
            raise ProblemValidationError(f"order_t must be nonnegative (got {self.order_t})")
        if self.trunc_deg < 0:
            raise ProblemValidationError(f"trunc_deg must be nonnegative (got {self.trunc_deg})")

        for expr in self.field:
            for jet in iter_jets(expr):
                if not 0 <= jet.component < m:
                    raise ProblemValidationError(f"Jet refers to unknown component {jet.component}")
                if len(jet.order) != self.nvars or any(e < 0 for e in jet.order):
                    raise ProblemValidationError(f"Jet order {jet.order} is not a multi-index in {self.nvars} variables")
        for l, expr in enumerate(self.initial):
            if has_jets(expr):
                raise ProblemValidationError(
                    f"Initial data for '{self.components[l]}' may not contain jets"
                )

    @property
    def nvars(self) -> int:
        return len(self.space_vars)

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def s(self) -> int:
        return jet_order(self)

    def check_budget(self) -> None:
        needed = self.s * self.order_t
        if self.trunc_deg < needed:
            raise ProblemBudgetError(
                f"trunc_deg {self.trunc_deg} is below s*order_t = {self.s}*{self.order_t} = {needed}"
            )

    def with_overrides(self, *, order_t: Optional[int] = None, trunc_deg: Optional[int] = None) -> "ProblemSpec":
        changes: Dict[str, int] = {}
        if order_t is not None:
            changes["order_t"] = order_t
        if trunc_deg is not None:
            changes["trunc_deg"] = trunc_deg
        return replace(self, **changes) if changes else self

    def initial_data(self) -> VSeries:
        """u_0 evaluated at trunc_deg."""
        return VSeries.common([
            evaluate(e, nvars=self.nvars, trunc_deg=self.trunc_deg, order_t=0, jet_lookup=_no_jets)[0]
            for e in self.initial
        ])

    def format_field(self) -> List[str]:
        return [format_expr(e, space_vars=self.space_vars, components=self.components) for e in self.field]

    def format_initial(self) -> List[str]:
        return [format_expr(e, space_vars=self.space_vars, components=self.components) for e in self.initial]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space_vars": list(self.space_vars),
            "components": list(self.components),
            "field": self.format_field(),
            "initial": self.format_initial(),
            "order_t": self.order_t,
            "trunc_deg": self.trunc_deg,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProblemSpec":
        required = ["space_vars", "components", "field", "initial", "order_t", "trunc_deg"]
        missing = [key for key in required if key not in data]
        if missing:
            raise ProblemValidationError(f"Problem document is missing: {', '.join(missing)}")
        for key in ["space_vars", "components", "field", "initial"]:
            if not isinstance(data[key], list):
                raise ProblemValidationError(
                    f"{key} must be a list (got {type(data[key]).__name__})"
                )
        space_vars = [str(v) for v in data["space_vars"]]
        components = [str(c) for c in data["components"]]
        for name in space_vars:
            _validate_name(name, "space variable")
        for name in components:
            _validate_name(name, "component")

        def parse_list(key: str, allowed_components: Sequence[str]) -> List[JetExpr]:
            out = []
            for i, text in enumerate(data[key]):
                try:
                    out.append(parse_expr(str(text), space_vars=space_vars, components=allowed_components))
                except ProblemSyntaxError as e:
                    raise ProblemSyntaxError(f"{key}[{i}]: {e.detail}", e.position, str(text))
            return out

        try:
            order_t = int(data["order_t"])
            trunc_deg = int(data["trunc_deg"])
        except (TypeError, ValueError) as e:
            raise ProblemValidationError(f"order_t and trunc_deg must be integers: {e}")

        return cls(
            space_vars=tuple(space_vars),
            components=tuple(components),
            field=tuple(parse_list("field", components)),
            initial=tuple(parse_list("initial", ())),
            order_t=order_t,
            trunc_deg=trunc_deg,
        )


def jet_order(problem: ProblemSpec) -> int:
    """Order s of the problem: the largest |j| over the jets of the field (0 if none)."""
    return max((expr_jet_order(e) for e in problem.field), default=0)
