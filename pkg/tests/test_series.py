"""
Tests for the truncated series types.

Tests cover the ring operations and their truncation rule, derivatives,
inversion, the majorant calculus with the psi estimate for linear systems,
JSON interchange, and randomized ring and Leibniz properties.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gevreyflow.series import (
    MSeries,
    NonInvertibleError,
    SeriesError,
    SeriesShapeError,
    TSeries,
    TruncationError,
    VSeries,
    format_coeff,
    majorizes,
    multi_indices,
    parse_coeff,
)


def uni(coeffs, trunc_deg):
    """Univariate series from a coefficient list c_0, c_1, ..."""
    return MSeries(1, trunc_deg, {(k,): c for k, c in enumerate(coeffs)})


def coeff_list(series):
    return [series.coeff_at((k,)) for k in range(series.trunc_deg + 1)]


small_rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def series_family(draw, count=3, nonnegative=False):
    """count series sharing nvars and trunc_deg."""
    nvars = draw(st.integers(1, 3))
    trunc_deg = draw(st.integers(1, 4))
    indices = list(multi_indices(nvars, trunc_deg))
    values = st.builds(Fraction, st.integers(0, 4), st.integers(1, 3)) if nonnegative else small_rationals
    out = []
    for _ in range(count):
        coeffs = draw(st.lists(values, min_size=len(indices), max_size=len(indices)))
        out.append(MSeries(nvars, trunc_deg, dict(zip(indices, coeffs))))
    return out


@st.composite
def linear_system(draw):
    """Nonnegative f_{l,k,j} and u_k for a random linear system in m components."""
    nvars = draw(st.integers(1, 2))
    m = draw(st.integers(1, 2))
    trunc_deg = draw(st.integers(2, 4))
    indices = list(multi_indices(nvars, trunc_deg))
    values = st.builds(Fraction, st.integers(0, 4), st.integers(1, 3))

    def nonnegative_series():
        coeffs = draw(st.lists(values, min_size=len(indices), max_size=len(indices)))
        return MSeries(nvars, trunc_deg, dict(zip(indices, coeffs)))

    orders = draw(st.lists(st.sampled_from(list(multi_indices(nvars, 2))), min_size=1, max_size=3, unique=True))
    f = {(l, k, j): nonnegative_series() for l in range(m) for k in range(m) for j in orders}
    u = VSeries([nonnegative_series() for _ in range(m)])
    return f, u, orders


class TestCoefficientText:
    """Canonical coefficient strings."""

    def test_reduced_negative(self):
        assert format_coeff(Fraction(-3, 6)) == "-1/2"

    def test_integer_keeps_denominator(self):
        assert format_coeff(2) == "2/1"

    def test_parse_accepts_bare_integer(self):
        assert parse_coeff("3") == 3
        assert parse_coeff("-1/2") == Fraction(-1, 2)

    def test_parse_rejects_garbage(self):
        with pytest.raises(SeriesError):
            parse_coeff("one half")


class TestMSeriesBasicFunctionality:
    """Construction, access and the worked arithmetic examples."""

    def test_terms_above_truncation_are_dropped(self):
        s = uni([1, 1, 1, 1], 2)
        assert dict(s.terms) == {(0,): 1, (1,): 1, (2,): 1}

    def test_zero_terms_are_not_stored(self):
        s = uni([1, 0, 2], 3)
        assert (1,) not in s.terms

    def test_wrong_index_length(self):
        with pytest.raises(SeriesShapeError):
            MSeries(2, 3, {(1,): 1})

    def test_add_cancellation(self):
        assert uni([1, 1], 3) + uni([1, -1], 3) == MSeries.constant(2, nvars=1, trunc_deg=3)

    def test_add_zero_identity(self):
        s = uni([1, 2, 3], 2)
        assert s + MSeries.zero(1, 2) == s

    def test_add_direct_sum(self):
        assert coeff_list(uni([1, 1, 1], 2) + uni([0, 1, 1], 2)) == [1, 2, 2]

    def test_add_takes_smaller_truncation(self):
        assert (uni([1], 5) + uni([1], 2)).trunc_deg == 2

    def test_add_variable_mismatch(self):
        with pytest.raises(SeriesShapeError):
            MSeries.zero(1, 2).add(MSeries.zero(2, 2))

    def test_mul_difference_of_squares(self):
        assert coeff_list(uni([1, 1], 3) * uni([1, -1], 3)) == [1, 0, -1, 0]

    def test_mul_telescoping(self):
        product = uni([1, 1, 1, 1], 3) * uni([1, -1], 3)
        assert dict(product.terms) == {(0,): 1}

    def test_mul_geometric_square(self):
        g = MSeries.geometric(trunc_deg=4)
        assert coeff_list(g * g) == [1, 2, 3, 4, 5]

    def test_derive_monomial(self):
        assert MSeries.monomial((2,), trunc_deg=4).derive(0) == MSeries(1, 3, {(1,): 2})

    def test_derive_geometric(self):
        d = MSeries.geometric(trunc_deg=5).derive(0)
        assert d.trunc_deg == 4
        assert coeff_list(d) == [1, 2, 3, 4, 5]

    def test_derive_mixed_monomial(self):
        z1z2 = MSeries.monomial((1, 1), trunc_deg=3)
        assert z1z2.derive(0) == MSeries(2, 2, {(0, 1): 1})

    def test_derive_at_zero_truncation(self):
        assert MSeries.constant(5, nvars=1, trunc_deg=0).derive(0) == MSeries.zero(1, 0)

    def test_derive_variable_out_of_range(self):
        with pytest.raises(SeriesShapeError):
            MSeries.zero(1, 3).derive(1)

    def test_invert_geometric(self):
        assert uni([1, -1], 3).invert() == MSeries.geometric(trunc_deg=3)

    def test_invert_constant(self):
        assert MSeries.constant(2, nvars=2, trunc_deg=4).invert() == MSeries.constant(
            Fraction(1, 2), nvars=2, trunc_deg=4
        )

    def test_invert_in_z_squared(self):
        assert coeff_list(uni([1, 0, -1], 4).invert()) == [1, 0, 1, 0, 1]

    def test_invert_zero_constant_term(self):
        with pytest.raises(NonInvertibleError):
            uni([0, 1], 3).invert()

    def test_inverse_power_binomials(self):
        assert coeff_list(MSeries.inverse_power([3], trunc_deg=4)) == [1, 3, 6, 10, 15]

    def test_inverse_power_two_variables(self):
        s = MSeries.inverse_power([1, 1], trunc_deg=2)
        assert len(s.terms) == 6
        assert all(v == 1 for v in s.terms.values())

    def test_pow_matches_repeated_mul(self):
        s = uni([1, 2, 0, 1], 5)
        assert s.pow(3) == s * s * s
        assert s.pow(-1) == s.invert()

    def test_coeff_at_examples(self):
        s = uni([1, 2], 3)
        assert s.coeff_at((1,)) == 2
        assert s.coeff_at((2,)) == 0
        assert MSeries.geometric(trunc_deg=5).coeff_at((3,)) == 1

    def test_coeff_at_beyond_truncation(self):
        with pytest.raises(TruncationError):
            uni([1, 2], 1).coeff_at((2,))

    def test_truncate_never_raises_degree(self):
        assert uni([1, 1, 1], 2).truncate(5).trunc_deg == 2


class TestMajorantCalculus:
    """abs, majorizes, component_sum and the diagonal pull-back."""

    def test_abs_examples(self):
        assert uni([1, -1], 2).abs_series() == uni([1, 1], 2)
        assert uni([1, 1], 2).abs_series() == uni([1, 1], 2)
        assert uni([0, 1, Fraction(-3, 2)], 2).abs_series() == uni([0, 1, Fraction(3, 2)], 2)

    def test_majorizes_examples(self):
        g = MSeries.geometric(trunc_deg=4)
        assert majorizes(g, g)
        assert majorizes(uni([0, 1], 3), uni([0, 2], 3))
        assert not majorizes(uni([1, 2], 3), uni([1, 1], 3))

    def test_majorizes_uses_shared_truncation(self):
        assert majorizes(uni([1, 0, 0, 9], 3), uni([1], 2))

    def test_majorizes_shape_mismatch(self):
        with pytest.raises(SeriesShapeError):
            majorizes(MSeries.zero(1, 2), VSeries([MSeries.zero(1, 2)]))

    def test_component_sum_examples(self):
        one = MSeries.constant(1, nvars=1, trunc_deg=3)
        z = MSeries.variable(0, nvars=1, trunc_deg=3)
        g = MSeries.geometric(trunc_deg=3)
        assert VSeries([one, z]).component_sum() == uni([1, 1], 3)
        assert VSeries([g]).component_sum() == g
        assert VSeries([g, g]).component_sum() == g.scale(2)

    def test_diagonal_restrict_examples(self):
        assert MSeries.monomial((1, 1), trunc_deg=3).diagonal_restrict() == MSeries(1, 3, {(2,): 1})
        assert MSeries.constant(7, nvars=3, trunc_deg=2).diagonal_restrict() == MSeries.constant(
            7, nvars=1, trunc_deg=2
        )
        mixed = MSeries(2, 3, {(1, 0): 1, (0, 1): 1, (2, 0): 1})
        assert mixed.diagonal_restrict() == uni([0, 2, 1], 3)

    def test_pullback_of_partial_is_majorized(self):
        """R* d_i z^idx << d/dz R* z^idx for every monomial and variable."""
        for idx in multi_indices(2, 5):
            mono = MSeries.monomial(idx, trunc_deg=5)
            for var in range(2):
                left = mono.derive(var).diagonal_restrict()
                right = mono.diagonal_restrict().derive(0)
                assert majorizes(left, right), (idx, var)

    def test_vseries_requires_common_truncation(self):
        with pytest.raises(SeriesShapeError):
            VSeries([uni([1], 2), uni([1], 3)])
        assert VSeries.common([uni([1], 2), uni([1], 3)]).trunc_deg == 2

    @settings(deadline=None)
    @given(series_family(count=1))
    def test_abs_majorizes_and_is_idempotent(self, family):
        (a,) = family
        assert majorizes(a, a.abs_series())
        assert a.abs_series().abs_series() == a.abs_series()

    @settings(deadline=None)
    @given(series_family(count=4, nonnegative=True))
    def test_majorizes_respects_sum_and_product(self, family):
        a, b, c, d = family
        b, d = a + b, c + d
        assert majorizes(a, b) and majorizes(c, d)
        assert majorizes(a + c, b + d)
        assert majorizes(a * c, b * d)

    @settings(deadline=None)
    @given(series_family(count=3, nonnegative=True))
    def test_majorizes_is_transitive(self, family):
        a, b, c = family
        assert majorizes(a, a + b)
        assert majorizes(a + b, a + b + c)
        assert majorizes(a, a + b + c)

    @settings(deadline=None, max_examples=60)
    @given(linear_system())
    def test_psi_of_linear_system_is_majorized(self, system):
        """psi(sum_j f_j d^j u) << sum_j g_j d^j psi(u) with g_j = sum_{l,k} f_{l,k,j}."""
        f, u, orders = system
        zero = MSeries.zero(u.nvars, u.trunc_deg)
        rows = []
        for l in range(u.m):
            row = zero
            for k in range(u.m):
                for j in orders:
                    row = row + f[(l, k, j)] * u[k].derive_multi(j)
            rows.append(row)
        left = VSeries.common(rows).component_sum()

        psi_u = u.component_sum()
        right = zero
        for j in orders:
            g_j = zero
            for l in range(u.m):
                for k in range(u.m):
                    g_j = g_j + f[(l, k, j)]
            right = right + g_j * psi_u.derive_multi(j)

        assert left.trunc_deg == right.trunc_deg
        assert majorizes(left, right)


class TestRingProperties:
    """Randomized ring axioms, Leibniz rule and inverses, exact at truncation."""

    @settings(max_examples=60, deadline=None)
    @given(series_family())
    def test_commutative(self, family):
        a, b, _ = family
        assert a + b == b + a
        assert a * b == b * a

    @settings(max_examples=60, deadline=None)
    @given(series_family())
    def test_associative(self, family):
        a, b, c = family
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)

    @settings(max_examples=60, deadline=None)
    @given(series_family())
    def test_distributive(self, family):
        a, b, c = family
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=60, deadline=None)
    @given(series_family(count=2), st.integers(0, 2))
    def test_leibniz(self, family, var):
        a, b = family
        var = var % a.nvars
        assert (a * b).derive(var) == a.derive(var) * b + a * b.derive(var)

    @settings(max_examples=60, deadline=None)
    @given(series_family(count=1), st.builds(Fraction, st.integers(1, 5), st.integers(1, 3)))
    def test_invert_is_two_sided(self, family, shift):
        (a,) = family
        a = a + MSeries.constant(shift - a.constant_term(), nvars=a.nvars, trunc_deg=a.trunc_deg)
        one = MSeries.constant(1, nvars=a.nvars, trunc_deg=a.trunc_deg)
        assert a * a.invert() == one
        assert a.invert() * a == one


class TestSeriesDocuments:
    """JSON interchange."""

    def test_terms_are_sorted_and_canonical(self):
        s = MSeries(2, 2, {(1, 0): Fraction(-3, 6), (0, 0): 2})
        assert s.terms_to_list() == [[[0, 0], "2/1"], [[1, 0], "-1/2"]]

    def test_tseries_round_trip(self):
        g = MSeries.geometric(trunc_deg=4)
        series = TSeries([VSeries([g]), VSeries([g.derive(0).scale(Fraction(1, 3))])])
        assert TSeries.from_dict(series.to_dict()) == series
        assert series.valid_degrees == (4, 3)

    def test_tseries_document_with_wrong_length(self):
        document = TSeries([VSeries([uni([1], 1)])]).to_dict()
        document["order_t"] = 3
        with pytest.raises(SeriesError):
            TSeries.from_dict(document)

    @pytest.mark.parametrize(
        "terms, fragment",
        [
            ([[["x"], "1/1"]], "must be a list of integers"),
            ([[[0], "1/1", "extra"]], "must be [exponents"),
            ([[[0], "one"]], "Invalid coefficient"),
            ("0: 1", "Terms must be a list"),
        ],
    )
    def test_malformed_terms(self, terms, fragment):
        with pytest.raises(SeriesError) as exc_info:
            MSeries.from_terms_list(1, 2, terms)
        assert fragment in str(exc_info.value)

    def test_coefficient_entry_without_trunc_deg(self):
        document = {"nvars": 1, "order_t": 0, "coeffs": [{"components": [[]]}]}
        with pytest.raises(SeriesError, match="coeffs\\[0\\] is missing field 'trunc_deg'"):
            TSeries.from_dict(document)
