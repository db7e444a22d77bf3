from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings

from superbracket.algebra import SuperPolynomial, left_derivative
from superbracket.brackets import BracketStructure, poisson_superbracket
from superbracket.deformation import (
    FormalSeries,
    StarProduct,
    associativity_residual,
    check_hochschild,
    check_star_associativity,
    check_theorem3,
    d1_superbracket,
    d1_superbracket_general,
    extract_D1,
    star_multiply,
    star_multiply_series,
    star_supercommutator,
    theorem3_residuals,
)
from superbracket.errors import SeriesOrderMismatchError, TableMismatchError
from superbracket.exprio import parse_expression

from strategies import DESK, TABLE, homogeneous, polys

SP4 = StarProduct(DESK, 4)
SP2 = StarProduct(DESK, 2)


def series(*texts, order=4):
    return FormalSeries(TABLE, order, [parse_expression(t, TABLE) for t in texts])


def even_part(f):
    return SuperPolynomial(f.table, {m: c for m, c in f.items() if not m.odd})


def nth_derivative(f, name, n):
    for _ in range(n):
        f = left_derivative(f, name)
    return f


# -- closed-form Moyal oracle on the even sector ------------------------------------
#
# exp of a sum of commuting pair operators factorises, so the hbar^n
# coefficient is a double binomial sum over the two symplectic pairs.


def moyal_oracle(f, g, n):
    total = SuperPolynomial.zero(f.table)
    for k1 in range(n + 1):
        k2 = n - k1
        norm = Fraction(1, 2**n * factorial(k1) * factorial(k2))
        for j1 in range(k1 + 1):
            for j2 in range(k2 + 1):
                w = norm * comb(k1, j1) * comb(k2, j2) * (-1) ** (k1 - j1 + k2 - j2)
                df = nth_derivative(nth_derivative(f, "q1", j1), "p1", k1 - j1)
                df = nth_derivative(nth_derivative(df, "q2", j2), "p2", k2 - j2)
                dg = nth_derivative(nth_derivative(g, "p1", j1), "q1", k1 - j1)
                dg = nth_derivative(nth_derivative(dg, "p2", j2), "q2", k2 - j2)
                total = total + (df * dg).scale(w)
    return total


class TestSeries:
    def test_embed_and_index(self, P):
        s = FormalSeries.embed(P("q1"), 3)
        assert s[0] == P("q1") and s[3] == 0 and len(s.coeffs) == 4

    def test_arithmetic(self):
        a, b = series("q1", "p1"), series("1", "0", "theta1")
        assert (a + b) == series("q1 + 1", "p1", "theta1")
        assert (a - a).is_zero()
        assert -a == a.scale(-1)

    def test_shift_truncates(self):
        s = series("1", "2", "3", "4", "5")
        assert s.shift() == series("0", "1", "2", "3", "4")
        assert s.shift(5).is_zero()

    def test_order_mismatch(self):
        with pytest.raises(SeriesOrderMismatchError):
            series("1", order=2) + series("1", order=3)
        with pytest.raises(SeriesOrderMismatchError):
            star_multiply_series(series("1", order=2), series("1", order=2), SP4)

    def test_too_many_coefficients(self):
        with pytest.raises(ValueError):
            series("1", "2", "3", order=1)

    def test_table_mismatch(self):
        other = BracketStructure.canonical(1, 0).table
        with pytest.raises(TableMismatchError):
            FormalSeries(TABLE, 1, [SuperPolynomial.one(other)])


class TestStarExamples:
    def test_q_star_p(self, P):
        assert star_multiply(P("q1"), P("p1"), SP2) == series("q1*p1", "1/2", order=2)
        assert star_multiply(P("p1"), P("q1"), SP2) == series("q1*p1", "-1/2", order=2)

    def test_d1_value(self, P):
        assert extract_D1(P("q1"), P("p1"), SP2) == Fraction(1, 2)
        assert d1_superbracket(P("q1"), P("p1"), SP2) == 1

    def test_commutator_of_generators(self, P):
        assert star_supercommutator(P("q1"), P("p1"), SP2) == series("0", "1", order=2)

    def test_odd_off_diagonal_metric(self):
        B = BracketStructure.canonical(0, 2, metric=[[0, 1], [1, 0]])
        t = B.table
        th1, th2 = SuperPolynomial.var(t, "theta1"), SuperPolynomial.var(t, "theta2")
        s = star_multiply(th1, th2, StarProduct(B, 2))
        assert s[0] == th1 * th2 and s[1] == Fraction(1, 2) and s[2] == 0

    def test_clifford_relation(self, P):
        # theta_a * theta_a = hbar/2 with the identity metric
        assert star_multiply(P("theta2"), P("theta2"), SP2) == series("0", "1/2", order=2)
        anti = star_multiply(P("theta1"), P("theta2"), SP2) + star_multiply(P("theta2"), P("theta1"), SP2)
        assert anti.is_zero()

    def test_bivector_square_of_odd_pair(self, P):
        # from the Clifford relations: (th1 th2)*(th1 th2) = -th1*th1*th2*th2 = -hbar^2/4
        s = star_multiply(P("theta1*theta2"), P("theta1*theta2"), SP4)
        assert s == series("0", "0", "-1/4")

    def test_quadratic_even(self, P):
        s = star_multiply(P("q1^2"), P("p1^2"), SP4)
        assert s == series("q1^2*p1^2", "2*q1*p1", "1/2")

    def test_order_zero(self, P):
        sp = StarProduct(DESK, 0)
        assert star_multiply(P("q1"), P("p1"), sp) == series("q1*p1", order=0)
        with pytest.raises(ValueError):
            extract_D1(P("q1"), P("p1"), sp)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            StarProduct(DESK, -1)


@settings(max_examples=80, deadline=None)
@given(polys(), polys())
def test_even_sector_matches_moyal_closed_form(f, g):
    f, g = even_part(f), even_part(g)
    s = star_multiply(f, g, SP4)
    for n in range(5):
        assert s[n] == moyal_oracle(f, g, n)


@settings(max_examples=100, deadline=None)
@given(polys(), polys())
def test_order_zero_is_product(f, g):
    assert star_multiply(f, g, SP2)[0] == f * g


@settings(max_examples=100, deadline=None)
@given(homogeneous(), homogeneous())
def test_d1_bracket_is_canonical_bracket(f, g):
    assert d1_superbracket(f, g, SP2) == poisson_superbracket(f, g, DESK)


@settings(max_examples=50, deadline=None)
@given(polys(), polys())
def test_d1_general_matches_canonical(f, g):
    assert d1_superbracket_general(f, g, SP2) == poisson_superbracket(f, g, DESK)


@settings(max_examples=40, deadline=None)
@given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=3))
def test_associative_to_order_four(f, g, h):
    assert check_star_associativity(f, g, h, SP4)


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_hochschild_cocycle(f, g, h):
    assert check_hochschild(f, g, h, SP2)


@settings(max_examples=40, deadline=None)
@given(homogeneous(), homogeneous(), homogeneous())
def test_d1_bracket_poisson_axioms(f, g, h):
    assert check_theorem3(f, g, h, SP2, DESK)


def test_d1_axiom_residual_keys(P):
    res = theorem3_residuals(P("q1"), P("theta1"), P("p1"), SP2, DESK)
    assert set(res) == {"skew", "leibniz", "jacobi", "canonical"}
    assert all(r.is_zero() for r in res.values())


def test_associativity_residual_shape(P):
    r = associativity_residual(P("q1"), P("p1"), P("q1*p1"), SP4)
    assert r.order == 4 and r.is_zero()


def test_series_product_is_hbar_linear(P):
    F = series("q1", "p1")
    G = series("p1", "0", "theta1")
    left = star_multiply_series(F.shift(), G, SP4)
    assert left == star_multiply_series(F, G, SP4).shift()
