from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import given, settings

from superbracket.algebra import Parity, SuperPolynomial, graded_parts, parity_of, variables
from superbracket.brackets import (
    BracketStructure,
    check_derivation,
    check_leibniz,
    check_super_jacobi,
    check_super_jacobi_general,
    check_super_skew,
    jacobi_residual,
    poisson_superbracket,
    skew_residual,
)
from superbracket.errors import TableMismatchError

from strategies import DESK, TABLE, homogeneous, polys


def pb(f, g, B=DESK):
    return poisson_superbracket(f, g, B)


# -- independent oracle -------------------------------------------------------
#
# Builds the bracket from its values on generators alone, using graded skew
# symmetry and the second-slot product rule on words of generators.  No
# derivatives are involved.


def _gen_value(x, y, B):
    t = B.table
    xo, xi = t.lookup(x)
    yo, yi = t.lookup(y)
    if xo != yo:
        return Fraction(0)
    if xo:
        return B.odd_metric[xi][yi]
    for q, p in B.pairs:
        if (xi, yi) == (q, p):
            return Fraction(1)
        if (xi, yi) == (p, q):
            return Fraction(-1)
    return Fraction(0)


def _word_parity(word, t):
    return sum(t.lookup(v)[0] for v in word) % 2


def _word_poly(word, t):
    return reduce(lambda a, b: a * b, (SuperPolynomial.var(t, v) for v in word), SuperPolynomial.one(t))


def _oracle_words(u, v, B):
    t = B.table
    if not u or not v:
        return SuperPolynomial.zero(t)
    if len(v) == 1:
        if len(u) == 1:
            return SuperPolynomial.constant(t, _gen_value(u[0], v[0], B))
        sign = -((-1) ** (_word_parity(u, t) * _word_parity(v, t)))
        return _oracle_words(v, u, B).scale(sign)
    head, rest = v[:1], v[1:]
    sign = (-1) ** (_word_parity(u, t) * _word_parity(head, t))
    return _oracle_words(u, head, B) * _word_poly(rest, t) + (
        _word_poly(head, t) * _oracle_words(u, rest, B)
    ).scale(sign)


def _word(m, t):
    out = []
    for i, e in enumerate(m.even):
        out += [t.even_vars[i]] * e
    return out + [t.odd_vars[a] for a in m.odd]


def oracle_bracket(f, g, B=DESK):
    t = B.table
    total = SuperPolynomial.zero(t)
    for mf, cf in f.items():
        for mg, cg in g.items():
            total = total + _oracle_words(_word(mf, t), _word(mg, t), B).scale(cf * cg)
    return total


# -- tests ----------------------------------------------------------------------


class TestGenerators:
    def test_normalization(self, P):
        assert pb(P("q1"), P("p1")) == 1
        assert pb(P("p1"), P("q1")) == -1
        assert pb(P("q1"), P("p2")) == 0
        assert pb(P("q2"), P("q2")) == 0
        assert pb(P("theta1"), P("theta1")) == 1
        assert pb(P("theta1"), P("theta2")) == 0
        assert pb(P("q1"), P("theta1")) == 0

    def test_all_generator_pairs_match_oracle(self):
        gens = list(variables(TABLE).values())
        for x in gens:
            for y in gens:
                assert pb(x, y) == oracle_bracket(x, y)

    def test_examples(self, P):
        assert pb(P("q1*p1"), P("p1")) == P("p1")
        assert pb(P("q1^2"), P("p1")) == P("2*q1")
        assert pb(P("theta1*theta2"), P("theta1")) == P("-theta2")
        assert pb(P("theta1"), P("theta1*theta2")) == P("theta2")
        assert pb(P("theta1*theta2"), P("theta1*theta2")) == 0
        assert pb(P("theta1*theta2"), P("theta2*theta3")) == P("theta1*theta3")

    def test_general_metric(self):
        B = BracketStructure.canonical(1, 2, metric=[[0, Fraction(1, 2)], [Fraction(1, 2), 3]])
        t = B.table
        th1, th2 = (SuperPolynomial.var(t, v) for v in t.odd_vars)
        assert pb(th1, th2, B) == Fraction(1, 2)
        assert pb(th2, th2, B) == 3
        assert pb(th1, th1, B) == 0
        assert pb(th1 * th2, th2, B) == oracle_bracket(th1 * th2, th2, B)

    def test_zero_metric(self):
        B = BracketStructure.canonical(1, 2, metric=None)
        th = SuperPolynomial.var(B.table, "theta1")
        assert pb(th, th, B) == 0

    def test_asymmetric_metric_rejected(self):
        with pytest.raises(ValueError):
            BracketStructure.canonical(1, 2, metric=[[0, 1], [2, 0]])

    def test_bad_pairs_rejected(self):
        B = BracketStructure.canonical(1, 1)
        with pytest.raises(ValueError):
            BracketStructure.from_names(B.table, [("q1", "theta1")])
        with pytest.raises(ValueError):
            BracketStructure(B.table, (), ((1,),))

    def test_table_mismatch(self, P):
        other = BracketStructure.canonical(1, 1)
        with pytest.raises(TableMismatchError):
            poisson_superbracket(P("q1"), SuperPolynomial.var(other.table, "q1"), DESK)


@settings(max_examples=150, deadline=None)
@given(polys(), polys())
def test_matches_generator_oracle(f, g):
    assert pb(f, g) == oracle_bracket(f, g)


@settings(max_examples=150, deadline=None)
@given(homogeneous(), homogeneous())
def test_super_skew(f, g):
    assert check_super_skew(f, g, DESK)


@settings(max_examples=150, deadline=None)
@given(homogeneous(), homogeneous(), polys())
def test_leibniz_both_slots(f, g, h):
    assert check_leibniz(f, g, h, DESK)
    assert check_derivation(f, g, h, DESK)


@settings(max_examples=150, deadline=None)
@given(homogeneous(), homogeneous(), homogeneous())
def test_super_jacobi(f, g, h):
    assert check_super_jacobi(f, g, h, DESK)


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), polys())
def test_super_jacobi_inhomogeneous(f, g, h):
    assert check_super_jacobi_general(f, g, h, DESK)


@settings(max_examples=100, deadline=None)
@given(homogeneous(), homogeneous())
def test_bracket_is_even(f, g):
    # constant structure: the bracket adds no parity
    r = pb(f, g)
    if r:
        assert parity_of(r) == parity_of(f) + parity_of(g)


@given(polys(), polys(), polys())
def test_bilinear(f, g, h):
    assert pb(f + g, h) == pb(f, h) + pb(g, h)
    assert pb(h, f.scale(3)) == pb(h, f).scale(3)


def test_printed_first_slot_sign_fails(P):
    """With (-1)^{|f||g|} in place of (-1)^{|g||h|} the first-slot rule breaks."""
    f, g, h = P("q1*theta1"), P("theta2"), P("p1")
    wrong = pb(f * g, h) - f * pb(g, h) - (pb(f, h) * g).scale((parity_of(f) * parity_of(g)).sign())
    assert wrong == P("2*theta1*theta2")
    assert check_leibniz(f, g, h, DESK)


def test_residual_helpers_with_custom_bracket(P):
    def zero(a, b):
        return SuperPolynomial.zero(a.table)

    assert skew_residual(zero, P("q1"), P("theta1")).is_zero()
    assert jacobi_residual(zero, P("q1"), P("p1"), P("theta1")).is_zero()
    assert not skew_residual(lambda a, b: a * b, P("q1"), P("p1")).is_zero()


def test_parity_enum_in_components(P):
    f = P("q1 + theta1")
    assert [p for p, _ in graded_parts(f)] == [Parity.EVEN, Parity.ODD]
