"""Canonical Poisson superbracket and the Poisson-superalgebra axiom checks.

The residual helpers take the bracket as a callable, so the same checks run
against the canonical bracket, the Dirac bracket and the star-product bracket.
Every residual is an exact polynomial; an axiom holds iff its residual is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .algebra import (
    Monomial,
    Parity,
    SuperPolynomial,
    VariableTable,
    graded_parts,
    monomial_left_derivative,
    normalize_product,
    parity_of,
)
from .errors import TableMismatchError

Bracket = Callable[[SuperPolynomial, SuperPolynomial], SuperPolynomial]


@dataclass(frozen=True)
class BracketStructure:
    """Constant bracket data on the generators.

    ``pairs`` lists ``(q, p)`` even-variable index pairs with ``{q, p} = 1``.
    ``odd_metric[a][b]`` is ``{theta_a, theta_b}``; it must be symmetric and
    may be degenerate.
    """

    table: VariableTable
    pairs: Tuple[Tuple[int, int], ...]
    odd_metric: Tuple[Tuple[Fraction, ...], ...]
    _odd_entries: Tuple[Tuple[int, int, Fraction], ...] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        pairs = tuple((int(q), int(p)) for q, p in self.pairs)
        seen = [q for pair in pairs for q in pair]
        if sorted(seen) != list(range(self.table.n_even)):
            raise ValueError("every even variable must appear in exactly one symplectic pair")
        n = self.table.n_odd
        metric = tuple(tuple(Fraction(x) for x in row) for row in self.odd_metric)
        if len(metric) != n or any(len(row) != n for row in metric):
            raise ValueError(f"odd metric must be {n}x{n}")
        for a in range(n):
            for b in range(a):
                if metric[a][b] != metric[b][a]:
                    raise ValueError(f"odd metric is not symmetric at ({a}, {b})")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "odd_metric", metric)
        entries = tuple(
            (a, b, metric[a][b]) for a in range(n) for b in range(n) if metric[a][b]
        )
        object.__setattr__(self, "_odd_entries", entries)

    @classmethod
    def from_names(cls, table: VariableTable, pairs, metric=None) -> "BracketStructure":
        """Build from ``[(q_name, p_name), ...]`` and a metric.

        ``metric`` may be ``None`` (all zero), ``"identity"``, a full matrix,
        or a mapping ``{(a_name, b_name): value}`` that is symmetrised.
        """
        idx = []
        for q, p in pairs:
            qo, qi = table.lookup(q)
            po, pi = table.lookup(p)
            if qo or po:
                raise ValueError("symplectic pairs must consist of even variables")
            idx.append((qi, pi))
        n = table.n_odd
        if metric is None:
            rows = [[0] * n for _ in range(n)]
        elif isinstance(metric, str):
            if metric != "identity":
                raise ValueError(f"unknown metric shorthand {metric!r}")
            rows = [[int(a == b) for b in range(n)] for a in range(n)]
        elif isinstance(metric, dict):
            rows = [[Fraction(0)] * n for _ in range(n)]
            for (a, b), v in metric.items():
                ao, ai = table.lookup(a)
                bo, bi = table.lookup(b)
                if not (ao and bo):
                    raise ValueError("metric entries must reference odd variables")
                v = Fraction(v)
                for i, j in ((ai, bi), (bi, ai)):
                    if rows[i][j] and rows[i][j] != v:
                        raise ValueError(f"conflicting metric entries for ({a}, {b})")
                    rows[i][j] = v
        else:
            rows = metric
        return cls(table, tuple(idx), tuple(tuple(r) for r in rows))

    @classmethod
    def canonical(cls, n_pairs: int, n_odd: int, metric="identity") -> "BracketStructure":
        """Table ``q1 p1 q2 p2 ... theta1 ...`` with the standard pairing."""
        even = []
        for i in range(1, n_pairs + 1):
            even += [f"q{i}", f"p{i}"]
        table = VariableTable(tuple(even), tuple(f"theta{a}" for a in range(1, n_odd + 1)))
        pairs = [(f"q{i}", f"p{i}") for i in range(1, n_pairs + 1)]
        return cls.from_names(table, pairs, metric)

    def odd_entries(self):
        return self._odd_entries


def _pair_products(
    f: SuperPolynomial, g: SuperPolynomial, i: int, j: int, is_odd: bool
) -> Dict[Monomial, Fraction]:
    # sum over terms of (d_i f)(d_j g) with left derivatives, as a raw dict
    df = []
    for m, c in f.items():
        d = monomial_left_derivative(m, is_odd, i)
        if d is not None:
            df.append((d[1], d[0] * c))
    if not df:
        return {}
    dg = []
    for m, c in g.items():
        d = monomial_left_derivative(m, is_odd, j)
        if d is not None:
            dg.append((d[1], d[0] * c))
    out: Dict[Monomial, Fraction] = {}
    for ma, ca in df:
        for mb, cb in dg:
            prod = normalize_product(ma, mb)
            if prod is None:
                continue
            sign, m = prod
            out[m] = out.get(m, Fraction(0)) + sign * ca * cb
    return out


def _accumulate(acc: Dict[Monomial, Fraction], part: Dict[Monomial, Fraction], w):
    for m, c in part.items():
        acc[m] = acc.get(m, Fraction(0)) + w * c


def poisson_superbracket(
    f: SuperPolynomial, g: SuperPolynomial, B: BracketStructure
) -> SuperPolynomial:
    """Canonical superbracket fixed by ``{q_i, p_j} = delta_ij`` and ``{theta_a, theta_b} = g_ab``.

        {f, g} = sum_i (d_qi f d_pi g - d_pi f d_qi g)
                 + s(f) sum_ab g_ab (d_theta_a f)(d_theta_b g)

    with left derivatives and ``s(f) = (-1) ** (parity(f) + 1)`` applied per
    homogeneous component of ``f``.  That sign turns the left derivative of
    ``f`` into a right derivative, which is what makes the odd part graded
    antisymmetric and a derivation in each slot.
    """
    if f.table != B.table or g.table != B.table:
        raise TableMismatchError("bracket operands must use the bracket's variable table")
    acc: Dict[Monomial, Fraction] = {}
    for qi, pi in B.pairs:
        _accumulate(acc, _pair_products(f, g, qi, pi, False), 1)
        _accumulate(acc, _pair_products(f, g, pi, qi, False), -1)
    entries = B.odd_entries()
    if entries:
        for parity, fc in graded_parts(f):
            s = 1 if parity is Parity.ODD else -1
            for a, b, w in entries:
                _accumulate(acc, _pair_products(fc, g, a, b, True), s * w)
    return SuperPolynomial._raw(B.table, {m: c for m, c in acc.items() if c})


# -- axiom residuals ----------------------------------------------------


def skew_residual(br: Bracket, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    """``{f,g} + (-1)^{|f||g|} {g,f}`` for homogeneous f, g."""
    pf, pg = parity_of(f), parity_of(g)
    return br(f, g) + br(g, f).scale((pf * pg).sign())


def leibniz_residual(
    br: Bracket, f: SuperPolynomial, g: SuperPolynomial, h: SuperPolynomial
) -> SuperPolynomial:
    """Residual of the product rule in the first slot.

        {fg, h} - f{g, h} - (-1)^{|g||h|} {f, h} g

    f and g must be homogeneous; h is split into homogeneous components and
    the rule is applied to each.
    """
    parity_of(f)
    pg = parity_of(g)
    lhs = br(f * g, h)
    rhs = SuperPolynomial.zero(f.table)
    for ph, hc in graded_parts(h):
        rhs = rhs + f * br(g, hc) + (br(f, hc) * g).scale((pg * ph).sign())
    return lhs - rhs


def derivation_residual(
    br: Bracket, f: SuperPolynomial, g: SuperPolynomial, h: SuperPolynomial
) -> SuperPolynomial:
    """Residual of the product rule in the second slot.

        {f, gh} - {f, g} h - (-1)^{|f||g|} g {f, h}

    f and g homogeneous, h arbitrary.
    """
    pf, pg = parity_of(f), parity_of(g)
    return br(f, g * h) - br(f, g) * h - (g * br(f, h)).scale((pf * pg).sign())


def jacobi_residual(
    br: Bracket, f: SuperPolynomial, g: SuperPolynomial, h: SuperPolynomial
) -> SuperPolynomial:
    """Graded cyclic sum for homogeneous f, g, h.

        (-1)^{|f||h|} {f,{g,h}} + (-1)^{|f||g|} {g,{h,f}} + (-1)^{|g||h|} {h,{f,g}}
    """
    pf, pg, ph = parity_of(f), parity_of(g), parity_of(h)
    return (
        br(f, br(g, h)).scale((pf * ph).sign())
        + br(g, br(h, f)).scale((pf * pg).sign())
        + br(h, br(f, g)).scale((pg * ph).sign())
    )


def jacobi_residual_general(
    br: Bracket, f: SuperPolynomial, g: SuperPolynomial, h: SuperPolynomial
) -> SuperPolynomial:
    """Bilinear extension of the cyclic sum: one homogeneous residual per
    component triple, added up."""
    total = SuperPolynomial.zero(f.table)
    for _, fc in graded_parts(f):
        for _, gc in graded_parts(g):
            for _, hc in graded_parts(h):
                total = total + jacobi_residual(br, fc, gc, hc)
    return total


def jacobi_residuals_general(br, f, g, h) -> List[SuperPolynomial]:
    return [
        jacobi_residual(br, fc, gc, hc)
        for _, fc in graded_parts(f)
        for _, gc in graded_parts(g)
        for _, hc in graded_parts(h)
    ]


# -- public checkers for the canonical bracket ------------------------------


def _canonical(B: BracketStructure) -> Bracket:
    return lambda a, b: poisson_superbracket(a, b, B)


def check_super_skew(f, g, B: BracketStructure) -> bool:
    return skew_residual(_canonical(B), f, g).is_zero()


def check_leibniz(f, g, h, B: BracketStructure) -> bool:
    return leibniz_residual(_canonical(B), f, g, h).is_zero()


def check_derivation(f, g, h, B: BracketStructure) -> bool:
    return derivation_residual(_canonical(B), f, g, h).is_zero()


def check_super_jacobi(f, g, h, B: BracketStructure) -> bool:
    return jacobi_residual(_canonical(B), f, g, h).is_zero()


def check_super_jacobi_general(f, g, h, B: BracketStructure) -> bool:
    br = _canonical(B)
    return all(r.is_zero() for r in jacobi_residuals_general(br, f, g, h))
