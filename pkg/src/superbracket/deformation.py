"""hbar-truncated formal series and the flat Moyal star product on superpolynomials.

The star product exponentiates half the constant bivector

    P = sum_i (<-d_qi ->d_pi - <-d_pi ->d_qi) + sum_ab g_ab <-d_theta_a ->d_theta_b

where ``<-d`` is a right derivative on the left factor and ``->d`` a left
derivative on the right factor:

    f * g = sum_k hbar^k / (2^k k!) P^k(f, g)

Each ``P^k`` is evaluated on the tensor ``f (x) g`` in the monomial basis and
only multiplied out at the end.  Every pair ``<-d_x ->d_y`` is Grassmann even,
so pairs may be applied in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .algebra import (
    Monomial,
    SuperPolynomial,
    VariableTable,
    graded_parts,
    monomial_left_derivative,
    monomial_right_derivative,
    normalize_product,
    parity_of,
)
from .brackets import (
    BracketStructure,
    derivation_residual,
    jacobi_residual,
    poisson_superbracket,
    skew_residual,
)
from .errors import SeriesOrderMismatchError, TableMismatchError

DEFAULT_ORDER = 4


class FormalSeries:
    """``c_0 + c_1 hbar + ... + c_K hbar^K`` with polynomial coefficients."""

    __slots__ = ("table", "order", "coeffs")

    def __init__(self, table: VariableTable, order: int, coeffs: Sequence[SuperPolynomial] = ()):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        coeffs = list(coeffs)
        if len(coeffs) > order + 1:
            raise ValueError(f"{len(coeffs)} coefficients do not fit order {order}")
        for c in coeffs:
            if c.table != table:
                raise TableMismatchError("series coefficient over a different table")
        coeffs += [SuperPolynomial.zero(table)] * (order + 1 - len(coeffs))
        self.table = table
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def embed(cls, f: SuperPolynomial, order: int) -> "FormalSeries":
        return cls(f.table, order, [f])

    @classmethod
    def zero(cls, table: VariableTable, order: int) -> "FormalSeries":
        return cls(table, order)

    def __getitem__(self, k: int) -> SuperPolynomial:
        return self.coeffs[k]

    def _check(self, other: "FormalSeries"):
        if self.table != other.table:
            raise TableMismatchError("series over different tables")
        if self.order != other.order:
            raise SeriesOrderMismatchError(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        self._check(other)
        return FormalSeries(self.table, self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        self._check(other)
        return FormalSeries(self.table, self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FormalSeries(self.table, self.order, [-c for c in self.coeffs])

    def scale(self, c) -> "FormalSeries":
        return FormalSeries(self.table, self.order, [x.scale(c) for x in self.coeffs])

    def shift(self, k: int = 1) -> "FormalSeries":
        """Multiply by ``hbar^k`` and truncate."""
        zero = SuperPolynomial.zero(self.table)
        return FormalSeries(self.table, self.order, ([zero] * k + list(self.coeffs))[: self.order + 1])

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.table == other.table and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.table, self.order, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __repr__(self):
        from .exprio import format_series

        return f"FormalSeries(order={self.order}, {format_series(self)!r})"


@dataclass(frozen=True)
class StarProduct:
    bracket: BracketStructure
    order: int = DEFAULT_ORDER
    _bivector: Tuple[Tuple[bool, int, int, Fraction], ...] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("truncation order must be nonnegative")
        entries = []
        for qi, pi in self.bracket.pairs:
            entries.append((False, qi, pi, Fraction(1)))
            entries.append((False, pi, qi, Fraction(-1)))
        for a, b, w in self.bracket.odd_entries():
            entries.append((True, a, b, w))
        object.__setattr__(self, "_bivector", tuple(entries))

    @property
    def table(self) -> VariableTable:
        return self.bracket.table

    def bidifferential(self, f: SuperPolynomial, g: SuperPolynomial, k: int) -> SuperPolynomial:
        """``D_k(f, g) = P^k(f, g) / (2^k k!)``."""
        if f.table != self.table or g.table != self.table:
            raise TableMismatchError("star operands must use the star product's table")
        return _bidifferential_levels(self._bivector, f, g, k)[k]

    def levels(self, f: SuperPolynomial, g: SuperPolynomial, top: int) -> List[SuperPolynomial]:
        if f.table != self.table or g.table != self.table:
            raise TableMismatchError("star operands must use the star product's table")
        return _bidifferential_levels(self._bivector, f, g, top)


def _bidifferential_levels(bivector, f, g, top) -> List[SuperPolynomial]:
    table = f.table
    tensor: Dict[Tuple[Monomial, Monomial], Fraction] = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            tensor[(ma, mb)] = ca * cb
    out = []
    for k in range(top + 1):
        if k:
            nxt: Dict[Tuple[Monomial, Monomial], Fraction] = {}
            for (ma, mb), c in tensor.items():
                for is_odd, x, y, w in bivector:
                    da = monomial_right_derivative(ma, is_odd, x)
                    if da is None:
                        continue
                    db = monomial_left_derivative(mb, is_odd, y)
                    if db is None:
                        continue
                    key = (da[1], db[1])
                    nxt[key] = nxt.get(key, Fraction(0)) + c * w * da[0] * db[0]
            tensor = {key: c for key, c in nxt.items() if c}
        norm = Fraction(1, 2**k * factorial(k))
        terms: Dict[Monomial, Fraction] = {}
        for (ma, mb), c in tensor.items():
            prod = normalize_product(ma, mb)
            if prod is None:
                continue
            sign, m = prod
            terms[m] = terms.get(m, Fraction(0)) + sign * c * norm
        out.append(SuperPolynomial._raw(table, {m: c for m, c in terms.items() if c}))
    return out


def star_multiply(f: SuperPolynomial, g: SuperPolynomial, sp: StarProduct) -> FormalSeries:
    return FormalSeries(sp.table, sp.order, sp.levels(f, g, sp.order))


def star_multiply_series(F: FormalSeries, G: FormalSeries, sp: StarProduct) -> FormalSeries:
    """Cauchy product ``sum_{k,l} (F_k * G_l) hbar^(k+l)`` truncated at ``sp.order``."""
    F._check(G)
    if F.order != sp.order:
        raise SeriesOrderMismatchError(f"series order {F.order} vs star product order {sp.order}")
    K = sp.order
    acc = [SuperPolynomial.zero(sp.table) for _ in range(K + 1)]
    for k, fk in enumerate(F.coeffs):
        if fk.is_zero():
            continue
        for l, gl in enumerate(G.coeffs[: K - k + 1]):
            if gl.is_zero():
                continue
            for j, d in enumerate(sp.levels(fk, gl, K - k - l)):
                acc[k + l + j] = acc[k + l + j] + d
    return FormalSeries(sp.table, K, acc)


def extract_D1(f: SuperPolynomial, g: SuperPolynomial, sp: StarProduct) -> SuperPolynomial:
    if sp.order < 1:
        raise ValueError("D1 needs a star product of order >= 1")
    return sp.bidifferential(f, g, 1)


def d1_superbracket(f: SuperPolynomial, g: SuperPolynomial, sp: StarProduct) -> SuperPolynomial:
    """``D1(f, g) - (-1)^{|f||g|} D1(g, f)`` for homogeneous f, g."""
    pf, pg = parity_of(f), parity_of(g)
    return extract_D1(f, g, sp) - extract_D1(g, f, sp).scale((pf * pg).sign())


def d1_superbracket_general(f: SuperPolynomial, g: SuperPolynomial, sp: StarProduct) -> SuperPolynomial:
    total = SuperPolynomial.zero(sp.table)
    for _, fc in graded_parts(f):
        for _, gc in graded_parts(g):
            total = total + d1_superbracket(fc, gc, sp)
    return total


def star_supercommutator(f: SuperPolynomial, g: SuperPolynomial, sp: StarProduct) -> FormalSeries:
    pf, pg = parity_of(f), parity_of(g)
    return star_multiply(f, g, sp) - star_multiply(g, f, sp).scale((pf * pg).sign())


def hochschild_residual(f, g, h, sp: StarProduct) -> SuperPolynomial:
    """``f D1(g,h) - D1(fg,h) + D1(f,gh) - D1(f,g) h``."""
    D1 = lambda a, b: extract_D1(a, b, sp)
    return f * D1(g, h) - D1(f * g, h) + D1(f, g * h) - D1(f, g) * h


def check_hochschild(f, g, h, sp: StarProduct) -> bool:
    return hochschild_residual(f, g, h, sp).is_zero()


def associativity_residual(f, g, h, sp: StarProduct) -> FormalSeries:
    K = sp.order
    F, G, H = (FormalSeries.embed(x, K) for x in (f, g, h))
    left = star_multiply_series(star_multiply_series(F, G, sp), H, sp)
    right = star_multiply_series(F, star_multiply_series(G, H, sp), sp)
    return left - right


def check_star_associativity(f, g, h, sp: StarProduct) -> bool:
    return associativity_residual(f, g, h, sp).is_zero()


def theorem3_residuals(f, g, h, sp: StarProduct, B: BracketStructure) -> Dict[str, SuperPolynomial]:
    """Residuals of every Poisson axiom for the antisymmetrised D1 bracket,
    plus its difference from the canonical bracket on ``(f, g)``."""
    br = lambda a, b: d1_superbracket(a, b, sp)
    return {
        "skew": skew_residual(br, f, g),
        "leibniz": derivation_residual(br, f, g, h),
        "jacobi": jacobi_residual(br, f, g, h),
        "canonical": br(f, g) - poisson_superbracket(f, g, B),
    }


def check_theorem3(f, g, h, sp: StarProduct, B: BracketStructure) -> bool:
    return all(r.is_zero() for r in theorem3_residuals(f, g, h, sp, B).values())
