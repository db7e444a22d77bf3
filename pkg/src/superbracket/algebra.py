"""Supercommutative polynomials over the rationals.

An element is a sparse map from canonical monomials to nonzero ``Fraction``
coefficients.  A monomial is a pair ``(even, odd)``: ``even`` is a tuple of
exponents indexed like ``VariableTable.even_vars`` and ``odd`` is a strictly
increasing tuple of odd-variable indices.  Reordering odd factors into that
form is where every Grassmann sign comes from; the sign is folded into the
coefficient so equal elements always have equal term maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple

from .errors import NonhomogeneousError, TableMismatchError, UnknownVariableError


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__

    def __mul__(self, other):
        return Parity((int(self) * int(other)) % 2)

    __rmul__ = __mul__

    def sign(self) -> int:
        """``(-1) ** self``."""
        return -1 if self else 1

    def __str__(self):
        return "Even" if self is Parity.EVEN else "Odd"


@dataclass(frozen=True)
class VariableTable:
    """Ordered even and odd variable names; the order fixes the monomial order."""

    even_vars: Tuple[str, ...]
    odd_vars: Tuple[str, ...] = ()
    _index: Dict[str, Tuple[bool, int]] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "even_vars", tuple(self.even_vars))
        object.__setattr__(self, "odd_vars", tuple(self.odd_vars))
        index = {}
        for i, name in enumerate(self.even_vars):
            if name in index:
                raise ValueError(f"duplicate variable name {name!r}")
            index[name] = (False, i)
        for i, name in enumerate(self.odd_vars):
            if name in index:
                raise ValueError(f"duplicate variable name {name!r}")
            index[name] = (True, i)
        object.__setattr__(self, "_index", index)

    @property
    def n_even(self) -> int:
        return len(self.even_vars)

    @property
    def n_odd(self) -> int:
        return len(self.odd_vars)

    def __contains__(self, name) -> bool:
        return name in self._index

    def lookup(self, name: str) -> Tuple[bool, int]:
        """Return ``(is_odd, index)`` for a declared name."""
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def is_odd(self, name: str) -> bool:
        return self.lookup(name)[0]

    def names(self) -> Tuple[str, ...]:
        return self.even_vars + self.odd_vars

    def one_monomial(self) -> "Monomial":
        return Monomial((0,) * self.n_even, ())


class Monomial(NamedTuple):
    even: Tuple[int, ...]
    odd: Tuple[int, ...]

    @property
    def parity(self) -> Parity:
        return Parity(len(self.odd) % 2)

    @property
    def degree(self) -> int:
        return sum(self.even) + len(self.odd)

    def is_constant(self) -> bool:
        return not self.odd and not any(self.even)


Zero = None  # returned by normalize_product when the product vanishes


def normalize_product(a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
    """Multiply two canonical monomials.

    Returns ``(sign, monomial)`` or ``None`` when an odd variable repeats.
    The sign is the parity of the number of transpositions needed to sort
    ``a.odd + b.odd``.
    """
    if len(a.even) != len(b.even):
        raise TableMismatchError("monomials over different variable tables")
    even = tuple(x + y for x, y in zip(a.even, b.even))
    ao, bo = a.odd, b.odd
    if not bo:
        return 1, Monomial(even, ao)
    if not ao:
        return 1, Monomial(even, bo)
    # merge, counting how many entries of ``a`` each entry of ``b`` jumps over
    merged = []
    inversions = 0
    i = j = 0
    na, nb = len(ao), len(bo)
    while i < na and j < nb:
        x, y = ao[i], bo[j]
        if x < y:
            merged.append(x)
            i += 1
        elif y < x:
            merged.append(y)
            inversions += na - i
            j += 1
        else:
            return None
    merged.extend(ao[i:])
    merged.extend(bo[j:])
    return (-1 if inversions & 1 else 1), Monomial(even, tuple(merged))


def _coerce_coefficient(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class SuperPolynomial:
    """Immutable element of the free supercommutative algebra over a table."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VariableTable, terms: Optional[Mapping[Monomial, object]] = None):
        self.table = table
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = Monomial(tuple(mono[0]), tuple(mono[1]))
                _check_monomial(table, mono)
                c = _coerce_coefficient(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table: VariableTable, terms: Dict[Monomial, Fraction]) -> "SuperPolynomial":
        # trusted constructor: terms are canonical with no zero coefficients
        obj = cls.__new__(cls)
        obj.table = table
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, table: VariableTable) -> "SuperPolynomial":
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table: VariableTable, c) -> "SuperPolynomial":
        c = _coerce_coefficient(c)
        if not c:
            return cls.zero(table)
        return cls._raw(table, {table.one_monomial(): c})

    @classmethod
    def one(cls, table: VariableTable) -> "SuperPolynomial":
        return cls.constant(table, 1)

    @classmethod
    def var(cls, table: VariableTable, name: str) -> "SuperPolynomial":
        is_odd, i = table.lookup(name)
        if is_odd:
            mono = Monomial((0,) * table.n_even, (i,))
        else:
            exps = [0] * table.n_even
            exps[i] = 1
            mono = Monomial(tuple(exps), ())
        return cls._raw(table, {mono: Fraction(1)})

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get(self.table.one_monomial(), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPolynomial.constant(self.table, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .exprio import format_canonical

        return f"SuperPolynomial({format_canonical(self)!r})"

    def __str__(self):
        from .exprio import format_canonical

        return format_canonical(self)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "SuperPolynomial"):
        if self.table != other.table:
            raise TableMismatchError("operands use different variable tables")

    def _lift(self, other) -> "SuperPolynomial":
        if isinstance(other, SuperPolynomial):
            self._check(other)
            return other
        return SuperPolynomial.constant(self.table, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            return mul(self, other)
        try:
            c = _coerce_coefficient(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        # scalars are even, so left and right scalar multiplication agree
        try:
            c = _coerce_coefficient(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        result = SuperPolynomial.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "SuperPolynomial":
        c = _coerce_coefficient(c)
        if not c:
            return SuperPolynomial.zero(self.table)
        return SuperPolynomial._raw(self.table, {m: c * v for m, v in self._terms.items()})

    # -- grading -------------------------------------------------------

    def parity(self) -> Parity:
        return parity_of(self)

    def is_homogeneous(self) -> bool:
        parities = {len(m.odd) & 1 for m in self._terms}
        return len(parities) <= 1

    def components(self) -> Tuple["SuperPolynomial", "SuperPolynomial"]:
        return homogeneous_components(self)


def _check_monomial(table: VariableTable, mono: Monomial):
    if len(mono.even) != table.n_even:
        raise TableMismatchError("monomial exponent vector has the wrong length")
    if any(e < 0 for e in mono.even):
        raise ValueError("negative exponent")
    odd = mono.odd
    if any(not 0 <= i < table.n_odd for i in odd):
        raise TableMismatchError("odd index out of range")
    if any(odd[k] >= odd[k + 1] for k in range(len(odd) - 1)):
        raise ValueError("odd factors must be strictly increasing")


def add(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    f._check(g)
    if len(f._terms) < len(g._terms):
        f, g = g, f
    terms = dict(f._terms)
    for m, c in g._terms.items():
        s = terms.get(m)
        if s is None:
            terms[m] = c
        else:
            s += c
            if s:
                terms[m] = s
            else:
                del terms[m]
    return SuperPolynomial._raw(f.table, terms)


def mul(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    f._check(g)
    terms: Dict[Monomial, Fraction] = {}
    gt = list(g._terms.items())
    for ma, ca in f._terms.items():
        for mb, cb in gt:
            prod = normalize_product(ma, mb)
            if prod is None:
                continue
            sign, m = prod
            c = ca * cb if sign > 0 else -(ca * cb)
            s = terms.get(m)
            terms[m] = c if s is None else s + c
    return SuperPolynomial._raw(f.table, {m: c for m, c in terms.items() if c})


def parity_of(f: SuperPolynomial) -> Parity:
    """Common parity of all monomials of ``f``.

    The zero polynomial is reported as ``Parity.EVEN``.
    """
    parities = {len(m.odd) & 1 for m in f._terms}
    if len(parities) > 1:
        raise NonhomogeneousError("element mixes even and odd monomials")
    return Parity(parities.pop()) if parities else Parity.EVEN


def homogeneous_components(f: SuperPolynomial) -> Tuple[SuperPolynomial, SuperPolynomial]:
    even: Dict[Monomial, Fraction] = {}
    odd: Dict[Monomial, Fraction] = {}
    for m, c in f._terms.items():
        (odd if len(m.odd) & 1 else even)[m] = c
    return SuperPolynomial._raw(f.table, even), SuperPolynomial._raw(f.table, odd)


def graded_parts(f: SuperPolynomial) -> Iterable[Tuple[Parity, SuperPolynomial]]:
    """Yield the nonzero homogeneous components of ``f`` with their parity."""
    even, odd = homogeneous_components(f)
    if even:
        yield Parity.EVEN, even
    if odd:
        yield Parity.ODD, odd


# -- derivatives ------------------------------------------------------


def monomial_left_derivative(m: Monomial, is_odd: bool, i: int):
    """Left derivative of a single monomial: ``(factor, monomial)`` or ``None``."""
    if is_odd:
        odd = m.odd
        try:
            k = odd.index(i)
        except ValueError:
            return None
        return (-1 if k & 1 else 1), Monomial(m.even, odd[:k] + odd[k + 1 :])
    e = m.even[i]
    if not e:
        return None
    even = m.even[:i] + (e - 1,) + m.even[i + 1 :]
    return e, Monomial(even, m.odd)


def monomial_right_derivative(m: Monomial, is_odd: bool, i: int):
    """Right derivative of a single monomial.

    Equals the left derivative times ``(-1) ** (parity(m) + 1)`` for odd
    variables: a factor at position ``k`` of ``L`` is moved past the
    ``L - 1 - k`` factors to its right.
    """
    if is_odd:
        odd = m.odd
        try:
            k = odd.index(i)
        except ValueError:
            return None
        return (-1 if (len(odd) - 1 - k) & 1 else 1), Monomial(m.even, odd[:k] + odd[k + 1 :])
    return monomial_left_derivative(m, False, i)


def _derive(f: SuperPolynomial, v: str, mono_rule) -> SuperPolynomial:
    is_odd, i = f.table.lookup(v)
    terms: Dict[Monomial, Fraction] = {}
    for m, c in f._terms.items():
        d = mono_rule(m, is_odd, i)
        if d is None:
            continue
        k, m2 = d
        terms[m2] = terms.get(m2, Fraction(0)) + k * c
    return SuperPolynomial._raw(f.table, {m: c for m, c in terms.items() if c})


def left_derivative(f: SuperPolynomial, v: str) -> SuperPolynomial:
    """Graded left derivative ``d/dv`` acting from the left.

    For an odd ``v`` sitting at 0-based position ``k`` among a monomial's odd
    factors, the factor is removed and the term picks up ``(-1) ** k``.
    """
    return _derive(f, v, monomial_left_derivative)


def right_derivative(f: SuperPolynomial, v: str) -> SuperPolynomial:
    return _derive(f, v, monomial_right_derivative)


def variables(table: VariableTable) -> Dict[str, SuperPolynomial]:
    """Generators of the algebra keyed by name (handy in tests and notebooks)."""
    return {name: SuperPolynomial.var(table, name) for name in table.names()}
