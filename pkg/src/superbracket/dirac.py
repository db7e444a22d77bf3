"""Second-class constraints and the Dirac superbracket.

With ``C[a][b] = {phi_a, phi_b}`` and ``Cinv`` its inverse over the even
subring, the bracket on homogeneous elements of equal parity is

    D(f, g) = {f, g} - sum_ab {f, phi_a} Cinv[a][b] {phi_b, g}

and ``D(f, g) = {f, g}`` when the parities differ.  The correction sign makes
every constraint a Casimir of ``D`` among same-parity partners.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    Monomial,
    Parity,
    SuperPolynomial,
    VariableTable,
    graded_parts,
    homogeneous_components,
    parity_of,
)
from .brackets import (
    BracketStructure,
    leibniz_residual,
    poisson_superbracket,
    skew_residual,
)
from .errors import (
    InvalidConstraintError,
    NonhomogeneousError,
    NonScalarBodyError,
    OddEntryError,
    SingularBodyError,
    TableMismatchError,
    UnsolvableConstraintError,
)

EQ3 = "Eq.(3)"
EQ4 = "Eq.(4)"


@dataclass(frozen=True)
class ConstraintSet:
    constraints: Tuple[SuperPolynomial, ...]
    parities: Tuple[Parity, ...] = field(init=False)

    def __post_init__(self):
        cs = tuple(self.constraints)
        if cs and any(c.table != cs[0].table for c in cs):
            raise TableMismatchError("constraints over different tables")
        parities = []
        for i, c in enumerate(cs):
            if c.is_zero():
                raise InvalidConstraintError(f"constraint {i + 1} is zero")
            try:
                parities.append(parity_of(c))
            except NonhomogeneousError:
                raise InvalidConstraintError(f"constraint {i + 1} is not homogeneous") from None
        object.__setattr__(self, "constraints", cs)
        object.__setattr__(self, "parities", tuple(parities))

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)


# -- matrices over the even subring ---------------------------------------------


def _rational_inverse(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(rows)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularBodyError("body matrix is singular; constraints are not second class")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = 1 / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class EvenMatrix:
    """Square matrix with even-parity polynomial entries.

    Every entry must split as a rational body plus a nilpotent soul, i.e. all
    non-constant monomials carry at least one odd factor.
    """

    __slots__ = ("table", "entries", "body")

    def __init__(self, table: VariableTable, entries: Sequence[Sequence[SuperPolynomial]]):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j, e in enumerate(row):
                if e.table != table:
                    raise TableMismatchError("matrix entry over a different table")
                if homogeneous_components(e)[1]:
                    raise OddEntryError(i, j)
                if any(not m.odd and not m.is_constant() for m, _ in e.items()):
                    raise NonScalarBodyError(i, j)
        self.table = table
        self.entries = rows
        self.body = tuple(tuple(e.constant_term() for e in row) for row in rows)

    @classmethod
    def identity(cls, table: VariableTable, n: int) -> "EvenMatrix":
        one, zero = SuperPolynomial.one(table), SuperPolynomial.zero(table)
        return cls(table, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_rationals(cls, table: VariableTable, rows) -> "EvenMatrix":
        return cls(table, [[SuperPolynomial.constant(table, x) for x in row] for row in rows])

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "EvenMatrix") -> "EvenMatrix":
        return EvenMatrix(self.table, _matmul(self.entries, other.entries, self.table))

    def __eq__(self, other):
        if not isinstance(other, EvenMatrix):
            return NotImplemented
        return self.table == other.table and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_identity(self) -> bool:
        n = len(self)
        return all(
            self.entries[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)
        )

    def soul(self) -> Tuple[Tuple[SuperPolynomial, ...], ...]:
        return tuple(
            tuple(e - b for e, b in zip(row, brow)) for row, brow in zip(self.entries, self.body)
        )

    def __repr__(self):
        return "EvenMatrix([" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "])"


def _matmul(a, b, table):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    zero = SuperPolynomial.zero(table)
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def invert_even_matrix(M: EvenMatrix) -> EvenMatrix:
    """Exact inverse via the body inverse and a terminating Neumann series.

    With ``M = B + S`` (rational body, nilpotent soul), ``M^-1 =
    sum_{k=0..n} (-B^-1 S)^k B^-1`` where ``n`` is the number of odd
    generators: any product of more than ``n`` soul terms vanishes.
    """
    table = M.table
    binv = [[SuperPolynomial.constant(table, x) for x in row] for row in _rational_inverse(M.body)]
    soul = M.soul()
    step = [[-x for x in row] for row in _matmul(binv, soul, table)]
    total = [list(row) for row in binv]
    power = binv
    for _ in range(table.n_odd):
        power = _matmul(step, power, table)
        if all(x.is_zero() for row in power for x in row):
            break
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, power)]
    return EvenMatrix(table, total)


def constraint_matrix(cs: ConstraintSet, B: BracketStructure) -> EvenMatrix:
    """``C[a][b] = {phi_a, phi_b}``; fails on odd entries or a singular body."""
    phis = cs.constraints
    if phis and phis[0].table != B.table:
        raise TableMismatchError("constraints and bracket use different tables")
    rows = [[poisson_superbracket(a, b, B) for b in phis] for a in phis]
    M = EvenMatrix(B.table, rows)
    _rational_inverse(M.body)
    return M


# -- Dirac context ---------------------------------------------------------


class DiracContext:
    """Constraints plus their bracket matrix and its inverse, fixed at construction."""

    def __init__(self, constraint_set: ConstraintSet, bracket: BracketStructure):
        if not len(constraint_set):
            raise InvalidConstraintError("at least one constraint is required")
        self.constraint_set = constraint_set
        self.bracket = bracket
        self.C = constraint_matrix(constraint_set, bracket)
        self.Cinv = invert_even_matrix(self.C)
        if not (self.C @ self.Cinv).is_identity() or not (self.Cinv @ self.C).is_identity():
            raise SingularBodyError("constraint matrix inverse failed verification")

    @classmethod
    def from_polys(cls, constraints: Sequence[SuperPolynomial], bracket: BracketStructure):
        return cls(ConstraintSet(tuple(constraints)), bracket)

    @property
    def table(self) -> VariableTable:
        return self.bracket.table

    @property
    def constraints(self) -> Tuple[SuperPolynomial, ...]:
        return self.constraint_set.constraints

    def pb(self, f, g) -> SuperPolynomial:
        return poisson_superbracket(f, g, self.bracket)

    def correction(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        """``sum_ab {f, phi_a} Cinv[a][b] {phi_b, g}``."""
        phis = self.constraints
        left = [self.pb(f, phi) for phi in phis]
        if not any(left):
            return SuperPolynomial.zero(self.table)
        right = [self.pb(phi, g) for phi in phis]
        total = SuperPolynomial.zero(self.table)
        for a, la in enumerate(left):
            if not la:
                continue
            for b, rb in enumerate(right):
                c = self.Cinv.entries[a][b]
                if c and rb:
                    total = total + la * c * rb
        return total


def dirac_single_branch(f: SuperPolynomial, g: SuperPolynomial, ctx: DiracContext) -> SuperPolynomial:
    """The corrected bracket applied to every component pair, with no parity split."""
    return ctx.pb(f, g) - ctx.correction(f, g)


def dirac_branches(f: SuperPolynomial, g: SuperPolynomial) -> List[Tuple[Parity, Parity, str]]:
    """Which formula applies to each homogeneous component pair of ``(f, g)``."""
    return [
        (pf, pg, EQ3 if pf == pg else EQ4)
        for pf, _ in graded_parts(f)
        for pg, _ in graded_parts(g)
    ]


def dirac_superbracket(f: SuperPolynomial, g: SuperPolynomial, ctx: DiracContext) -> SuperPolynomial:
    if f.table != ctx.table or g.table != ctx.table:
        raise TableMismatchError("operands must use the context's table")
    total = SuperPolynomial.zero(ctx.table)
    for pf, fc in graded_parts(f):
        for pg, gc in graded_parts(g):
            total = total + ctx.pb(fc, gc)
            if pf == pg:
                total = total - ctx.correction(fc, gc)
    return total


def check_constraint_casimir(ctx: DiracContext, g: SuperPolynomial) -> bool:
    """True iff ``D(phi, g) = 0`` for every constraint with the parity of ``g``."""
    pg = parity_of(g)
    matching = [phi for phi, p in zip(ctx.constraints, ctx.constraint_set.parities) if p == pg]
    if not matching:
        raise ValueError(f"no constraint has parity {pg}; the mixed-parity branch is not annihilating")
    return all(dirac_superbracket(phi, g, ctx).is_zero() for phi in matching)


# -- parity condition for the single-branch bracket ------------------------------


def xi_indicator(pf: Parity, pg: Parity, pa: Parity, pb: Parity) -> Parity:
    pf, pg, pa, pb = map(Parity, (pf, pg, pa, pb))
    return pf * pa + pb * pg + pf * pb + pa * pg


def theorem2_pairs(f, g, ctx: DiracContext) -> List[Tuple[int, int, Parity]]:
    pf, pg = parity_of(f), parity_of(g)
    ps = ctx.constraint_set.parities
    return [(a, b, xi_indicator(pf, pg, ps[a], ps[b])) for a in range(len(ps)) for b in range(len(ps))]


def check_theorem2(f, g, ctx: DiracContext) -> bool:
    """All indicators even, and then the single-branch bracket is graded skew on ``(f, g)``."""
    if any(xi for _, _, xi in theorem2_pairs(f, g, ctx)):
        return False
    br = lambda a, b: dirac_single_branch(a, b, ctx)
    return skew_residual(br, f, g).is_zero()


# -- quotient normal form ---------------------------------------------------------


def substitute(f: SuperPolynomial, name: str, expr: SuperPolynomial) -> SuperPolynomial:
    """Replace variable ``name`` by ``expr`` (same parity) in place, keeping factor order."""
    table = f.table
    is_odd, i = table.lookup(name)
    zero_even = (0,) * table.n_even
    total = SuperPolynomial.zero(table)
    untouched: Dict[Monomial, Fraction] = {}
    for m, c in f.items():
        if is_odd:
            if i not in m.odd:
                untouched[m] = c
                continue
            k = m.odd.index(i)
            prefix = SuperPolynomial._raw(table, {Monomial(m.even, m.odd[:k]): c})
            suffix = SuperPolynomial._raw(table, {Monomial(zero_even, m.odd[k + 1 :]): Fraction(1)})
            total = total + prefix * expr * suffix
        else:
            e = m.even[i]
            if not e:
                untouched[m] = c
                continue
            rest = Monomial(m.even[:i] + (0,) + m.even[i + 1 :], m.odd)
            total = total + SuperPolynomial._raw(table, {rest: c}) * expr**e
    return total + SuperPolynomial._raw(table, untouched)


def _distinguished(phi: SuperPolynomial, taken) -> Optional[Tuple[str, Fraction]]:
    table = phi.table
    for name in table.names():
        if name in taken:
            continue
        var = next(iter(SuperPolynomial.var(table, name).items()))[0]
        is_odd, i = table.lookup(name)
        containing = [
            (m, c) for m, c in phi.items() if (i in m.odd if is_odd else m.even[i] > 0)
        ]
        if len(containing) == 1 and containing[0][0] == var:
            return name, containing[0][1]
    return None


def solve_constraints(constraints: Sequence[SuperPolynomial]) -> List[Tuple[str, SuperPolynomial]]:
    """Substitution rules ``var -> expr`` with no distinguished variable on any right side."""
    rules: List[Tuple[str, SuperPolynomial]] = []
    taken = set()
    for idx, phi in enumerate(constraints):
        found = _distinguished(phi, taken)
        if found is None:
            raise UnsolvableConstraintError(
                f"constraint {idx + 1} has no variable that appears linearly and alone"
            )
        name, c = found
        taken.add(name)
        expr = -(phi - SuperPolynomial.var(phi.table, name).scale(c)).scale(1 / c)
        for prev, pexpr in rules:
            expr = substitute(expr, prev, pexpr)
        if _mentions(expr, name):
            raise UnsolvableConstraintError(
                f"constraint {idx + 1} cannot be solved for {name} after substitution"
            )
        rules = [(prev, substitute(pexpr, name, expr)) for prev, pexpr in rules]
        rules.append((name, expr))
    return rules


def _mentions(f: SuperPolynomial, name: str) -> bool:
    is_odd, i = f.table.lookup(name)
    return any((i in m.odd) if is_odd else m.even[i] for m, _ in f.items())


def reduce_mod_constraints(f: SuperPolynomial, ctx) -> SuperPolynomial:
    """Canonical representative of ``f`` modulo the constraints.

    ``ctx`` may be a :class:`DiracContext`, a :class:`ConstraintSet` or a
    sequence of constraint polynomials.
    """
    if isinstance(ctx, DiracContext):
        constraints = ctx.constraints
    elif isinstance(ctx, ConstraintSet):
        constraints = ctx.constraints
    else:
        constraints = tuple(ctx)
    for name, expr in solve_constraints(constraints):
        f = substitute(f, name, expr)
    return f


# -- axiom residuals for the Dirac bracket ----------------------------------------


def dirac_bracket_fn(ctx: DiracContext):
    return lambda a, b: dirac_superbracket(a, b, ctx)


def lemma1_residuals(f, g, h, ctx: DiracContext) -> Dict[str, SuperPolynomial]:
    br = dirac_bracket_fn(ctx)
    return {"skew": skew_residual(br, f, g), "leibniz": leibniz_residual(br, f, g, h)}
