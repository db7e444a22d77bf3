"""Seeded verification suites.

Every suite draws its inputs with :func:`generate_random_poly` keyed by
``(seed, case index, role)``, so a report is a pure function of the session,
the suite name, the case count and the seed (apart from the timing line).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import Parity, SuperPolynomial, mul, parity_of
from .brackets import (
    derivation_residual,
    jacobi_residual,
    jacobi_residuals_general,
    leibniz_residual,
    poisson_superbracket,
    skew_residual,
)
from .deformation import (
    FormalSeries,
    associativity_residual,
    hochschild_residual,
    star_multiply,
    star_multiply_series,
    theorem3_residuals,
)
from .dirac import (
    dirac_bracket_fn,
    dirac_single_branch,
    dirac_superbracket,
    theorem2_pairs,
    xi_indicator,
)
from .exprio import format_canonical, parse_expression, from_machine_encoding, to_machine_encoding
from .randgen import RandomTermSpec, generate_random_poly
from .session import SessionSpec

SUITES = (
    "axioms-canonical",
    "lemma1-dirac",
    "theorem1-jacobi",
    "theorem2-xi",
    "casimir",
    "star-assoc",
    "hochschild-l1",
    "theorem3-d1",
    "parser-roundtrip",
)

# suite -> what it exercises; mirrored in docs/suites.md
SUITE_CITATIONS = {
    "axioms-canonical": "supercommutativity, graded skew-symmetry, first-slot Leibniz, graded Jacobi of the canonical bracket",
    "lemma1-dirac": "bilinearity/skew-symmetry/Leibniz of the parity-split Dirac bracket",
    "theorem1-jacobi": "graded Jacobi of the parity-split Dirac bracket, homogeneous and bilinear cases; inverse identity",
    "theorem2-xi": "Xi parity table and skew-symmetry of the single-branch Dirac bracket",
    "casimir": "constraints are central for same-parity partners",
    "star-assoc": "star product: order-0 term, graded symmetry of order 0, associativity, R[[hbar]]-linearity",
    "hochschild-l1": "fD1(g,h) - D1(fg,h) + D1(f,gh) - D1(f,g)h = 0",
    "theorem3-d1": "antisymmetrised D1 is a Poisson superbracket equal to the canonical one",
    "parser-roundtrip": "format -> parse and encode -> decode are identities",
}


@dataclass
class Failure:
    index: int
    identity: str
    inputs: Dict[str, str]
    residual: str

    def lines(self) -> List[str]:
        out = [f"failure {self.index} {self.identity}"]
        out += [f"input {k} {v}" for k, v in self.inputs.items()]
        out.append(f"residual {self.residual}")
        return out


@dataclass
class CheckReport:
    suite: str
    seed: int
    cases: int = 0
    checks: int = 0
    failures: List[Failure] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, index, identity, inputs: Dict[str, SuperPolynomial], residual):
        text = residual if isinstance(residual, str) else format_canonical(residual)
        self.failures.append(
            Failure(index, identity, {k: format_canonical(v) for k, v in inputs.items()}, text)
        )

    def expect_zero(self, index, identity, inputs, residual: SuperPolynomial):
        self.checks += 1
        if not residual.is_zero():
            self.fail(index, identity, inputs, residual)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.suite}: {self.cases} cases, {self.checks} checks, "
            f"{len(self.failures)} failures (seed {self.seed})"
        )

    def text(self, max_failures: int = 10) -> str:
        lines = [self.summary()]
        lines += [f"  {n}" for n in self.notes]
        for f in self.failures[:max_failures]:
            inputs = ", ".join(f"{k}={v}" for k, v in f.inputs.items())
            lines.append(f"  case {f.index}: {f.identity} fails for {inputs}; residual {f.residual}")
        if len(self.failures) > max_failures:
            lines.append(f"  ... {len(self.failures) - max_failures} more failures")
        return "\n".join(lines)

    def encoding_lines(self) -> List[str]:
        lines = [
            f"report {self.suite}",
            f"field seed {self.seed}",
            f"field cases {self.cases}",
            f"field checks {self.checks}",
            f"field passed {'true' if self.passed else 'false'}",
            f"field failures {len(self.failures)}",
        ]
        lines += [f"note {n}" for n in self.notes]
        for f in sorted(self.failures, key=lambda f: (f.index, f.identity)):
            lines += f.lines()
        lines.append(f"elapsed {self.elapsed:.3f}")
        lines.append("endreport")
        return lines


class _Inputs:
    def __init__(self, session: SessionSpec, seed: int, spec: RandomTermSpec):
        self.table = session.table
        self.seed = seed
        self.spec = spec

    def poly(self, index: int, role: str, parity: Optional[Parity] = None) -> SuperPolynomial:
        return generate_random_poly(self.spec.with_parity(parity), self.table, self.seed, index, role)

    def homogeneous(self, index: int, roles: str, parities: Sequence[Parity]):
        return [self.poly(index, r, p) for r, p in zip(roles, parities)]


def _parities(index: int, n: int) -> List[Parity]:
    # cycle through all 2^n parity assignments
    return [Parity((index >> k) & 1) for k in range(n)]


def _mixed_parities(index: int) -> List[Parity]:
    combos = [c for c in itertools.product((0, 1), repeat=3) if len(set(c)) > 1]
    return [Parity(x) for x in combos[index % len(combos)]]


# -- suites -------------------------------------------------------------


def suite_axioms_canonical(session, report, inputs, n, opts):
    B = session.bracket
    br = lambda a, b: poisson_superbracket(a, b, B)
    for i in range(n):
        f, g, h = inputs.homogeneous(i, "fgh", _parities(i, 3))
        args = {"f": f, "g": g, "h": h}
        pf, pg = parity_of(f), parity_of(g)
        report.expect_zero(i, "supercommutativity", args, mul(f, g) - mul(g, f).scale((pf * pg).sign()))
        report.expect_zero(i, "skew", args, skew_residual(br, f, g))
        report.expect_zero(i, "leibniz", args, leibniz_residual(br, f, g, h))
        report.expect_zero(i, "derivation", args, derivation_residual(br, f, g, h))
        report.expect_zero(i, "jacobi", args, jacobi_residual(br, f, g, h))
        report.cases += 1


def _dirac_bracket(session, opts):
    ctx = session.dirac
    if opts.get("dirac_branch", "split") == "single":
        return lambda a, b: dirac_single_branch(a, b, ctx)
    return dirac_bracket_fn(ctx)


def suite_lemma1_dirac(session, report, inputs, n, opts):
    br = _dirac_bracket(session, opts)
    for i in range(n):
        f, g, h = inputs.homogeneous(i, "fgh", _parities(i, 3))
        args = {"f": f, "g": g, "h": h}
        a = inputs.poly(i, "a")
        lin = br(f + a.scale(3), g) - br(f, g) - br(a, g).scale(3)
        report.expect_zero(i, "bilinearity", {"f": f, "a": a, "g": g}, lin)
        report.expect_zero(i, "skew", args, skew_residual(br, f, g))
        report.expect_zero(i, "leibniz", args, leibniz_residual(br, f, g, h))
        report.cases += 1


def suite_theorem1_jacobi(session, report, inputs, n, opts):
    ctx = session.dirac
    br = _dirac_bracket(session, opts)
    report.checks += 1
    if not ((ctx.C @ ctx.Cinv).is_identity() and (ctx.Cinv @ ctx.C).is_identity()):
        report.fail(-1, "inverse", {}, "C*Cinv != I")
    for i in range(n):
        p = Parity(i & 1)
        f, g, h = inputs.homogeneous(i, "fgh", [p, p, p])
        report.expect_zero(i, "jacobi-same-parity", {"f": f, "g": g, "h": h}, jacobi_residual(br, f, g, h))
        f, g, h = inputs.homogeneous(i, "xyz", _mixed_parities(i))
        report.expect_zero(i, "jacobi-mixed-parity", {"f": f, "g": g, "h": h}, jacobi_residual(br, f, g, h))
        u, v, w = inputs.poly(i, "u"), inputs.poly(i, "v"), inputs.poly(i, "w")
        total = SuperPolynomial.zero(session.table)
        for r in jacobi_residuals_general(br, u, v, w):
            total = total + r
        report.expect_zero(i, "jacobi-general", {"f": u, "g": v, "h": w}, total)
        report.cases += 1


def suite_theorem2_xi(session, report, inputs, n, opts):
    for combo in itertools.product((0, 1), repeat=4):
        pf, pg, pa, pb = map(Parity, combo)
        xi = xi_indicator(pf, pg, pa, pb)
        manual = (combo[0] * combo[2] + combo[3] * combo[1] + combo[0] * combo[3] + combo[2] * combo[1]) % 2
        report.checks += 1
        report.notes.append(f"xi({pf},{pg},{pa},{pb}) = {xi}")
        if int(xi) != manual:
            report.fail(-1, "xi-table", {}, f"xi({combo}) = {xi}, expected {manual}")
    ctx = session.dirac
    br = lambda a, b: dirac_single_branch(a, b, ctx)
    eligible = 0
    for i in range(n):
        f, g = inputs.homogeneous(i, "fg", _parities(i, 2))
        if any(xi for _, _, xi in theorem2_pairs(f, g, ctx)):
            report.cases += 1
            continue
        eligible += 1
        report.expect_zero(i, "single-branch-skew", {"f": f, "g": g}, skew_residual(br, f, g))
        report.cases += 1
    report.notes.append(f"{eligible} of {n} pairs had every xi even")


def suite_casimir(session, report, inputs, n, opts):
    ctx = session.dirac
    parities = sorted(set(ctx.constraint_set.parities))
    for i in range(n):
        p = parities[i % len(parities)]
        g = inputs.poly(i, "g", p)
        for k, (phi, pphi) in enumerate(zip(ctx.constraints, ctx.constraint_set.parities)):
            if pphi != p:
                continue
            report.expect_zero(i, f"casimir-left[{k + 1}]", {"g": g}, dirac_superbracket(phi, g, ctx))
            report.expect_zero(i, f"casimir-right[{k + 1}]", {"g": g}, dirac_superbracket(g, phi, ctx))
        report.cases += 1


def suite_star_assoc(session, report, inputs, n, opts):
    sp = session.star()
    for i in range(n):
        f, g, h = inputs.homogeneous(i, "fgh", _parities(i, 3))
        args = {"f": f, "g": g, "h": h}
        fg = star_multiply(f, g, sp)
        gf = star_multiply(g, f, sp)
        pf, pg = parity_of(f), parity_of(g)
        report.expect_zero(i, "order0-product", args, fg[0] - mul(f, g))
        report.expect_zero(i, "order0-supercommutative", args, fg[0] - gf[0].scale((pf * pg).sign()))
        res = associativity_residual(f, g, h, sp)
        for k, c in enumerate(res.coeffs):
            report.expect_zero(i, f"associativity[hbar^{k}]", args, c)
        F = FormalSeries(session.table, sp.order, [f, h])
        lin = star_multiply_series(F.shift(), FormalSeries.embed(g, sp.order), sp)
        lin = lin - star_multiply_series(F, FormalSeries.embed(g, sp.order), sp).shift()
        for k, c in enumerate(lin.coeffs):
            report.expect_zero(i, f"hbar-linearity[hbar^{k}]", args, c)
        report.cases += 1


def suite_hochschild(session, report, inputs, n, opts):
    sp = session.star(max(1, session.order))
    for i in range(n):
        f, g, h = inputs.poly(i, "f"), inputs.poly(i, "g"), inputs.poly(i, "h")
        report.expect_zero(i, "hochschild", {"f": f, "g": g, "h": h}, hochschild_residual(f, g, h, sp))
        report.cases += 1


def suite_theorem3(session, report, inputs, n, opts):
    sp = session.star(max(1, session.order))
    for i in range(n):
        f, g, h = inputs.homogeneous(i, "fgh", _parities(i, 3))
        args = {"f": f, "g": g, "h": h}
        for name, r in theorem3_residuals(f, g, h, sp, session.bracket).items():
            report.expect_zero(i, name, args, r)
        report.cases += 1


def suite_parser_roundtrip(session, report, inputs, n, opts):
    table = session.table
    for i in range(n):
        f = inputs.poly(i, "f")
        text = format_canonical(f)
        report.expect_zero(i, "format-parse", {"f": f}, parse_expression(text, table) - f)
        report.expect_zero(i, "encode-decode", {"f": f}, from_machine_encoding(to_machine_encoding(f), table) - f)
        report.cases += 1


_RUNNERS: Dict[str, Callable] = {
    "axioms-canonical": suite_axioms_canonical,
    "lemma1-dirac": suite_lemma1_dirac,
    "theorem1-jacobi": suite_theorem1_jacobi,
    "theorem2-xi": suite_theorem2_xi,
    "casimir": suite_casimir,
    "star-assoc": suite_star_assoc,
    "hochschild-l1": suite_hochschild,
    "theorem3-d1": suite_theorem3,
    "parser-roundtrip": suite_parser_roundtrip,
}


def run_suite(
    session: SessionSpec,
    suite: str,
    n_cases: int,
    seed: int,
    spec: Optional[RandomTermSpec] = None,
    dirac_branch: str = "split",
) -> CheckReport:
    """Run one suite.

    ``dirac_branch`` selects the Dirac bracket used by the Dirac suites:
    ``"split"`` applies the correction only to equal-parity component pairs,
    ``"single"`` applies it to every pair.
    """
    if suite not in _RUNNERS:
        raise KeyError(suite)
    report = CheckReport(suite, seed)
    inputs = _Inputs(session, seed, spec or RandomTermSpec())
    start = time.perf_counter()
    if dirac_branch not in ("split", "single"):
        raise ValueError(f"unknown Dirac branch mode {dirac_branch!r}")
    if dirac_branch == "single" and suite in ("lemma1-dirac", "theorem1-jacobi"):
        report.notes.append("dirac bracket: single branch")
    _RUNNERS[suite](session, report, inputs, n_cases, {"dirac_branch": dirac_branch})
    report.elapsed = time.perf_counter() - start
    report.failures.sort(key=lambda f: (f.index, f.identity))
    return report


def run_suites(session, suite: str, n_cases: int, seed: int, spec=None, dirac_branch="split") -> List[CheckReport]:
    names = SUITES if suite == "all" else (suite,)
    return [run_suite(session, name, n_cases, seed, spec, dirac_branch) for name in names]
