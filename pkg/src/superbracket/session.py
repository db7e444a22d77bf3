"""Session files: a YAML mapping that declares the table, bracket, constraints
and truncation order.

    pairs: [[q1, p1], [q2, p2]]
    odd: [theta1, theta2, theta3]
    metric: identity          # or "zero", or a list of [a, b, value]
    constraints: [q1, p1, theta1]
    order: 4
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Optional, Tuple, Union

import yaml

from .algebra import SuperPolynomial, VariableTable
from .brackets import BracketStructure
from .deformation import DEFAULT_ORDER, StarProduct
from .dirac import DiracContext
from .errors import ParseError, SessionError
from .exprio import parse_expression

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = {"hbar"}
_KEYS = {"pairs", "odd", "metric", "constraints", "order"}


@dataclass(frozen=True)
class SessionSpec:
    pairs: Tuple[Tuple[str, str], ...]
    odd: Tuple[str, ...] = ()
    metric: Union[str, Tuple[Tuple[str, str, Fraction], ...]] = "identity"
    constraints: Tuple[str, ...] = ()
    order: int = DEFAULT_ORDER

    @cached_property
    def table(self) -> VariableTable:
        even = [name for pair in self.pairs for name in pair]
        return VariableTable(tuple(even), self.odd)

    @cached_property
    def bracket(self) -> BracketStructure:
        if isinstance(self.metric, str):
            metric = None if self.metric == "zero" else self.metric
        else:
            metric = {(a, b): v for a, b, v in self.metric}
        try:
            return BracketStructure.from_names(self.table, self.pairs, metric)
        except ValueError as exc:
            raise SessionError(str(exc)) from None

    def parse(self, text: str) -> SuperPolynomial:
        return parse_expression(text, self.table)

    @cached_property
    def constraint_polys(self) -> Tuple[SuperPolynomial, ...]:
        out = []
        for i, text in enumerate(self.constraints):
            try:
                out.append(self.parse(text))
            except ParseError as exc:
                raise SessionError(f"constraint {i + 1}: {exc}") from None
        return tuple(out)

    @cached_property
    def dirac(self) -> DiracContext:
        if not self.constraints:
            raise SessionError("session declares no constraints")
        return DiracContext.from_polys(self.constraint_polys, self.bracket)

    def star(self, order: Optional[int] = None) -> StarProduct:
        return StarProduct(self.bracket, self.order if order is None else order)


def default_session() -> SessionSpec:
    """Desk-scale default: two symplectic pairs, three odd variables, identity metric."""
    return SessionSpec(
        pairs=(("q1", "p1"), ("q2", "p2")),
        odd=("theta1", "theta2", "theta3"),
        metric="identity",
        constraints=("q1", "p1", "theta1"),
        order=DEFAULT_ORDER,
    )


def _name(x, what) -> str:
    if not isinstance(x, str) or not _NAME.match(x):
        raise SessionError(f"{what}: invalid variable name {x!r}")
    if x in RESERVED:
        raise SessionError(f"{what}: {x!r} is reserved")
    return x


def _rational(x, what) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SessionError(f"{what}: metric values must be integers or 'a/b' strings")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SessionError(f"{what}: bad rational {x!r}") from None


def session_from_mapping(data) -> SessionSpec:
    if not isinstance(data, dict):
        raise SessionError("session must be a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise SessionError(f"unknown session keys: {', '.join(sorted(unknown))}")
    raw_pairs = data.get("pairs") or []
    if not isinstance(raw_pairs, list):
        raise SessionError("pairs must be a list of [q, p] name pairs")
    pairs = []
    for k, pair in enumerate(raw_pairs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SessionError(f"pairs[{k}] must be a [q, p] pair")
        pairs.append((_name(pair[0], f"pairs[{k}]"), _name(pair[1], f"pairs[{k}]")))
    odd = data.get("odd") or []
    if not isinstance(odd, list):
        raise SessionError("odd must be a list of names")
    odd = tuple(_name(x, "odd") for x in odd)
    names = [n for p in pairs for n in p] + list(odd)
    if len(set(names)) != len(names):
        raise SessionError("variable names must be unique")

    metric = data.get("metric", "identity")
    if isinstance(metric, str):
        if metric not in ("identity", "zero"):
            raise SessionError(f"unknown metric shorthand {metric!r}")
    elif isinstance(metric, list):
        entries = {}
        for k, entry in enumerate(metric):
            if not isinstance(entry, list) or len(entry) != 3:
                raise SessionError(f"metric[{k}] must be [a, b, value]")
            a, b = entry[0], entry[1]
            if a not in odd or b not in odd:
                raise SessionError(f"metric[{k}] references an undeclared odd variable")
            v = _rational(entry[2], f"metric[{k}]")
            for key in ((a, b), (b, a)):
                if key in entries and entries[key] != v:
                    raise SessionError(f"metric[{k}] conflicts with an earlier entry")
                entries[key] = v
        metric = tuple((a, b, v) for (a, b), v in sorted(entries.items()) if a <= b)
    elif metric is None:
        metric = "zero"
    else:
        raise SessionError("metric must be 'identity', 'zero' or a list of [a, b, value]")

    constraints = data.get("constraints") or []
    if not isinstance(constraints, list) or not all(isinstance(c, (str, int)) for c in constraints):
        raise SessionError("constraints must be a list of expressions")
    order = data.get("order", DEFAULT_ORDER)
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise SessionError("order must be a natural number")
    spec = SessionSpec(tuple(pairs), odd, metric, tuple(str(c) for c in constraints), order)
    spec.bracket
    spec.constraint_polys
    return spec


def load_session(text: str) -> SessionSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SessionError(f"invalid YAML: {exc}") from None
    return session_from_mapping(data if data is not None else {})


def load_session_file(path: Union[str, Path]) -> SessionSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SessionError(f"cannot read session file: {exc}") from None
    return load_session(text)
