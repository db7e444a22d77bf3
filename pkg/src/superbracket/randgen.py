"""Deterministic random superpolynomials.

Each ``(spec, seed, index, stream)`` tuple seeds its own ``random.Random``
from the first 8 bytes of ``sha256(f"{seed}:{index}:{stream}")``, and only
``Random.random()`` is drawn from it; that method's output sequence is the
part of the stdlib generator that is guaranteed stable across Python
versions.  Integers in ``[0, n)`` are ``floor(random() * n)``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import Monomial, Parity, SuperPolynomial, VariableTable
from .errors import RetryExhaustedError

MAX_RETRIES = 100


@dataclass(frozen=True)
class RandomTermSpec:
    max_even_degree: int = 3
    max_odd_factors: int = 3
    max_terms: int = 5
    max_numerator: int = 5
    max_denominator: int = 3
    parity: Optional[Parity] = None  # None means any parity

    def with_parity(self, parity: Optional[Parity]) -> "RandomTermSpec":
        return RandomTermSpec(
            self.max_even_degree,
            self.max_odd_factors,
            self.max_terms,
            self.max_numerator,
            self.max_denominator,
            parity,
        )


class Draw:
    """Thin wrapper exposing integer draws built on ``random()`` only."""

    def __init__(self, seed: int, index: int, stream: str = ""):
        digest = hashlib.sha256(f"{seed}:{index}:{stream}".encode("ascii")).digest()
        self._rng = random.Random(int.from_bytes(digest[:8], "big"))

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        return min(int(self._rng.random() * n), n - 1)

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def sample(self, seq, k: int):
        pool = list(seq)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.below(len(pool))))
        return out


def _random_monomial(draw: Draw, table: VariableTable, spec: RandomTermSpec, parity) -> Optional[Monomial]:
    exps = [0] * table.n_even
    if table.n_even:
        for _ in range(draw.between(0, spec.max_even_degree)):
            exps[draw.below(table.n_even)] += 1
    top = min(spec.max_odd_factors, table.n_odd)
    counts = [k for k in range(top + 1) if parity is None or k % 2 == parity]
    if not counts:
        return None
    k = draw.choice(counts)
    odd = tuple(sorted(draw.sample(range(table.n_odd), k)))
    return Monomial(tuple(exps), odd)


def _random_coefficient(draw: Draw, spec: RandomTermSpec) -> Fraction:
    num = draw.between(1, spec.max_numerator)
    if draw.below(2):
        num = -num
    return Fraction(num, draw.between(1, spec.max_denominator))


def generate_random_poly(
    spec: RandomTermSpec, table: VariableTable, seed: int, index: int, stream: str = ""
) -> SuperPolynomial:
    """Pure function of its arguments.  Parity-constrained requests never return 0."""
    parity = None if spec.parity is None else int(spec.parity)
    for attempt in range(MAX_RETRIES):
        draw = Draw(seed, index, f"{stream}#{attempt}")
        terms = {}
        for _ in range(draw.between(1, spec.max_terms)):
            m = _random_monomial(draw, table, spec, parity)
            if m is None:
                break
            terms[m] = terms.get(m, Fraction(0)) + _random_coefficient(draw, spec)
        poly = SuperPolynomial(table, terms)
        if parity is None or poly:
            return poly
    raise RetryExhaustedError(f"no nonzero {spec.parity} polynomial after {MAX_RETRIES} draws")
