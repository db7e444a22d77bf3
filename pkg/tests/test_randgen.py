import hashlib
import random

import pytest

from superbracket.algebra import Parity, VariableTable, parity_of
from superbracket.errors import RetryExhaustedError
from superbracket.randgen import Draw, RandomTermSpec, generate_random_poly

from strategies import TABLE


def test_deterministic():
    spec = RandomTermSpec()
    a = generate_random_poly(spec, TABLE, 42, 7, "f")
    assert a == generate_random_poly(spec, TABLE, 42, 7, "f")
    others = {generate_random_poly(spec, TABLE, 42, i, "f") for i in range(20)}
    assert len(others) > 10


def test_stream_and_seed_matter():
    spec = RandomTermSpec()
    base = [generate_random_poly(spec, TABLE, 1, i, "f") for i in range(10)]
    assert base != [generate_random_poly(spec, TABLE, 2, i, "f") for i in range(10)]
    assert base != [generate_random_poly(spec, TABLE, 1, i, "g") for i in range(10)]


def test_seed_derivation_is_documented_recipe():
    digest = hashlib.sha256(b"42:3:f#0").digest()
    ref = random.Random(int.from_bytes(digest[:8], "big"))
    d = Draw(42, 3, "f#0")
    assert [d.below(1000) for _ in range(5)] == [int(ref.random() * 1000) for _ in range(5)]


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_parity_respected_and_nonzero(parity):
    spec = RandomTermSpec(parity=parity)
    for i in range(200):
        f = generate_random_poly(spec, TABLE, 5, i)
        assert f and parity_of(f) is parity


def test_bounds():
    spec = RandomTermSpec(max_even_degree=2, max_odd_factors=1, max_terms=3, max_numerator=4, max_denominator=2)
    for i in range(300):
        f = generate_random_poly(spec, TABLE, 9, i)
        assert len(f) <= 3
        for m, c in f.items():
            assert sum(m.even) <= 2 and len(m.odd) <= 1
            assert c.denominator <= 2


def test_degenerate_spec_exhausts():
    table = VariableTable(("x",), ())
    with pytest.raises(RetryExhaustedError):
        generate_random_poly(RandomTermSpec(parity=Parity.ODD), table, 0, 0)


def test_odd_factor_bound_clipped_to_table():
    table = VariableTable((), ("a",))
    for i in range(50):
        f = generate_random_poly(RandomTermSpec(max_odd_factors=3), table, 0, i)
        assert all(len(m.odd) <= 1 for m, _ in f.items())


def test_draw_helpers():
    d = Draw(0, 0)
    assert all(0 <= d.below(3) < 3 for _ in range(100))
    assert sorted(d.sample(range(5), 5)) == [0, 1, 2, 3, 4]
    with pytest.raises(ValueError):
        d.below(0)
