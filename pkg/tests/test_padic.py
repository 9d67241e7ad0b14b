import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicsquare.numtheory import DomainError
from padicsquare.padic import AtLeast, PadicInt, PrecisionError, diff_valuation, teichmuller


@pytest.mark.parametrize("p", [3, 5, 7, 101])
@pytest.mark.parametrize("n", [1, 5, 64])
def test_teichmuller_of_one(p, n):
    assert teichmuller(1, p, n).value == 1


def test_teichmuller_examples():
    assert teichmuller(2, 3, 3).value == 26
    w = teichmuller(2, 5, 2)
    assert w.value == 7 and 7**4 % 25 == 1


def test_teichmuller_rejects_non_unit():
    with pytest.raises(DomainError):
        teichmuller(7, 7, 4)


@pytest.mark.parametrize("p", [3, 5, 11, 13])
@pytest.mark.parametrize("n", [1, 2, 7, 30])
def test_teichmuller_root_of_unity(p, n):
    for c in range(1, p):
        w = teichmuller(c, p, n)
        assert w.value % p == c
        assert pow(w.value, p - 1, p**n) == 1


def test_teichmuller_compatible_across_precisions():
    for c in range(1, 13):
        assert teichmuller(c, 13, 40).value % 13**7 == teichmuller(c, 13, 7).value


@pytest.mark.parametrize("p", [7, 13, 31])
def test_teichmuller_multiplicative_and_squaring(p):
    rng = random.Random(p)
    for _ in range(100):
        a, b = rng.randrange(1, p), rng.randrange(1, p)
        assert teichmuller(a * b % p, p, 20) == teichmuller(a, p, 20) * teichmuller(b, p, 20)
        assert teichmuller(a * a % p, p, 20) == teichmuller(a, p, 20) ** 2


def test_diff_valuation_examples():
    x = PadicInt.of(4, 3, 3)
    assert diff_valuation(x, x) == AtLeast(3)
    assert diff_valuation(x, PadicInt.of(1, 3, 3)) == 1
    assert diff_valuation(PadicInt.of(26, 3, 3), PadicInt.of(2, 3, 3)) == 1


def test_diff_valuation_mixed_primes():
    with pytest.raises(DomainError):
        diff_valuation(PadicInt.of(1, 3, 3), PadicInt.of(1, 5, 3))


@given(st.integers(0, 5**6 - 1), st.integers(0, 5**6 - 1), st.integers(0, 5**6 - 1))
def test_ultrametric(a, b, c):
    x, y, z = (PadicInt.of(v, 5, 6) for v in (a, b, c))

    def val(u, v):
        d = diff_valuation(u, v)
        return d.bound if isinstance(d, AtLeast) else d

    assert val(x, z) >= min(val(x, y), val(y, z))


def test_arithmetic_takes_min_precision():
    x = PadicInt.of(10, 3, 5) * PadicInt.of(4, 3, 2)
    assert x.precision == 2 and x.value == 40 % 9
    assert (PadicInt.of(2, 3, 4) - 5).value == (2 - 5) % 81


def test_value_invariant_and_reduce():
    x = PadicInt(7, 2, 100)
    assert x.value == 100 % 49
    assert x.reduce(1).value == 100 % 7
    with pytest.raises(PrecisionError):
        x.reduce(3)


def test_json_round_trip():
    x = PadicInt.of(123456789, 11, 9)
    assert x.to_json() == {"p": "11", "N": "9", "value": str(123456789 % 11**9)}
    assert PadicInt.from_json(x.to_json()) == x
