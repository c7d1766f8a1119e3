import pytest
from hypothesis import given, strategies as st
from math import gcd, prod

from consensus_obs.errors import InvalidInputError
from consensus_obs.number_theory import (congruent, factorize, gcd_list, is_prime,
                                         odd_prime_power_divisors, prime_power_divisors)


@pytest.mark.parametrize("n, factors", [
    (6, ((2, 1), (3, 1))),
    (9, ((3, 2),)),
    (15, ((3, 1), (5, 1))),
    (1, ()),
    (97, ((97, 1),)),
])
def test_factorize_examples(n, factors):
    assert factorize(n).factors == factors


@given(st.integers(min_value=1, max_value=100_000))
def test_factorization_multiplies_back(n):
    f = factorize(n)
    assert f.value() == n
    assert f.primes() == sorted(f.primes())
    assert all(is_prime(p) for p in f.primes())


def test_factorize_rejects_non_positive():
    with pytest.raises(InvalidInputError):
        factorize(0)


@pytest.mark.parametrize("values, expected", [([9, 6], 3), ([11, 4], 1), ([7], 7)])
def test_gcd_list(values, expected):
    assert gcd_list(values) == expected


@given(st.lists(st.integers(min_value=1, max_value=10_000), min_size=1, max_size=6))
def test_gcd_list_divides_every_value(values):
    g = gcd_list(values)
    assert all(v % g == 0 for v in values)
    assert g == gcd(*values)


def test_gcd_list_rejects_empty_and_zero():
    with pytest.raises(InvalidInputError):
        gcd_list([])
    with pytest.raises(InvalidInputError):
        gcd_list([4, 0])


@pytest.mark.parametrize("a, b, m", [(4, 1, 3), (7, 7, 5), (-2, 1, 3)])
def test_congruent_examples(a, b, m):
    assert congruent(a, b, m)


def test_congruent_false_and_bad_modulus():
    assert not congruent(4, 2, 3)
    with pytest.raises(InvalidInputError):
        congruent(1, 1, 1)


@given(st.integers(-1000, 1000), st.integers(-1000, 1000), st.integers(2, 50))
def test_congruent_is_symmetric(a, b, m):
    assert congruent(a, b, m) == congruent(b, a, m)


def test_prime_power_divisors():
    assert prime_power_divisors(72) == [2, 3, 4, 8, 9]
    assert odd_prime_power_divisors(72) == [3, 9]
    assert odd_prime_power_divisors(45) == [3, 5, 9]
    assert odd_prime_power_divisors(2 ** 10) == []


@given(st.integers(min_value=2, max_value=5000))
def test_prime_powers_divide_n(n):
    moduli = prime_power_divisors(n)
    assert all(n % q == 0 for q in moduli)
    assert all(len(factorize(q).factors) == 1 for q in moduli)
    assert prod(p ** k for p, k in factorize(n)) == n


def test_is_prime():
    assert [k for k in range(20) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19]


@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(2, 60))
def test_congruence_is_shift_invariant(a, b, m):
    assert congruent(a + m, b, m) == congruent(a, b, m)
    assert congruent(a, b - 3 * m, m) == congruent(a, b, m)


@given(st.lists(st.integers(1, 10_000), min_size=1, max_size=8), st.randoms())
def test_gcd_list_ignores_order_and_its_own_value(values, rnd):
    d = gcd_list(values)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert gcd_list(shuffled) == d
    assert gcd_list(values + [d]) == d
    assert all(v % d == 0 for v in values)
