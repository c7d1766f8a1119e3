'''Exact integer helpers: factorization, GCD of lists, congruences'''

from dataclasses import dataclass
from functools import reduce
from math import gcd, prod

from .errors import InvalidInputError


@dataclass(frozen=True)
class Factorization:
    '''Prime factors with multiplicities, sorted by prime'''
    factors: tuple  # ((p, k), ...)

    def value(self) -> int:
        return prod(p ** k for p, k in self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def multiplicity(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    '''Trial division; n = 1 gives the empty factorization'''
    if n < 1:
        raise InvalidInputError(f"Cannot factorize {n}; need n >= 1")

    factors = []
    d = 2
    while d * d <= n:
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            factors.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append((n, 1))  # leftover prime larger than sqrt
    return Factorization(tuple(factors))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n).factors == ((n, 1),)


def gcd_list(values) -> int:
    values = list(values)
    if not values:
        raise InvalidInputError("gcd_list needs at least one value")
    if any(v < 1 for v in values):
        raise InvalidInputError(f"gcd_list takes positive integers, got {values}")
    return reduce(gcd, values)


def congruent(a: int, b: int, m: int) -> bool:
    '''True iff m divides (a - b)'''
    if m < 2:
        raise InvalidInputError(f"Modulus must be >= 2, got {m}")
    return (a - b) % m == 0


def prime_power_divisors(n: int, odd_only: bool = False) -> list[int]:
    '''Every p**alpha dividing n, alpha = 1..k, ascending'''
    moduli = []
    for p, k in factorize(n):
        if odd_only and p == 2:
            continue
        moduli.extend(p ** alpha for alpha in range(1, k + 1))
    return sorted(moduli)


def odd_prime_power_divisors(n: int) -> list[int]:
    return prime_power_divisors(n, odd_only=True)
