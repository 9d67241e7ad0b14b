"""Integer number theory used by the rest of the package.

Everything here is exact (Python ints) and side-effect free.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

# Deterministic Miller-Rabin witnesses; correct for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class PrimeDecomposition:
    """``p = 2**k * m + 1`` with ``m`` odd."""

    p: int
    k: int
    m: int

    def __post_init__(self):
        if self.m % 2 == 0 or self.k < 1 or (1 << self.k) * self.m + 1 != self.p:
            raise DomainError(f"inconsistent decomposition {self}")


@dataclass(frozen=True)
class WieferichInfo:
    p: int
    s: int

    @property
    def is_wieferich(self) -> bool:
        return self.s >= 2


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact below 3.3e24, so far past 2**64)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(limit: int) -> list[int]:
    """All primes < limit (simple sieve)."""
    if limit < 3:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=4096)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    factors: dict[int, int] = {}
    for q in _SMALL_PRIMES:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
    q = 53
    # trial division up to a small bound, then Pollard-Brent
    while q * q <= n and q < 10_000:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
        q += 2
    stack = [n] if n > 1 else []
    while stack:
        x = stack.pop()
        if x == 1:
            continue
        if is_prime(x):
            factors[x] = factors.get(x, 0) + 1
            continue
        d = _pollard_brent(x)
        stack += [d, x // d]
    return tuple(sorted(factors.items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{prime: exponent}`` of ``n >= 1``."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    return dict(_factor_tuple(n))


def padic_valuation(x: int, p: int) -> int:
    """Largest e with p**e | x. x = 0 is rejected (valuation is infinite)."""
    if x == 0:
        raise DomainError("valuation of 0 is infinite")
    if p < 2:
        raise DomainError(f"bad prime {p}")
    x = abs(x)
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def euler_phi(d: int) -> int:
    if d < 1:
        raise DomainError(f"phi undefined for {d}")
    result = d
    for q in factorize(d):
        result = result // q * (q - 1)
    return result


def mul_order(a: int, modulus: int) -> int:
    """Multiplicative order of ``a`` modulo ``modulus`` (1 when modulus == 1).

    Starts from phi(modulus) and strips prime factors while the power stays 1.
    """
    if modulus < 1:
        raise DomainError(f"bad modulus {modulus}")
    if modulus == 1:
        return 1
    if math.gcd(a, modulus) != 1:
        raise DomainError(f"{a} is not a unit modulo {modulus}")
    a %= modulus
    order = euler_phi(modulus)
    for q, e in factorize(order).items():
        for _ in range(e):
            if pow(a, order // q, modulus) == 1:
                order //= q
            else:
                break
    return order


def divisors(n: int) -> list[int]:
    if n < 1:
        raise DomainError(f"divisors undefined for {n}")
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def factor_p_minus_one(p: int) -> PrimeDecomposition:
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    m = p - 1
    k = (m & -m).bit_length() - 1
    return PrimeDecomposition(p, k, m >> k)


def wieferich_valuation(p: int) -> WieferichInfo:
    """s = v_p(2**(p-1) - 1), found by testing 2**(p-1) mod p**2, p**3, ...

    No upper bound on s is assumed.
    """
    if p < 3 or p % 2 == 0:
        raise DomainError(f"{p} is not an odd prime")
    s = 1
    while pow(2, p - 1, p ** (s + 1)) == 1:
        s += 1
    return WieferichInfo(p, s)


def wieferich_scan(limit: int) -> list[WieferichInfo]:
    """Odd primes p < limit with v_p(2**(p-1) - 1) >= 2."""
    return [
        info
        for info in (wieferich_valuation(p) for p in primes_below(limit) if p > 2)
        if info.is_wieferich
    ]

