"""Lifting cycles of x -> x**2 from Z/p^nZ to Z/p^(n+1)Z.

The linearization of f^l near a cycle is t -> b + a*t (mod p); the pair
(a, b) decides whether the cycle grows, splits, partially splits or grows
tails.  ``lift_cycles`` checks those predictions by plain simulation, and
``predicted_cycle_census`` propagates the fate of every shadow cycle
symbolically to an arbitrary level.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass

from .level_graph import (
    CycleCensus,
    ResourceError,
    check_odd_prime,
    cycles_of,
    max_nodes_default,
    rogers_structure,
    unit_cycles,
)
from .numtheory import DomainError, mul_order, wieferich_valuation


@dataclass(frozen=True)
class CycleAtLevel:
    """A cycle of f_n, stored as (smallest residue, length)."""

    p: int
    level: int
    length: int
    rep: int

    @property
    def modulus(self) -> int:
        return self.p**self.level

    def vertices(self) -> list[int]:
        """Cycle vertices in orbit order starting at ``rep``."""
        out = [self.rep]
        x = self.rep * self.rep % self.modulus
        while x != self.rep:
            out.append(x)
            if len(out) > self.length:
                raise DomainError(f"{self} is not a cycle of the stated length")
            x = x * x % self.modulus
        if len(out) != self.length:
            raise DomainError(f"{self} is not a cycle of the stated length")
        return out

    @classmethod
    def through(cls, x: int, p: int, level: int) -> CycleAtLevel:
        """The cycle containing ``x``; raises if ``x`` is only pre-periodic."""
        modulus = p**level
        x %= modulus
        seen = [x]
        y = x * x % modulus
        limit = modulus
        while y != x:
            seen.append(y)
            if len(seen) > limit:
                raise DomainError(f"{x} is not periodic modulo {p}^{level}")
            y = y * y % modulus
        return cls(p, level, len(seen), min(seen))


class LiftKind(enum.Enum):
    GROWS = "Grows"
    SPLITS = "Splits"
    PARTIALLY_SPLITS = "PartiallySplits"
    GROWS_TAILS = "GrowsTails"


@dataclass(frozen=True)
class LiftClass:
    kind: LiftKind
    r: int | None = None

    def __post_init__(self):
        if (self.kind is LiftKind.PARTIALLY_SPLITS) != (self.r is not None):
            raise DomainError("r is carried exactly by PartiallySplits")
        if self.r is not None and self.r < 2:
            raise DomainError(f"PartiallySplits needs r >= 2, got {self.r}")

    def __str__(self):
        return f"{self.kind.value}({self.r})" if self.r else self.kind.value

    def predicted_lifts(self, length: int, p: int) -> CycleCensus:
        """Cycle lengths the lifts of a cycle of this class must have."""
        if self.kind is LiftKind.GROWS:
            return CycleCensus.from_mapping({p * length: 1})
        if self.kind is LiftKind.SPLITS:
            return CycleCensus.from_mapping({length: p})
        if self.kind is LiftKind.GROWS_TAILS:
            return CycleCensus.from_mapping({length: 1})
        return CycleCensus.from_mapping({length: 1, length * self.r: (p - 1) // self.r})


def _iterate(x: int, ell: int, p: int, level: int) -> int:
    """f^ell(x) mod p**level, i.e. x**(2**ell)."""
    modulus = p**level
    if x % p:
        # unit: reduce the exponent modulo the group order p^(level-1)(p-1)
        return pow(x, pow(2, ell, p ** (level - 1) * (p - 1)), modulus)
    x %= modulus
    for _ in range(ell):
        if x == 0:
            break
        x = x * x % modulus
    return x


def an_bn(c: CycleAtLevel) -> tuple[int, int | None]:
    """(a, b) mod p of the linearization at ``c.rep``.

    a = 2^l * x^(2^l - 1) mod p.  b = (f^l(x) - x)/p^n mod p, which is only
    meaningful when a == 1 mod p; otherwise None.
    """
    p, x, ell = c.p, c.rep, c.length
    if x % p == 0:
        a = 0
    else:
        a = pow(2, ell, p) * pow(x, (pow(2, ell, p - 1) - 1) % (p - 1), p) % p
    if a != 1:
        return a, None
    image = _iterate(x, ell, p, c.level + 1)
    diff = (image - x) % p ** (c.level + 1)
    if diff % c.modulus:
        raise DomainError(f"{c} is not a cycle: f^l(rep) != rep mod p^n")
    return a, diff // c.modulus % p


def classify(c: CycleAtLevel) -> LiftClass:
    a, b = an_bn(c)
    if a == 0:
        return LiftClass(LiftKind.GROWS_TAILS)
    if a == 1:
        return LiftClass(LiftKind.GROWS if b else LiftKind.SPLITS)
    return LiftClass(LiftKind.PARTIALLY_SPLITS, mul_order(a, c.p))


def lift_cycles(c: CycleAtLevel, max_nodes: int | None = None) -> list[CycleAtLevel]:
    """All cycles of f_{n+1} over ``c``, found by direct simulation."""
    p, n = c.p, c.level
    bound = max_nodes_default() if max_nodes is None else max_nodes
    if p * c.length > bound:
        raise ResourceError(f"lifting {c} needs {p * c.length} nodes > {bound}")
    modulus = p ** (n + 1)
    pn = p**n
    residues = [x + pn * t for x in c.vertices() for t in range(p)]
    found = cycles_of(residues, lambda y: y * y % modulus)
    return [CycleAtLevel(p, n + 1, len(cyc), cyc[0]) for cyc in found]


@dataclass(frozen=True)
class ShadowFate:
    """What happens around the shadow of a periodic orbit of length ``ell``.

    ``branch`` is "splits" when 2^ell = 1 mod p, else "partially_splits".
    At every level the shadow gives birth to ``born_count`` cycles of length
    ``born_length``; each of those splits s-1 times and then grows forever.
    """

    ell: int
    p: int
    s: int
    r: int
    branch: str

    @property
    def born_count(self) -> int:
        return (self.p - 1) // self.r

    @property
    def born_length(self) -> int:
        return self.ell * self.r


def orbit_lengths(p: int) -> set[int]:
    return {c.cycle_length for c in rogers_structure(p).components}


def shadow_fate(ell: int, p: int) -> ShadowFate:
    check_odd_prime(p)
    if ell not in orbit_lengths(p):
        raise DomainError(f"no periodic orbit of length {ell} for p={p}")
    o = mul_order(2, p)
    r = o // math.gcd(ell, o)
    branch = "splits" if pow(2, ell, p) == 1 else "partially_splits"
    return ShadowFate(ell, p, wieferich_valuation(p).s, r, branch)


def predicted_cycle_census(p: int, n: int) -> CycleCensus:
    """Cycle census of f_n on Z/p^nZ, derived without enumerating residues."""
    check_odd_prime(p)
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    counts: Counter = Counter({1: 1})  # the fixed point 0
    for comp in rogers_structure(p).components:
        fate = shadow_fate(comp.cycle_length, p)
        per_orbit: Counter = Counter({comp.cycle_length: 1})
        for i in range(1, n):
            age = n - i  # levels since the shadow at level i gave birth
            if age <= fate.s:
                per_orbit[fate.born_length] += fate.born_count * p ** (age - 1)
            else:
                per_orbit[fate.born_length * p ** (age - fate.s)] += (
                    fate.born_count * p ** (fate.s - 1)
                )
        for length, count in per_orbit.items():
            counts[length] += comp.copies * count
    return CycleCensus.from_mapping(counts)


@dataclass(frozen=True)
class Case1Record:
    p: int
    ell: int
    copies: int
    two_pow_ell_is_one: bool


def case1_scan(limit: int) -> list[Case1Record]:
    """For every odd prime p < limit and each level-1 unit cycle length,
    record whether 2^ell = 1 mod p (the "splits" branch of the shadow)."""
    from .numtheory import primes_below

    records = []
    for p in primes_below(limit):
        if p == 2:
            continue
        census = CycleCensus.from_lengths(len(cyc) for cyc in unit_cycles(p))
        for ell, copies in census.counts:
            records.append(Case1Record(p, ell, copies, pow(2, ell, p) == 1))
    return records
