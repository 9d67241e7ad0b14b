"""Finite-precision p-adic integers and Teichmuller lifts."""
from __future__ import annotations

from dataclasses import dataclass

from .numtheory import DomainError, padic_valuation

DEFAULT_PRECISION = 64


class PrecisionError(ArithmeticError):
    """A requested quantity cannot be resolved at the available precision."""


@dataclass(frozen=True)
class AtLeast:
    """Sentinel for a valuation that is only known to be >= ``bound``."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


@dataclass(frozen=True, order=True)
class PadicInt:
    """Element of Z_p known modulo p**precision. Immutable."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise DomainError(f"precision must be positive, got {self.precision}")
        modulus = self.p**self.precision
        if not 0 <= self.value < modulus:
            object.__setattr__(self, "value", self.value % modulus)

    @classmethod
    def of(cls, value: int, p: int, precision: int = DEFAULT_PRECISION) -> PadicInt:
        return cls(p, precision, value % p**precision)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def _common(self, other: PadicInt | int) -> tuple[int, int]:
        if isinstance(other, int):
            return self.precision, other
        if other.p != self.p:
            raise DomainError(f"mixed primes {self.p} and {other.p}")
        return min(self.precision, other.precision), other.value

    def __add__(self, other):
        n, v = self._common(other)
        return PadicInt.of(self.value + v, self.p, n)

    __radd__ = __add__

    def __sub__(self, other):
        n, v = self._common(other)
        return PadicInt.of(self.value - v, self.p, n)

    def __rsub__(self, other: int):
        return PadicInt.of(other - self.value, self.p, self.precision)

    def __mul__(self, other):
        n, v = self._common(other)
        return PadicInt.of(self.value * v, self.p, n)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt.of(-self.value, self.p, self.precision)

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers are not supported")
        return PadicInt(self.p, self.precision, pow(self.value, e, self.modulus))

    def reduce(self, precision: int) -> PadicInt:
        """Truncate to a lower precision."""
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}"
            )
        return PadicInt.of(self.value, self.p, precision)

    def valuation(self) -> int | AtLeast:
        if self.value == 0:
            return AtLeast(self.precision)
        return padic_valuation(self.value, self.p)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def to_json(self) -> dict:
        return {"p": str(self.p), "N": str(self.precision), "value": str(self.value)}

    @classmethod
    def from_json(cls, obj: dict) -> PadicInt:
        return cls(int(obj["p"]), int(obj["N"]), int(obj["value"]))

    def __str__(self):
        return f"{self.value} (mod {self.p}^{self.precision})"


def diff_valuation(x: PadicInt, y: PadicInt) -> int | AtLeast:
    """v_p(x - y), or ``AtLeast(N)`` when x and y agree to full precision."""
    if x.p != y.p:
        raise DomainError(f"mixed primes {x.p} and {y.p}")
    return (x - y).valuation()


def teichmuller(c: int, p: int, precision: int = DEFAULT_PRECISION) -> PadicInt:
    """The (p-1)-st root of unity in Z_p congruent to ``c`` mod p.

    Iterates w <- w**p mod p**N until two successive iterates agree; each
    step gains at least one correct digit, so at most N steps are needed.
    """
    if c % p == 0:
        raise DomainError(f"{c} is not a unit modulo {p}")
    modulus = p**precision
    w = c % p
    for _ in range(precision + 1):
        nxt = pow(w, p, modulus)
        if nxt == w:
            return PadicInt(p, precision, w)
        w = nxt
    raise AssertionError("Frobenius iteration failed to stabilise")  # unreachable
