"""Exponents with p-power denominators and truncation-aware valuations.

The value group of the standard model is Z[1/p]_{>=0}: every exponent is
num / p**denlog with num coprime to p once denlog > 0.  Valuations computed
from truncated elements are either exactly known (``Finite``), only bounded
below by the working precision (``AtLeast``), or infinite (exact zero in an
untruncated quotient ring).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ContractError

ExponentLike = Union["Exponent", int, Fraction, str]


def _strip_p(num: int, denlog: int, p: int) -> tuple[int, int]:
    while denlog > 0 and num % p == 0:
        num //= p
        denlog -= 1
    return num, denlog


@dataclass(frozen=True)
class Exponent:
    """A nonnegative rational num / p**denlog in lowest terms."""

    p: int
    num: int
    denlog: int

    @staticmethod
    def of(p: int, value: ExponentLike, denlog: int | None = None) -> "Exponent":
        """Build an exponent, normalizing the p-power denominator.

        ``Exponent.of(p, 5, 2)`` means 5/p^2; ``Exponent.of(p, Fraction(3, 4))``
        requires the denominator to be a power of p.
        """
        if isinstance(value, Exponent):
            if value.p != p:
                raise ContractError(f"exponent has p={value.p}, expected p={p}")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if denlog is not None:
            if not isinstance(value, int):
                raise ContractError("explicit denlog requires an integer numerator")
            num, k = value, denlog
        elif isinstance(value, int):
            num, k = value, 0
        else:
            value = Fraction(value)
            den = value.denominator
            k = 0
            while den % p == 0:
                den //= p
                k += 1
            if den != 1:
                raise ContractError(
                    f"denominator of {value} is not a power of p={p}")
            num = value.numerator
        if num < 0:
            raise ContractError(f"exponent {num}/p^{k} is negative")
        if k < 0:
            raise ContractError("denlog must be >= 0")
        num, k = _strip_p(num, k, p)
        return Exponent(p, num, k)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.p ** self.denlog)

    def is_zero(self) -> bool:
        return self.num == 0

    def _aligned(self, other: "Exponent") -> tuple[int, int, int]:
        if self.p != other.p:
            raise ContractError("mixing exponents of different p")
        k = max(self.denlog, other.denlog)
        a = self.num * self.p ** (k - self.denlog)
        b = other.num * self.p ** (k - other.denlog)
        return a, b, k

    def __add__(self, other: "Exponent") -> "Exponent":
        a, b, k = self._aligned(other)
        return Exponent.of(self.p, a + b, k)

    def __sub__(self, other: "Exponent") -> "Exponent":
        a, b, k = self._aligned(other)
        if a < b:
            raise ContractError("exponent subtraction went negative")
        return Exponent.of(self.p, a - b, k)

    def times(self, m: int) -> "Exponent":
        if m < 0:
            raise ContractError("negative multiple of an exponent")
        return Exponent.of(self.p, self.num * m, self.denlog)

    def scale_p(self, j: int) -> "Exponent":
        """Multiply by p**j (j may be negative; the result stays in Z[1/p])."""
        return Exponent.of(self.p, self.num, self.denlog - j) if self.denlog - j >= 0 \
            else Exponent.of(self.p, self.num * self.p ** (j - self.denlog), 0)

    def __lt__(self, other: "Exponent") -> bool:
        a, b, _ = self._aligned(other)
        return a < b

    def __le__(self, other: "Exponent") -> bool:
        a, b, _ = self._aligned(other)
        return a <= b

    def __gt__(self, other: "Exponent") -> bool:
        return other < self

    def __ge__(self, other: "Exponent") -> bool:
        return other <= self

    def __str__(self) -> str:
        if self.denlog == 0:
            return str(self.num)
        return f"{self.num}/{self.p ** self.denlog}"

    def __repr__(self) -> str:
        return f"Exponent({self.p}, {self})"


@dataclass(frozen=True)
class ExtVal:
    """Valuation value: Finite(e), AtLeast(e) from truncation, or Infinity."""

    kind: str  # "finite" | "atleast" | "infinity"
    exp: Exponent | None

    @staticmethod
    def finite(e: Exponent) -> "ExtVal":
        return ExtVal("finite", e)

    @staticmethod
    def at_least(e: Exponent) -> "ExtVal":
        return ExtVal("atleast", e)

    @staticmethod
    def infinite() -> "ExtVal":
        return ExtVal("infinity", None)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def lower_bound(self) -> Exponent | None:
        """An exponent e with v >= e; None for Infinity."""
        return self.exp

    def __add__(self, other: "ExtVal") -> "ExtVal":
        if self.kind == "infinity" or other.kind == "infinity":
            return ExtVal.infinite()
        e = self.exp + other.exp
        if self.kind == "atleast" or other.kind == "atleast":
            return ExtVal.at_least(e)
        return ExtVal.finite(e)

    def le_certain(self, other: "ExtVal") -> bool | None:
        """Decide v1 <= v2 if the truncated data settles it, else None."""
        a, b = self, other
        if a.kind == "infinity":
            return True if b.kind == "infinity" else (None if b.kind == "atleast" else False)
        if b.kind == "infinity":
            return True
        if a.kind == "finite" and b.kind == "finite":
            return a.exp <= b.exp
        if a.kind == "finite":  # b at least
            return True if a.exp <= b.exp else None
        if b.kind == "finite":  # a at least
            return False if a.exp > b.exp else None
        return None  # both AtLeast

    def __str__(self) -> str:
        if self.kind == "infinity":
            return "oo"
        if self.kind == "atleast":
            return f">={self.exp}"
        return str(self.exp)
