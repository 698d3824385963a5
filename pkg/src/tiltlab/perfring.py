"""Canonical digit arithmetic in the standard mixed-characteristic model and
its characteristic-p counterpart.

The mixed model is the valuation ring of the completion of Q_p(p^(1/p^oo)),
truncated mod p^N: every residue class has a unique expansion
sum c_e * p^e with digits c_e in [1, p-1] and exponents e in Z[1/p], e < N.
The characteristic-p model is the analogous truncation of F_p[[t^(1/p^oo)]]
mod t^M; there addition is digit-wise mod p (no carries) and Frobenius is
exact exponent scaling.

Digits are stored sparsely as {key: digit} with exponent = key / p**denlog,
all keys sharing one denominator scale per element.  Elements are immutable
after construction; operations return fresh values.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import ContractError, FormulaSyntaxError, ParameterError
from .exponent import Exponent, ExponentLike, ExtVal

__all__ = [
    "ModelParams", "MixedElem", "TiltElem", "DValue",
    "add", "mul", "valuation", "d_predicate", "pth_root_mod_p",
    "frobenius_tilt", "inv_frobenius_tilt", "parse_element", "element_from_json",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ModelParams:
    """Prime p and the norm base alpha = |p| (used only when a real norm
    value is materialized; the algebraic core works with exponents)."""

    p: int
    alpha: Fraction = None  # type: ignore[assignment]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ParameterError(f"p = {self.p} is not prime")
        alpha = self.alpha if self.alpha is not None else Fraction(1, self.p)
        alpha = Fraction(alpha)
        if not (0 < alpha < 1):
            raise ParameterError(f"alpha = {alpha} outside (0, 1)")
        object.__setattr__(self, "alpha", alpha)

    def exp(self, value: ExponentLike, denlog: int | None = None) -> Exponent:
        return Exponent.of(self.p, value, denlog)


@dataclass(frozen=True)
class DValue:
    """Value of the divisibility predicate D(a, b) = inf_z |b - a*z|.

    kind "zero": exactly 0; "norm": exactly alpha**exp; "upper": only the
    bound [0, alpha**exp] is certified at the current precision.
    """

    kind: str
    exp: Exponent | None = None

    @staticmethod
    def zero() -> "DValue":
        return DValue("zero")

    @staticmethod
    def norm(e: Exponent) -> "DValue":
        return DValue("norm", e)

    @staticmethod
    def upper(e: Exponent) -> "DValue":
        return DValue("upper", e)

    def __str__(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "norm":
            return f"alpha^({self.exp})"
        return f"<=alpha^({self.exp})"


def _strip_scale(p: int, denlog: int, digits: dict[int, int]) -> tuple[int, dict[int, int]]:
    """Reduce to the minimal common denominator scale."""
    while denlog > 0 and all(k % p == 0 for k in digits):
        digits = {k // p: c for k, c in digits.items()}
        denlog -= 1
    return denlog, digits


def _align(p: int, da: int, ma: dict[int, int], db: int, mb: dict[int, int]):
    d = max(da, db)
    if da < d:
        f = p ** (d - da)
        ma = {k * f: c for k, c in ma.items()}
    if db < d:
        f = p ** (d - db)
        mb = {k * f: c for k, c in mb.items()}
    return d, ma, mb


def _mixed_canonical(p: int, denlog: int, prec: int,
                     items: Iterable[tuple[int, int]]) -> tuple[int, dict[int, int]]:
    """Carry arithmetic: reduce arbitrary integer coefficients at scale
    denlog to canonical digits in [1, p-1], dropping exponents >= prec.

    A coefficient c at exponent e contributes (c mod p) at e and carries
    floor(c/p) to e+1; negative coefficients borrow the same way.
    """
    step = p ** denlog
    bound = prec * step
    acc: dict[int, int] = {}
    for k, c in items:
        if c:
            acc[k] = acc.get(k, 0) + c
    heap = [k for k in acc if k < bound]
    heapq.heapify(heap)
    out: dict[int, int] = {}
    while heap:
        k = heapq.heappop(heap)
        c = acc.pop(k, 0)
        if c == 0:
            continue
        d = c % p
        carry = (c - d) // p
        if d:
            out[k] = d
        if carry:
            k2 = k + step
            if k2 < bound:
                if k2 in acc:
                    acc[k2] += carry
                else:
                    acc[k2] = carry
                    heapq.heappush(heap, k2)
    dl, out = _strip_scale(p, denlog, out)
    return dl, out


def _tilt_canonical(p: int, denlog: int, prec_key: int,
                    items: Iterable[tuple[int, int]]) -> tuple[int, dict[int, int]]:
    """Characteristic p: digits reduce mod p with no carries."""
    acc: dict[int, int] = {}
    for k, c in items:
        if k >= prec_key:
            continue
        acc[k] = (acc.get(k, 0) + c) % p
    out = {k: c for k, c in acc.items() if c}
    dl, out = _strip_scale(p, denlog, out)
    return dl, out


class _DigitElem:
    """Shared plumbing for the two digit models."""

    __slots__ = ("params", "prec", "denlog", "digits", "_hash")

    def __init__(self, params: ModelParams, prec, denlog: int, digits: dict[int, int]):
        self.params = params
        self.prec = prec
        self.denlog = denlog
        self.digits = digits
        self._hash = None

    @property
    def p(self) -> int:
        return self.params.p

    def is_zero(self) -> bool:
        return not self.digits

    def support(self) -> list[Exponent]:
        """Exponents carrying a nonzero digit, ascending."""
        return [Exponent.of(self.p, k, self.denlog) for k in sorted(self.digits)]

    def digits_by_exponent(self) -> dict[Exponent, int]:
        return {Exponent.of(self.p, k, self.denlog): c for k, c in self.digits.items()}

    def leading_exponent(self) -> Exponent | None:
        if not self.digits:
            return None
        return Exponent.of(self.p, min(self.digits), self.denlog)

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.params == other.params
                and self.prec == other.prec and self.denlog == other.denlog
                and self.digits == other.digits)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.p, self.prec,
                               self.denlog, frozenset(self.digits.items())))
        return self._hash

    def _check_same_params(self, other):
        if self.params.p != other.params.p:
            raise ContractError(
                f"mismatched primes: p={self.params.p} vs p={other.params.p}")

    def _term_strings(self, symbol: str) -> Iterator[str]:
        for k in sorted(self.digits):
            c = self.digits[k]
            e = Exponent.of(self.p, k, self.denlog)
            if e.is_zero():
                yield str(c)
            else:
                if e.denlog == 0 and e.num == 1:
                    power = symbol
                elif e.denlog == 0:
                    power = f"{symbol}^{e.num}"
                else:
                    power = f"{symbol}^({e})"
                yield power if c == 1 else f"{c}*{power}"

    def _str(self, symbol: str) -> str:
        if not self.digits:
            return "0"
        return " + ".join(self._term_strings(symbol))


class MixedElem(_DigitElem):
    """An element of the mixed model known mod p^N (N = ``prec``, an int)."""

    def __init__(self, params: ModelParams, prec: int, denlog: int, digits: dict[int, int]):
        if prec < 1:
            raise ContractError("mixed precision must be >= 1")
        super().__init__(params, prec, denlog, digits)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_terms(params: ModelParams, prec: int,
                   terms: Iterable[tuple[ExponentLike, int]]) -> "MixedElem":
        """Normalize arbitrary (exponent, integer coefficient) terms."""
        exps = [(Exponent.of(params.p, e), c) for e, c in terms]
        denlog = max((e.denlog for e, _ in exps), default=0)
        items = [(e.num * params.p ** (denlog - e.denlog), c) for e, c in exps]
        dl, digits = _mixed_canonical(params.p, denlog, prec, items)
        return MixedElem(params, prec, dl, digits)

    @staticmethod
    def zero(params: ModelParams, prec: int) -> "MixedElem":
        return MixedElem(params, prec, 0, {})

    @staticmethod
    def one(params: ModelParams, prec: int) -> "MixedElem":
        return MixedElem(params, prec, 0, {0: 1})

    @staticmethod
    def from_int(params: ModelParams, prec: int, n: int) -> "MixedElem":
        return MixedElem.from_terms(params, prec, [(0, n)])

    @staticmethod
    def monomial(params: ModelParams, prec: int, e: ExponentLike, digit: int = 1) -> "MixedElem":
        return MixedElem.from_terms(params, prec, [(e, digit)])

    # -- ring operations ---------------------------------------------------

    def _binop_prec(self, other: "MixedElem") -> int:
        self._check_same_params(other)
        return min(self.prec, other.prec)

    def __add__(self, other: "MixedElem") -> "MixedElem":
        prec = self._binop_prec(other)
        d, ma, mb = _align(self.p, self.denlog, self.digits, other.denlog, other.digits)
        items = list(ma.items()) + list(mb.items())
        dl, digits = _mixed_canonical(self.p, d, prec, items)
        return MixedElem(self.params, prec, dl, digits)

    def __neg__(self) -> "MixedElem":
        dl, digits = _mixed_canonical(
            self.p, self.denlog, self.prec, [(k, -c) for k, c in self.digits.items()])
        return MixedElem(self.params, self.prec, dl, digits)

    def __sub__(self, other: "MixedElem") -> "MixedElem":
        return self + (-other)

    def __mul__(self, other: "MixedElem") -> "MixedElem":
        prec = self._binop_prec(other)
        d, ma, mb = _align(self.p, self.denlog, self.digits, other.denlog, other.digits)
        bound = prec * self.p ** d
        acc: dict[int, int] = {}
        for ka, ca in ma.items():
            if ka >= bound:
                continue
            for kb, cb in mb.items():
                k = ka + kb
                if k < bound:
                    acc[k] = acc.get(k, 0) + ca * cb
        dl, digits = _mixed_canonical(self.p, d, prec, acc.items())
        return MixedElem(self.params, prec, dl, digits)

    def __pow__(self, n: int) -> "MixedElem":
        if n < 0:
            raise ContractError("negative powers are not defined in the valuation ring")
        result = MixedElem.one(self.params, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- precision management ---------------------------------------------

    def truncate(self, prec: int) -> "MixedElem":
        if prec > self.prec:
            raise ContractError("truncate cannot raise precision; use with_precision")
        bound = prec * self.p ** self.denlog
        dl, digits = _strip_scale(
            self.p, self.denlog, {k: c for k, c in self.digits.items() if k < bound})
        return MixedElem(self.params, prec, dl, digits)

    def with_precision(self, prec: int) -> "MixedElem":
        """The canonical digit lift of this element to a higher precision."""
        if prec < self.prec:
            return self.truncate(prec)
        return MixedElem(self.params, prec, self.denlog, dict(self.digits))

    def residue(self) -> "MixedElem":
        """Reduction mod p (the canonical digit representative)."""
        return self.truncate(1)

    def shift_p(self, j: int) -> "MixedElem":
        """Multiply by p**j (j >= 0); the result is known mod p^(N+j)."""
        if j < 0:
            raise ContractError("shift_p needs j >= 0; use divexact_p to divide")
        step = self.p ** self.denlog
        return MixedElem(self.params, self.prec + j, self.denlog,
                         {k + j * step: c for k, c in self.digits.items()})

    def divexact_p(self, j: int) -> "MixedElem":
        """Divide by p**j; every digit must sit at exponent >= j."""
        if j < 0:
            raise ContractError("divexact_p needs j >= 0")
        if self.prec - j < 1:
            raise ContractError(f"cannot divide by p^{j} at precision {self.prec}")
        step = self.p ** self.denlog
        low = j * step
        if any(k < low for k in self.digits):
            raise ContractError(f"element is not divisible by p^{j}")
        dl, digits = _strip_scale(self.p, self.denlog,
                                  {k - low: c for k, c in self.digits.items()})
        return MixedElem(self.params, self.prec - j, dl, digits)

    # -- valuation-ring structure ------------------------------------------

    def valuation(self) -> ExtVal:
        e = self.leading_exponent()
        if e is None:
            return ExtVal.at_least(self.params.exp(self.prec))
        return ExtVal.finite(e)

    def pth_root_mod_p(self) -> "MixedElem":
        """A y with y^p = self mod p, by remapping sub-1 exponents e -> e/p.

        The root is canonical mod (p^(1/p)) but only pinned mod p by the
        contract; the returned representative carries precision 1.
        """
        bound = self.p ** self.denlog  # exponent 1 at current scale
        digits = {k: c for k, c in self.digits.items() if k < bound}
        dl, digits = _strip_scale(self.p, self.denlog + 1, digits)
        return MixedElem(self.params, 1, dl, digits)

    def unit_inverse(self) -> "MixedElem":
        """Inverse of a unit (valuation 0) mod p^N."""
        if self.is_zero() or min(self.digits) != 0:
            raise ContractError("unit_inverse requires valuation 0")
        c0 = self.digits[0]
        c0_inv = pow(c0, -1, self.p ** self.prec)
        c0_inv_elem = MixedElem.from_int(self.params, self.prec, c0_inv)
        w = self * c0_inv_elem  # 1 + m with v(m) > 0
        m = w - MixedElem.one(self.params, self.prec)
        inv = MixedElem.one(self.params, self.prec)
        term = -m
        while not term.is_zero():
            inv = inv * (MixedElem.one(self.params, self.prec) + term)
            term = term * term
        return inv * c0_inv_elem

    def divide(self, other: "MixedElem") -> "MixedElem":
        """The canonical representative z of self/other at the working
        precision W = min of the two precisions; satisfies
        other * z = self mod p^W.  Requires v(other) <= v(self)."""
        v = other.valuation()
        if not v.is_finite:
            raise ContractError("division by (effective) zero")
        if self.is_zero():
            return MixedElem.zero(self.params, min(self.prec, other.prec))
        e = v.exp
        if self.leading_exponent() < e:
            raise ContractError("division would leave the valuation ring")
        unit = _mixed_shift_down(other, e)
        num = _mixed_shift_down(self, e)
        return num * unit.unit_inverse()

    # -- presentation ------------------------------------------------------

    def __str__(self) -> str:
        return self._str("p")

    def __repr__(self) -> str:
        return f"MixedElem(p={self.p}, N={self.prec}, {self})"

    def to_json_dict(self) -> dict:
        return {
            "kind": "mixed", "p": self.p, "precision": self.prec,
            "digits": [[Exponent.of(self.p, k, self.denlog).num,
                        Exponent.of(self.p, k, self.denlog).denlog, c]
                       for k, c in sorted(self.digits.items())],
        }


def _mixed_shift_down(a: MixedElem, e: Exponent) -> MixedElem:
    """Divide by the monomial p^e (every digit must have exponent >= e)."""
    d = max(a.denlog, e.denlog)
    f = a.p ** (d - a.denlog)
    low = e.num * a.p ** (d - e.denlog)
    items = {}
    for k, c in a.digits.items():
        k2 = k * f - low
        if k2 < 0:
            raise ContractError("element is not divisible by the monomial")
        items[k2] = c
    dl, digits = _strip_scale(a.p, d, items)
    return MixedElem(a.params, a.prec, dl, digits)


class TiltElem(_DigitElem):
    """An element of the characteristic-p model known mod t^M
    (M = ``prec``, an Exponent; inverse Frobenius divides it by p)."""

    def __init__(self, params: ModelParams, prec: Exponent, denlog: int, digits: dict[int, int]):
        if prec.is_zero():
            raise ContractError("tilt precision must be positive")
        super().__init__(params, prec, denlog, digits)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_terms(params: ModelParams, prec: ExponentLike,
                   terms: Iterable[tuple[ExponentLike, int]]) -> "TiltElem":
        prec = Exponent.of(params.p, prec)
        exps = [(Exponent.of(params.p, e), c) for e, c in terms]
        denlog = max([e.denlog for e, _ in exps] + [prec.denlog], default=0)
        items = [(e.num * params.p ** (denlog - e.denlog), c) for e, c in exps]
        prec_key = prec.num * params.p ** (denlog - prec.denlog)
        dl, digits = _tilt_canonical(params.p, denlog, prec_key, items)
        return TiltElem(params, prec, dl, digits)

    @staticmethod
    def zero(params: ModelParams, prec: ExponentLike) -> "TiltElem":
        return TiltElem(params, Exponent.of(params.p, prec), 0, {})

    @staticmethod
    def one(params: ModelParams, prec: ExponentLike) -> "TiltElem":
        return TiltElem(params, Exponent.of(params.p, prec), 0, {0: 1})

    @staticmethod
    def from_int(params: ModelParams, prec: ExponentLike, n: int) -> "TiltElem":
        return TiltElem.from_terms(params, prec, [(0, n)])

    @staticmethod
    def monomial(params: ModelParams, prec: ExponentLike, e: ExponentLike,
                 digit: int = 1) -> "TiltElem":
        return TiltElem.from_terms(params, prec, [(e, digit)])

    # -- helpers -----------------------------------------------------------

    def _binop_prec(self, other: "TiltElem") -> Exponent:
        self._check_same_params(other)
        return min(self.prec, other.prec, key=lambda e: e.as_fraction())

    # -- ring operations (characteristic p) --------------------------------

    def _common_scale(self, other: "TiltElem", prec: Exponent):
        d0, ma, mb = _align(self.p, self.denlog, self.digits, other.denlog, other.digits)
        d = max(d0, prec.denlog)
        if d > d0:
            f = self.p ** (d - d0)
            ma = {k * f: c for k, c in ma.items()}
            mb = {k * f: c for k, c in mb.items()}
        prec_key = prec.num * self.p ** (d - prec.denlog)
        return d, prec_key, ma, mb

    def __add__(self, other: "TiltElem") -> "TiltElem":
        prec = self._binop_prec(other)
        d, prec_key, ma, mb = self._common_scale(other, prec)
        items = list(ma.items()) + list(mb.items())
        dl, digits = _tilt_canonical(self.p, d, prec_key, items)
        return TiltElem(self.params, prec, dl, digits)

    def __neg__(self) -> "TiltElem":
        digits = {k: self.p - c for k, c in self.digits.items()}
        return TiltElem(self.params, self.prec, self.denlog, digits)

    def __sub__(self, other: "TiltElem") -> "TiltElem":
        return self + (-other)

    def __mul__(self, other: "TiltElem") -> "TiltElem":
        prec = self._binop_prec(other)
        d, prec_key, ma, mb = self._common_scale(other, prec)
        acc: dict[int, int] = {}
        for ka, ca in ma.items():
            if ka >= prec_key:
                continue
            for kb, cb in mb.items():
                k = ka + kb
                if k < prec_key:
                    acc[k] = acc.get(k, 0) + ca * cb
        dl, digits = _tilt_canonical(self.p, d, prec_key, acc.items())
        return TiltElem(self.params, prec, dl, digits)

    def frobenius(self, j: int = 1) -> "TiltElem":
        """x -> x^(p^j): exact exponent scaling (digits are fixed by x -> x^p
        on F_p).  Precision scales by p^j.  j may be negative (inverse
        Frobenius, exact on the perfect model)."""
        if j == 0:
            return self
        prec = self.prec.scale_p(j)
        if j > 0:
            denlog = self.denlog
            digits = self.digits
            for _ in range(j):
                if denlog > 0:
                    denlog -= 1
                else:
                    digits = {k * self.p: c for k, c in digits.items()}
            dl, digits = _strip_scale(self.p, denlog, dict(digits))
            return TiltElem(self.params, prec, dl, digits)
        return TiltElem(self.params, prec, self.denlog - j, dict(self.digits))

    def __pow__(self, n: int) -> "TiltElem":
        """x^n via the base-p expansion of n, so that p-th powers route
        through exact Frobenius scaling rather than lossy convolution."""
        if n < 0:
            raise ContractError("negative powers are not defined in the valuation ring")
        if n == 0:
            return TiltElem.one(self.params, self.prec)
        result = None
        base = self
        while n:
            d = n % self.p
            if d:
                piece = base
                for _ in range(d - 1):
                    piece = piece * base
                result = piece if result is None else result * piece
            n //= self.p
            if n:
                base = base.frobenius()
        return result

    # -- precision management ----------------------------------------------

    def truncate(self, prec: ExponentLike) -> "TiltElem":
        prec = Exponent.of(self.p, prec)
        if prec > self.prec:
            raise ContractError("truncate cannot raise precision; use with_precision")
        d = max(self.denlog, prec.denlog)
        f = self.p ** (d - self.denlog)
        bound = prec.num * self.p ** (d - prec.denlog)
        digits = {k * f: c for k, c in self.digits.items() if k * f < bound}
        dl, digits = _strip_scale(self.p, d, digits)
        return TiltElem(self.params, prec, dl, digits)

    def with_precision(self, prec: ExponentLike) -> "TiltElem":
        """Canonical digit lift to a higher t-adic precision."""
        prec = Exponent.of(self.p, prec)
        if prec < self.prec:
            return self.truncate(prec)
        return TiltElem(self.params, prec, self.denlog, dict(self.digits))

    def shift_t(self, e: ExponentLike) -> "TiltElem":
        """Multiply by the monomial t^e (e >= 0); precision rises by e."""
        e = Exponent.of(self.p, e)
        d = max(self.denlog, e.denlog)
        f = self.p ** (d - self.denlog)
        off = e.num * self.p ** (d - e.denlog)
        digits = {k * f + off: c for k, c in self.digits.items()}
        dl, digits = _strip_scale(self.p, d, digits)
        return TiltElem(self.params, self.prec + e, dl, digits)

    def divexact_t(self, e: ExponentLike) -> "TiltElem":
        """Divide by t^e; every digit must have exponent >= e and e < prec."""
        e = Exponent.of(self.p, e)
        if e.is_zero():
            return self
        if not e < self.prec:
            raise ContractError("dividing away the entire precision window")
        d = max(self.denlog, e.denlog)
        f = self.p ** (d - self.denlog)
        off = e.num * self.p ** (d - e.denlog)
        digits = {}
        for k, c in self.digits.items():
            k2 = k * f - off
            if k2 < 0:
                raise ContractError(f"element is not divisible by t^({e})")
            digits[k2] = c
        dl, digits = _strip_scale(self.p, d, digits)
        return TiltElem(self.params, self.prec - e, dl, digits)

    # -- valuation-ring structure -------------------------------------------

    def valuation(self) -> ExtVal:
        e = self.leading_exponent()
        if e is None:
            return ExtVal.at_least(self.prec)
        return ExtVal.finite(e)

    def unit_inverse(self) -> "TiltElem":
        if self.is_zero() or not self.leading_exponent().is_zero():
            raise ContractError("unit_inverse requires valuation 0")
        c0 = self.digits[min(self.digits)]
        inv_c0 = TiltElem.from_int(self.params, self.prec, pow(c0, -1, self.p))
        w = self * inv_c0
        one = TiltElem.one(self.params, self.prec)
        m = w - one
        inv = one
        term = -m
        while not term.is_zero():
            inv = inv * (one + term)
            term = term * term
        return inv * inv_c0

    def divide(self, other: "TiltElem") -> "TiltElem":
        """self / other when v(other) <= v(self)."""
        v = other.valuation()
        if not v.is_finite:
            raise ContractError("division by (effective) zero")
        if self.is_zero():
            return TiltElem.zero(self.params, self._binop_prec(other))
        if self.leading_exponent() < v.exp:
            raise ContractError("division would leave the valuation ring")
        unit = other.divexact_t(v.exp)
        return self.divexact_t(v.exp) * unit.unit_inverse()

    # -- presentation --------------------------------------------------------

    def __str__(self) -> str:
        return self._str("t")

    def __repr__(self) -> str:
        return f"TiltElem(p={self.p}, M={self.prec}, {self})"

    def to_json_dict(self) -> dict:
        return {
            "kind": "tilt", "p": self.p,
            "precision": [self.prec.num, self.prec.denlog],
            "digits": [[Exponent.of(self.p, k, self.denlog).num,
                        Exponent.of(self.p, k, self.denlog).denlog, c]
                       for k, c in sorted(self.digits.items())],
        }


# -- the spec'd operation surface ------------------------------------------

def add(a, b):
    """Canonical-form sum; result precision is the min of the inputs'."""
    return a + b


def mul(a, b):
    """Canonical-form product; valuations add when finite."""
    return a * b


def valuation(a) -> ExtVal:
    """Least stored exponent, or AtLeast(precision) for a truncated zero."""
    return a.valuation()


def d_predicate(a, b) -> DValue:
    """D(a, b) = inf_z |b - a z|: 0 when v(a) <= v(b), else |b|.

    AtLeast valuations propagate to certified upper bounds instead of
    guessing the branch.
    """
    if type(a) is not type(b):
        raise ContractError("D compares elements of the same model")
    a._check_same_params(b)
    va, vb = a.valuation(), b.valuation()
    le = va.le_certain(vb)
    if le is True:
        return DValue.zero()
    if le is False:
        # only reachable with v(b) exactly known
        return DValue.norm(vb.exp)
    if vb.kind == "infinity":
        return DValue.zero()
    return DValue.upper(vb.exp)


def pth_root_mod_p(a: MixedElem) -> MixedElem:
    return a.pth_root_mod_p()


def frobenius_tilt(y: TiltElem) -> TiltElem:
    return y.frobenius(1)


def inv_frobenius_tilt(y: TiltElem) -> TiltElem:
    return y.frobenius(-1)


# -- text and JSON round trips ----------------------------------------------

def _tokenize_element(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isalpha():
            tokens.append(("sym", ch, i))
            i += 1
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


def parse_element(text: str, params: ModelParams, precision, kind: str = "mixed"):
    """Parse the signed-term grammar, e.g. ``1 + 3*p^(5/4)`` or ``2*t^(1/3)``.

    Non-canonical input (digits >= p, repeated exponents, minus signs) is
    normalized on construction.
    """
    symbol = "p" if kind == "mixed" else "t"
    toks = _tokenize_element(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "", len(text))

    def take(kind_):
        nonlocal pos
        t = peek()
        if t[0] != kind_:
            raise FormulaSyntaxError(f"expected {kind_!r}, found {t[1]!r}", t[2])
        pos += 1
        return t

    def parse_exponent() -> Fraction:
        t = peek()
        if t[0] == "int":
            take("int")
            return Fraction(int(t[1]))
        take("(")
        num = int(take("int")[1])
        if peek()[0] == "/":
            take("/")
            den = int(take("int")[1])
            frac = Fraction(num, den)
        else:
            frac = Fraction(num)
        take(")")
        return frac

    def parse_term() -> tuple[Fraction, int]:
        coeff = 1
        expo = Fraction(0)
        t = peek()
        if t[0] == "int":
            take("int")
            coeff = int(t[1])
            if peek()[0] == "*":
                take("*")
                t = peek()
        t = peek()
        if t[0] == "sym":
            if t[1] != symbol:
                raise FormulaSyntaxError(
                    f"unknown symbol {t[1]!r} (expected {symbol!r})", t[2])
            take("sym")
            expo = Fraction(1)
            if peek()[0] == "^":
                take("^")
                expo = parse_exponent()
        return expo, coeff

    terms: list[tuple[Fraction, int]] = []
    sign = 1
    t = peek()
    if t[0] in ("+", "-"):
        sign = -1 if t[0] == "-" else 1
        pos += 1
    e, c = parse_term()
    terms.append((e, sign * c))
    while peek()[0] in ("+", "-"):
        sign = -1 if take(peek()[0])[0] == "-" else 1
        e, c = parse_term()
        terms.append((e, sign * c))
    if peek()[0] != "end":
        raise FormulaSyntaxError(f"trailing input {peek()[1]!r}", peek()[2])
    if kind == "mixed":
        return MixedElem.from_terms(params, precision, terms)
    return TiltElem.from_terms(params, precision, terms)


def element_from_json(d: dict, alpha=None):
    """Inverse of ``to_json_dict``."""
    params = ModelParams(d["p"], alpha) if alpha is not None else ModelParams(d["p"])
    terms = [(Exponent.of(params.p, num, denlog), digit)
             for num, denlog, digit in d["digits"]]
    if d.get("kind", "mixed") == "mixed":
        return MixedElem.from_terms(params, int(d["precision"]), terms)
    num, denlog = d["precision"]
    return TiltElem.from_terms(params, Exponent.of(params.p, num, denlog), terms)
