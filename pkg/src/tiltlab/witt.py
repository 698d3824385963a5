"""Truncated p-typical Witt vectors over a pluggable coefficient ring.

The universal sum/product/negation polynomials are generated once per prime
by solving the ghost equations over the integers (the generation itself is
the oracle: integrality of every coefficient is asserted, never assumed).
Arithmetic then runs through one of three strategies:

* ``poly``  - evaluate the universal polynomials; works over any ring;
* ``ghost`` - transport through ghost components; p-torsion-free rings only;
* ``teich`` - positional arithmetic on Teichmuller digits; perfect rings of
  characteristic p only.  The carry polynomials are two-variable sections of
  the generated sum polynomials, so this path shares the poly oracle.

Ghost components follow the normalization g_k = sum_{i<=k} p^i x_i^(p^(k-i)).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ContractError, IntegralityError, UnsupportedRingError
from .perfring import ModelParams, TiltElem

__all__ = [
    "CoeffRing", "IntRing", "IntModRing", "TiltRing", "WittVec", "WittPolySet",
    "gen_witt_polys", "ghost", "from_ghost", "wadd", "wmul", "wneg",
    "teichmuller", "teich_expand", "project", "witt_mul_p", "teich_scale",
    "witt_inv", "poly_text", "WITT_N_CAP",
]

WITT_N_CAP = 5  # universal polynomials grow doubly fast in p^n


# --------------------------------------------------------------------------
# sparse integer polynomials: dict[exponent tuple -> int coefficient]
# --------------------------------------------------------------------------

Poly = dict

def _poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _poly_scale(a: Poly, c: int) -> Poly:
    if c == 0:
        return {}
    return {m: c * v for m, v in a.items()}


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _poly_pow(a: Poly, n: int, arity: int) -> Poly:
    result = {(0,) * arity: 1}
    base = a
    while n:
        if n & 1:
            result = _poly_mul(result, base)
        n >>= 1
        if n:
            base = _poly_mul(base, base)
    return result


def _poly_divexact(a: Poly, d: int, what: str) -> Poly:
    out = {}
    for m, c in a.items():
        if c % d:
            raise IntegralityError(
                f"{what}: coefficient {c} not divisible by {d}; "
                "universal-polynomial generation is inconsistent")
        out[m] = c // d
    return out


def _embed(poly: Poly, old_k: int, new_k: int) -> Poly:
    """Reindex a polynomial in x_0..x_old,y_0..y_old into the variable block
    x_0..x_new,y_0..y_new."""
    out = {}
    for m, c in poly.items():
        xs, ys = m[:old_k + 1], m[old_k + 1:]
        out[xs + (0,) * (new_k - old_k) + ys + (0,) * (new_k - old_k)] = c
    return out


def _ghost_poly(p: int, k: int, arity: int, offset: int) -> Poly:
    out: Poly = {}
    for i in range(k + 1):
        m = [0] * arity
        m[offset + i] = p ** (k - i)
        out[tuple(m)] = p ** i
    return out


_POLY_CACHE: dict[int, dict[str, list[Poly]]] = {}
_POLY_LOCK = threading.Lock()


@dataclass(frozen=True)
class WittPolySet:
    """Universal polynomials for W_n: S_i, P_i in x_0..x_i,y_0..y_i and
    N_i in x_0..x_i, for i < n.  All coefficients are integers."""

    p: int
    n: int
    S: tuple
    P: tuple
    N: tuple


def _extend_cache(p: int, n: int) -> None:
    entry = _POLY_CACHE.setdefault(p, {"S": [], "P": [], "N": []})
    S, P, N = entry["S"], entry["P"], entry["N"]
    for k in range(len(S), n):
        arity = 2 * (k + 1)
        gx = _ghost_poly(p, k, arity, 0)
        gy = _ghost_poly(p, k, arity, k + 1)
        num_s = _poly_add(gx, gy)
        num_p = _poly_mul(gx, gy)
        for i in range(k):
            si = _embed(S[i], i, k)
            pi = _embed(P[i], i, k)
            num_s = _poly_add(num_s, _poly_scale(_poly_pow(si, p ** (k - i), arity), -p ** i))
            num_p = _poly_add(num_p, _poly_scale(_poly_pow(pi, p ** (k - i), arity), -p ** i))
        S.append(_poly_divexact(num_s, p ** k, f"S_{k}(p={p})"))
        P.append(_poly_divexact(num_p, p ** k, f"P_{k}(p={p})"))

        arity_n = k + 1
        num_n = _poly_scale(_ghost_poly(p, k, arity_n, 0), -1)
        for i in range(k):
            ni = {m + (0,) * (k - i): c for m, c in N[i].items()}
            num_n = _poly_add(num_n, _poly_scale(_poly_pow(ni, p ** (k - i), arity_n), -p ** i))
        N.append(_poly_divexact(num_n, p ** k, f"N_{k}(p={p})"))


def gen_witt_polys(p: int, n: int, cap: int | None = None) -> WittPolySet:
    """Generate (and cache) the universal polynomials for W_n over prime p.

    Raises IntegralityError if any coefficient fails to be an integer --
    an internal inconsistency, never expected.
    """
    cap = WITT_N_CAP if cap is None else cap
    if n < 1:
        raise ContractError("Witt length must be >= 1")
    if n > cap:
        raise ContractError(f"Witt length {n} exceeds the configured cap {cap}")
    with _POLY_LOCK:
        _extend_cache(p, n)
        entry = _POLY_CACHE[p]
        return WittPolySet(p, n, tuple(entry["S"][:n]), tuple(entry["P"][:n]),
                           tuple(entry["N"][:n]))


_CARRY_CACHE: dict[tuple[int, int], list] = {}


def _carry_polys(p: int, n: int) -> list[dict[tuple[int, int], int]]:
    """Two-variable sections S_k(a,0,...;b,0,...) with coefficients mod p,
    used by the Teichmuller-digit strategy."""
    cached = _CARRY_CACHE.get((p, n))
    if cached is not None:
        return cached
    polys = gen_witt_polys(p, n)
    out = []
    for k, s in enumerate(polys.S):
        sec: dict[tuple[int, int], int] = {}
        for m, c in s.items():
            xs, ys = m[:k + 1], m[k + 1:]
            if any(xs[1:]) or any(ys[1:]):
                continue
            cc = c % p
            if cc:
                sec[(xs[0], ys[0])] = cc
        out.append(sec)
    with _POLY_LOCK:
        _CARRY_CACHE[(p, n)] = out
    return out


def poly_text(poly: Poly, k: int, unary: bool = False) -> str:
    """Render S_k/P_k (or N_k with unary=True) as e.g. ``x1 + y1 - x0*y0``."""
    if not poly:
        return "0"
    def varname(idx: int) -> str:
        if unary:
            return f"x{idx}"
        return f"x{idx}" if idx <= k else f"y{idx - k - 1}"
    def monomial(m) -> str:
        parts = []
        for idx, e in enumerate(m):
            if e == 0:
                continue
            parts.append(varname(idx) if e == 1 else f"{varname(idx)}^{e}")
        return "*".join(parts) if parts else "1"
    items = sorted(poly.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))
    pieces = []
    for m, c in items:
        mono = monomial(m)
        mag = abs(c)
        body = mono if (mag == 1 and mono != "1") else (str(mag) if mono == "1" else f"{mag}*{mono}")
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def poly_json(poly: Poly) -> list:
    return [{"exps": list(m), "coeff": c}
            for m, c in sorted(poly.items(), key=lambda kv: sorted(kv[0], reverse=True))]


# --------------------------------------------------------------------------
# coefficient rings
# --------------------------------------------------------------------------

class CoeffRing:
    """Commutative ring interface consumed by Witt arithmetic.

    ``torsion_free`` enables ghost transport; ``perfect`` (characteristic p
    with exact inverse Frobenius) enables the Teichmuller-digit strategy and
    Teichmuller expansion.
    """

    p: int
    torsion_free = False
    perfect = False

    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def add(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def eq(self, a, b) -> bool: raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, n: int):
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def pth_power(self, a):
        return self.pow(a, self.p)

    def inv_frobenius(self, a):
        raise UnsupportedRingError(f"{self!r} has no exact inverse Frobenius")

    def inverse(self, a):
        raise UnsupportedRingError(f"{self!r} does not support unit inversion")

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())


class IntRing(CoeffRing):
    """The integers: p-torsion-free, ghost map invertible on Witt images."""

    torsion_free = True

    def __init__(self, p: int):
        self.p = p

    def zero(self): return 0
    def one(self): return 1
    def from_int(self, n): return n
    def add(self, a, b): return a + b
    def neg(self, a): return -a
    def mul(self, a, b): return a * b
    def eq(self, a, b): return a == b
    def pow(self, a, n): return a ** n

    def __repr__(self):
        return f"IntRing(p={self.p})"


class IntModRing(CoeffRing):
    """Z/modulus with the generic (universal-polynomial) strategy."""

    def __init__(self, p: int, modulus: int):
        if modulus < 2:
            raise ContractError("modulus must be >= 2")
        self.p = p
        self.modulus = modulus

    def zero(self): return 0
    def one(self): return 1 % self.modulus
    def from_int(self, n): return n % self.modulus
    def add(self, a, b): return (a + b) % self.modulus
    def neg(self, a): return (-a) % self.modulus
    def mul(self, a, b): return (a * b) % self.modulus
    def eq(self, a, b): return a % self.modulus == b % self.modulus
    def pow(self, a, n): return pow(a, n, self.modulus)

    def inverse(self, a):
        return pow(a, -1, self.modulus)

    def __repr__(self):
        return f"IntModRing(p={self.p}, modulus={self.modulus})"


class TiltRing(CoeffRing):
    """The characteristic-p digit model at a default t-adic precision.

    Equality compares canonical forms at the finer of the two operands'
    precisions truncated to the common window.
    """

    perfect = True

    def __init__(self, params: ModelParams, prec):
        self.params = params
        self.p = params.p
        self.prec = params.exp(prec)

    def zero(self): return TiltElem.zero(self.params, self.prec)
    def one(self): return TiltElem.one(self.params, self.prec)
    def from_int(self, n): return TiltElem.from_int(self.params, self.prec, n)
    def add(self, a, b): return a + b
    def neg(self, a): return -a
    def mul(self, a, b): return a * b

    def eq(self, a, b):
        m = min(a.prec, b.prec, key=lambda e: e.as_fraction())
        return a.truncate(m) == b.truncate(m)

    def pow(self, a, n): return a ** n
    def pth_power(self, a): return a.frobenius()
    def inv_frobenius(self, a): return a.frobenius(-1)
    def inverse(self, a): return a.unit_inverse()

    def __repr__(self):
        return f"TiltRing(p={self.p}, prec={self.prec})"


# --------------------------------------------------------------------------
# Witt vectors
# --------------------------------------------------------------------------

class WittVec:
    """A length-n Witt vector; ``components[0]`` is the first coordinate."""

    __slots__ = ("ring", "components")

    def __init__(self, ring: CoeffRing, components: Sequence):
        if len(components) < 1:
            raise ContractError("Witt length must be >= 1")
        self.ring = ring
        self.components = tuple(components)

    @property
    def n(self) -> int:
        return len(self.components)

    def eq(self, other: "WittVec") -> bool:
        if self.n != other.n:
            return False
        return all(self.ring.eq(a, b)
                   for a, b in zip(self.components, other.components))

    def __repr__(self):
        return "W(" + ", ".join(str(c) for c in self.components) + ")"

    def to_json_dict(self) -> dict:
        def comp(c):
            return c.to_json_dict() if hasattr(c, "to_json_dict") else c
        return {"p": self.ring.p, "n": self.n,
                "components": [comp(c) for c in self.components]}


def witt_zero(ring: CoeffRing, n: int) -> WittVec:
    return WittVec(ring, [ring.zero()] * n)


def witt_one(ring: CoeffRing, n: int) -> WittVec:
    return WittVec(ring, [ring.one()] + [ring.zero()] * (n - 1))


def teichmuller(ring: CoeffRing, a, n: int) -> WittVec:
    """[a] = (a, 0, ..., 0), the multiplicative section of w -> w_0."""
    return WittVec(ring, [a] + [ring.zero()] * (n - 1))


def project(w: WittVec, m: int) -> WittVec:
    """First m coordinates; a ring morphism W_n -> W_m."""
    if not (1 <= m <= w.n):
        raise ContractError(f"projection length {m} outside 1..{w.n}")
    return WittVec(w.ring, w.components[:m])


# -- ghost components --------------------------------------------------------

def ghost(w: WittVec) -> list:
    """(g_0, ..., g_{n-1}) with g_k = sum_{i<=k} p^i w_i^(p^(k-i)).

    Requires a p-torsion-free coefficient ring; over such a ring the ghost
    map is an injective ring homomorphism componentwise.
    """
    ring = w.ring
    if not ring.torsion_free:
        raise UnsupportedRingError("ghost components need a p-torsion-free ring")
    p = ring.p
    out = []
    for k in range(w.n):
        acc = ring.zero()
        for i in range(k + 1):
            term = ring.mul(ring.from_int(p ** i), ring.pow(w.components[i], p ** (k - i)))
            acc = ring.add(acc, term)
        out.append(acc)
    return out


def from_ghost(ring: CoeffRing, g: Sequence) -> WittVec:
    """Invert the ghost map (exact division by p^k at each stage)."""
    if not ring.torsion_free:
        raise UnsupportedRingError("ghost inversion needs a p-torsion-free ring")
    p = ring.p
    comps: list = []
    for k in range(len(g)):
        acc = g[k]
        for i in range(k):
            acc = ring.sub(acc, ring.mul(ring.from_int(p ** i),
                                         ring.pow(comps[i], p ** (k - i))))
        if isinstance(acc, int):
            if acc % p ** k:
                raise IntegralityError(f"ghost inversion: {acc} not divisible by p^{k}")
            comps.append(acc // p ** k)
        else:  # pragma: no cover - only integer rings are torsion-free here
            raise UnsupportedRingError("ghost inversion implemented for integer rings")
    return WittVec(ring, comps)


# -- strategies ---------------------------------------------------------------

def _default_strategy(ring: CoeffRing) -> str:
    if ring.torsion_free:
        return "ghost"
    if ring.perfect:
        return "teich"
    return "poly"


def _common(u: WittVec, v: WittVec) -> tuple[WittVec, WittVec]:
    if u.ring.p != v.ring.p:
        raise ContractError("mismatched primes in Witt arithmetic")
    n = min(u.n, v.n)
    return project(u, n), project(v, n)


def _eval_poly(poly: Poly, args: Sequence, ring: CoeffRing):
    """Evaluate an integer polynomial over the ring, with per-variable power
    tables (p-th powers route through ring.pth_power)."""
    p = ring.p
    tables: list[dict[int, object]] = [dict() for _ in args]
    needed: list[set[int]] = [set() for _ in args]
    for m in poly:
        for idx, e in enumerate(m):
            if e:
                needed[idx].add(e)
    for idx, exps in enumerate(needed):
        if not exps:
            continue
        table = tables[idx]
        table[1] = args[idx]
        for e in sorted(exps | {x for e in exps for x in _pow_chain(e, p)}):
            if e in table:
                continue
            if e % p == 0 and e // p in table:
                table[e] = ring.pth_power(table[e // p])
            else:
                table[e] = ring.mul(table[e - 1], args[idx]) if e - 1 in table \
                    else ring.pow(args[idx], e)
    acc = ring.zero()
    for m, c in poly.items():
        term = ring.from_int(c)
        for idx, e in enumerate(m):
            if e:
                term = ring.mul(term, tables[idx][e])
        acc = ring.add(acc, term)
    return acc


def _pow_chain(e: int, p: int) -> set[int]:
    """Exponents worth materializing on the way to e (p-adic ladder)."""
    out = set()
    while e > 1:
        out.add(e)
        e = e // p if e % p == 0 else e - 1
    return out


# Teichmuller-digit strategy ---------------------------------------------------

def _to_digits(w: WittVec) -> list:
    ring = w.ring
    return [c if i == 0 else _iter_inv_frob(ring, c, i)
            for i, c in enumerate(w.components)]


def _from_digits(ring: CoeffRing, digits: Sequence) -> WittVec:
    return WittVec(ring, [d if i == 0 else _iter_frob(ring, d, i)
                          for i, d in enumerate(digits)])


def _iter_frob(ring, a, k):
    for _ in range(k):
        a = ring.pth_power(a)
    return a


def _iter_inv_frob(ring, a, k):
    for _ in range(k):
        a = ring.inv_frobenius(a)
    return a


def _teich_pair_digits(ring: CoeffRing, a, b, length: int) -> list:
    """Teichmuller digits of [a] + [b] in W_length."""
    if ring.is_zero(a):
        return [b] + [ring.zero()] * (length - 1)
    if ring.is_zero(b):
        return [a] + [ring.zero()] * (length - 1)
    carries = _carry_polys(ring.p, length)
    out = [ring.add(a, b)]
    if length == 1:
        return out
    ta: dict[int, object] = {1: a}
    tb: dict[int, object] = {1: b}
    for table, base in ((ta, a), (tb, b)):
        for e in range(2, ring.p ** (length - 1) + 1):
            if e % ring.p == 0:
                table[e] = ring.pth_power(table[e // ring.p])
            else:
                table[e] = ring.mul(table[e - 1], base)
    for k in range(1, length):
        acc = ring.zero()
        for (i, j), c in carries[k].items():
            term = ring.from_int(c)
            if i:
                term = ring.mul(term, ta[i])
            if j:
                term = ring.mul(term, tb[j])
            acc = ring.add(acc, term)
        out.append(_iter_inv_frob(ring, acc, k))
    return out


def _digit_sum(ring: CoeffRing, n: int, pending: list[list]) -> list:
    """Combine per-position digit contributions with carry propagation."""
    out = []
    for k in range(n):
        terms = [t for t in pending[k] if not ring.is_zero(t)]
        while len(terms) > 1:
            a = terms.pop()
            b = terms.pop()
            digs = _teich_pair_digits(ring, a, b, n - k)
            terms.append(digs[0])
            for j in range(1, n - k):
                if not ring.is_zero(digs[j]):
                    pending[k + j].append(digs[j])
        out.append(terms[0] if terms else ring.zero())
    return out


def _teich_add(u: WittVec, v: WittVec) -> WittVec:
    ring = u.ring
    n = u.n
    du, dv = _to_digits(u), _to_digits(v)
    pending: list[list] = [[du[k], dv[k]] for k in range(n)]
    return _from_digits(ring, _digit_sum(ring, n, pending))


def _teich_mul(u: WittVec, v: WittVec) -> WittVec:
    ring = u.ring
    n = u.n
    du, dv = _to_digits(u), _to_digits(v)
    pending: list[list] = [[] for _ in range(n)]
    for i, a in enumerate(du):
        if ring.is_zero(a):
            continue
        for j, b in enumerate(dv):
            if i + j >= n or ring.is_zero(b):
                continue
            pending[i + j].append(ring.mul(a, b))
    return _from_digits(ring, _digit_sum(ring, n, pending))


def _teich_neg(u: WittVec) -> WittVec:
    ring = u.ring
    n = u.n
    du = _to_digits(u)
    if ring.p != 2:
        return _from_digits(ring, [ring.neg(d) for d in du])
    # -1 = (1,1,1,...) in W(R) for char 2: -[c]2^k = sum_j [c]2^(k+j)
    pending: list[list] = [[] for _ in range(n)]
    for k, d in enumerate(du):
        if ring.is_zero(d):
            continue
        for j in range(k, n):
            pending[j].append(d)
    return _from_digits(ring, _digit_sum(ring, n, pending))


# -- public arithmetic ---------------------------------------------------------

def wadd(u: WittVec, v: WittVec, strategy: str | None = None) -> WittVec:
    """Witt sum (length = min of operand lengths)."""
    u, v = _common(u, v)
    ring = u.ring
    strategy = strategy or _default_strategy(ring)
    if strategy == "ghost":
        gu, gv = ghost(u), ghost(v)
        return from_ghost(ring, [ring.add(a, b) for a, b in zip(gu, gv)])
    if strategy == "teich":
        return _teich_add(u, v)
    polys = gen_witt_polys(ring.p, u.n)
    args = lambda k: u.components[:k + 1] + v.components[:k + 1]
    return WittVec(ring, [_eval_poly(polys.S[k], args(k), ring) for k in range(u.n)])


def wmul(u: WittVec, v: WittVec, strategy: str | None = None) -> WittVec:
    """Witt product (length = min of operand lengths)."""
    u, v = _common(u, v)
    ring = u.ring
    strategy = strategy or _default_strategy(ring)
    if strategy == "ghost":
        gu, gv = ghost(u), ghost(v)
        return from_ghost(ring, [ring.mul(a, b) for a, b in zip(gu, gv)])
    if strategy == "teich":
        return _teich_mul(u, v)
    polys = gen_witt_polys(ring.p, u.n)
    args = lambda k: u.components[:k + 1] + v.components[:k + 1]
    return WittVec(ring, [_eval_poly(polys.P[k], args(k), ring) for k in range(u.n)])


def wneg(u: WittVec, strategy: str | None = None) -> WittVec:
    ring = u.ring
    strategy = strategy or _default_strategy(ring)
    if strategy == "ghost":
        return from_ghost(ring, [ring.neg(a) for a in ghost(u)])
    if strategy == "teich":
        return _teich_neg(u)
    polys = gen_witt_polys(ring.p, u.n)
    return WittVec(ring, [_eval_poly(polys.N[k], u.components[:k + 1], ring)
                          for k in range(u.n)])


def wsub(u: WittVec, v: WittVec, strategy: str | None = None) -> WittVec:
    return wadd(u, wneg(v, strategy), strategy)


def witt_mul_p(w: WittVec) -> WittVec:
    """p * w over a perfect char-p ring: (0, w_0^p, ..., w_{n-2}^p)."""
    ring = w.ring
    if not ring.perfect:
        raise UnsupportedRingError("witt_mul_p is the char-p Verschiebung-Frobenius composite")
    comps = [ring.zero()] + [ring.pth_power(c) for c in w.components[:-1]]
    return WittVec(ring, comps)


def witt_div_p(w: WittVec) -> WittVec:
    """Exact division by p over a perfect char-p ring (w_0 must vanish);
    shortens the vector by one."""
    ring = w.ring
    if not ring.perfect:
        raise UnsupportedRingError("witt_div_p needs a perfect char-p ring")
    if not ring.is_zero(w.components[0]):
        raise ContractError("not divisible by p: first coordinate is nonzero")
    if w.n < 2:
        raise ContractError("vector too short to divide by p")
    return WittVec(ring, [ring.inv_frobenius(c) for c in w.components[1:]])


def teich_scale(w: WittVec, a) -> WittVec:
    """[a] * w = (a w_0, a^p w_1, a^(p^2) w_2, ...)."""
    ring = w.ring
    comps = []
    power = a
    for i, c in enumerate(w.components):
        if i:
            power = _iter_frob(ring, power, 1) if ring.perfect else ring.pow(power, ring.p)
        comps.append(ring.mul(power, c))
    return WittVec(ring, comps)


def witt_inv(w: WittVec) -> WittVec:
    """Inverse of a Witt unit (w_0 a unit) by Newton iteration."""
    ring = w.ring
    n = w.n
    v = teichmuller(ring, ring.inverse(w.components[0]), n)
    two = wadd(witt_one(ring, n), witt_one(ring, n))
    steps = max(1, n.bit_length() + 1)
    for _ in range(steps):
        v = wmul(v, wsub(two, wmul(w, v)))
    return v


def teich_expand(w: WittVec) -> list:
    """Teichmuller coefficients (c_i) with w = sum teich(c_i) p^i, computed
    by the subtract-and-divide recursion.  Needs exact inverse Frobenius.

    The i-th step divides precision by p, so over the digit model the c_i
    lose t-adic precision accordingly.
    """
    ring = w.ring
    if not ring.perfect:
        raise UnsupportedRingError("Teichmuller expansion needs a perfect char-p ring")
    out = []
    cur = w
    for _ in range(w.n - 1):
        c = cur.components[0]
        out.append(c)
        cur = witt_div_p(wsub(cur, teichmuller(ring, c, cur.n), "teich"))
    out.append(cur.components[0])
    return out
