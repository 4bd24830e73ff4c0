"""Arithmetic in V/pi^M for a complete DVR V with residue field F_p.

Two models are supported:

* unramified, V = Z_p and pi = p; elements of V/p^M are ints in [0, p^M);
* ramified, V = Z_p[t]/E(t) with E monic Eisenstein of degree e and pi = t;
  an element is a tuple (c_0, ..., c_{e-1}) meaning sum c_i pi^i, with c_i
  reduced mod p^ceil((M - i)/e).  That lattice is exactly pi^M V.

`CoeffRing` works on these raw values; `Coeff` is the immutable public wrapper.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import (NotASquare, PrecisionExhausted, RamifiedUnsupported,
                     ZeroAtPrecision)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class DvrSpec:
    """p and, for the ramified model, the non-leading coefficients a_0..a_{e-1}
    of the monic Eisenstein polynomial E(t) = t^e + a_{e-1} t^{e-1} + ... + a_0."""

    p: int
    eisenstein: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.eisenstein is not None:
            a = tuple(int(c) for c in self.eisenstein)
            object.__setattr__(self, "eisenstein", a)
            if len(a) < 2:
                raise ValueError("Eisenstein polynomial must have degree >= 2")
            if a[0] % self.p or a[0] % (self.p * self.p) == 0:
                raise ValueError("constant term of E must have p-valuation 1")
            if any(c % self.p for c in a):
                raise ValueError("non-leading coefficients of E must be divisible by p")

    @property
    def e(self) -> int:
        return 1 if self.eisenstein is None else len(self.eisenstein)

    @property
    def ramified(self) -> bool:
        return self.eisenstein is not None

    def describe(self) -> str:
        if not self.ramified:
            return f"Z_{self.p}"
        terms = [f"t^{self.e}"]
        for i in range(self.e - 1, -1, -1):
            c = self.eisenstein[i]
            if c:
                mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                mag = abs(c)
                body = f"{mag}*{mon}" if mon and mag != 1 else (mon or str(mag))
                terms.append(("- " if c < 0 else "+ ") + body)
        return f"Z_{self.p}[t]/({' '.join(terms)})"


class CoeffRing:
    """V/pi^M.  Instances are cached, so `is` and `==` agree."""

    def __new__(cls, spec: DvrSpec, M: int):
        return _ring(spec, M)

    @classmethod
    def _build(cls, spec: DvrSpec, M: int) -> "CoeffRing":
        if M < 1:
            raise PrecisionExhausted(f"precision {M} < 1")
        self = object.__new__(cls)
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.M = M
        # exponents k_i with coordinate i living in Z/p^k_i
        self.kexp = tuple(max(0, -(-(M - i) // self.e)) for i in range(self.e))
        self.mods = tuple(self.p ** k for k in self.kexp)
        self.top = self.p ** self.kexp[0]
        return self

    def __repr__(self):
        return f"CoeffRing({self.spec.describe()}, M={self.M})"

    def __reduce__(self):
        return (CoeffRing, (self.spec, self.M))

    def with_precision(self, M: int) -> "CoeffRing":
        return CoeffRing(self.spec, M)

    # -- construction ----------------------------------------------------

    def zero(self):
        return 0 if self.e == 1 else (0,) * self.e

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.e == 1:
            return n % self.top
        return self.reduce([n] + [0] * (self.e - 1))

    def from_coords(self, coords):
        if self.e == 1:
            return int(coords[0]) % self.top
        return self.reduce(list(coords))

    def pi(self):
        if self.e == 1:
            return self.p % self.top
        return self.reduce([0, 1] + [0] * (self.e - 2))

    def pi_pow(self, k: int):
        return self.pow(self.pi(), k)

    def reduce(self, c):
        """Normalise a raw value (int or coordinate list, any length)."""
        if self.e == 1:
            return int(c) % self.top
        c = [int(x) for x in c]
        a = self.spec.eisenstein
        e = self.e
        for k in range(len(c) - 1, e - 1, -1):
            t = c[k]
            if t:
                c[k] = 0
                for j in range(e):
                    c[k - e + j] -= t * a[j]
        c = c[:e] + [0] * (e - len(c))
        return tuple(x % m for x, m in zip(c, self.mods))

    def coords(self, x) -> list[int]:
        return [x] if self.e == 1 else list(x)

    # -- arithmetic ------------------------------------------------------

    def add(self, x, y):
        if self.e == 1:
            return (x + y) % self.top
        return tuple((a + b) % m for a, b, m in zip(x, y, self.mods))

    def sub(self, x, y):
        if self.e == 1:
            return (x - y) % self.top
        return tuple((a - b) % m for a, b, m in zip(x, y, self.mods))

    def neg(self, x):
        if self.e == 1:
            return (-x) % self.top
        return tuple((-a) % m for a, m in zip(x, self.mods))

    def mul(self, x, y):
        if self.e == 1:
            return (x * y) % self.top
        e = self.e
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        prod[i + j] += a * b
        return self.reduce(prod)

    def scale_int(self, x, n: int):
        if self.e == 1:
            return (x * n) % self.top
        return tuple((a * n) % m for a, m in zip(x, self.mods))

    def pow(self, x, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.one()
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def is_zero(self, x) -> bool:
        return x == 0 if self.e == 1 else not any(x)

    def residue(self, x) -> int:
        return (x if self.e == 1 else x[0]) % self.p

    def is_unit(self, x) -> bool:
        return self.residue(x) != 0

    def valuation(self, x) -> int | None:
        """pi-adic valuation, or None for zero at this precision."""
        if self.e == 1:
            return None if x == 0 else _vp(x, self.p)
        best = None
        for i, c in enumerate(x):
            if c:
                v = self.e * _vp(c, self.p) + i
                if best is None or v < best:
                    best = v
        return best

    def inverse(self, x):
        """Inverse of a unit."""
        if not self.is_unit(x):
            raise ZeroDivisionError("not a unit")
        if self.e == 1:
            return pow(x, -1, self.top)
        # Newton: w <- w (2 - x w); the error squares each step
        w = self.from_int(pow(x[0] % self.p, -1, self.p))
        two = self.from_int(2)
        for _ in range(max(1, self.M.bit_length() + 1)):
            w = self.mul(w, self.sub(two, self.mul(x, w)))
        return w

    def div_pi(self, x):
        """x / pi for x in pi V; the result lives at precision M-1."""
        lower = self.with_precision(self.M - 1) if self.M > 1 else None
        if self.residue(x):
            raise ValueError("not divisible by pi")
        if lower is None:
            raise PrecisionExhausted("dividing by pi at precision 1")
        if self.e == 1:
            return lower.reduce(x // self.p)
        a = self.spec.eisenstein
        e = self.e
        # 1/pi = -(pi^{e-1} + a_{e-1} pi^{e-2} + ... + a_1) / a_0
        w = [a[j + 1] for j in range(e - 1)] + [1]
        prod = [0] * (2 * e - 1)
        for i, c in enumerate(x):
            for j, d in enumerate(w):
                prod[i + j] += c * d
        exact = _exact_reduce(prod, a, e)
        p = self.p
        assert all(c % p == 0 for c in exact)
        u0 = a[0] // p
        big = p ** (lower.kexp[0] + 1)
        inv = pow(u0 % big, -1, big)
        return lower.reduce([(-(c // p) * inv) for c in exact])

    def div_p(self, x):
        """x / p for x in pV (the integer p, not pi); loses e units of pi-precision."""
        if self.e == 1:
            return self.div_pi(x)
        y = x
        ring = self
        for _ in range(self.e):
            y = ring.div_pi(y)
            ring = ring.with_precision(ring.M - 1)
        # y = x / pi^e and pi^e = p * w, so x/p = y * w
        w = ring.div_p_unit()
        return ring.mul(y, w)

    def div_p_unit(self):
        """The unit w with pi^e = p * w."""
        a = self.spec.eisenstein
        # pi^e = -(a_0 + a_1 pi + ...) = p * (-(a_0 + ...)/p)
        return self.reduce([-(c // self.p) for c in a])

    def decompose(self, x):
        """(v, u) with x = u pi^v; u lives at precision M - v."""
        v = self.valuation(x)
        if v is None:
            return None
        ring = self
        y = x
        for _ in range(v):
            y = ring.div_pi(y)
            ring = ring.with_precision(ring.M - 1)
        return v, y

    def lift(self, x, M: int):
        """Carry x to precision M: reduction if M <= self.M, else the
        canonical lift that keeps the stored coordinates."""
        return CoeffRing(self.spec, M).from_coords(self.coords(x))

    # -- sampling / display ---------------------------------------------

    def random(self, rng: random.Random):
        if self.e == 1:
            return rng.randrange(self.top)
        return tuple(rng.randrange(m) for m in self.mods)

    def random_unit(self, rng: random.Random):
        while True:
            x = self.random(rng)
            if self.is_unit(x):
                return x

    def balanced(self, c: int, m: int) -> int:
        return c - m if c > m // 2 else c

    def to_str(self, x) -> str:
        if self.e == 1:
            return str(self.balanced(x, self.top))
        parts = []
        for i, (c, m) in enumerate(zip(x, self.mods)):
            c = self.balanced(c, m)
            if c == 0:
                continue
            mon = "" if i == 0 else ("pi" if i == 1 else f"pi^{i}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return f"({out})" if len(parts) > 1 else out


def _exact_reduce(c, a, e):
    c = list(c)
    for k in range(len(c) - 1, e - 1, -1):
        t = c[k]
        if t:
            c[k] = 0
            for j in range(e):
                c[k - e + j] -= t * a[j]
    return c[:e] + [0] * (e - len(c))


@lru_cache(maxsize=None)
def _ring(spec: DvrSpec, M: int) -> CoeffRing:
    return CoeffRing._build(spec, M)


class Coeff:
    """Immutable element of V/pi^M."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring: CoeffRing, raw):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, *_):
        raise AttributeError("Coeff is immutable")

    @classmethod
    def of(cls, ring: CoeffRing, value) -> "Coeff":
        if isinstance(value, Coeff):
            return value.to(ring.M)
        if isinstance(value, int):
            return cls(ring, ring.from_int(value))
        return cls(ring, ring.from_coords(value))

    def to(self, M: int) -> "Coeff":
        if M == self.ring.M:
            return self
        return Coeff(self.ring.with_precision(M), self.ring.lift(self.raw, M))

    def _other(self, other) -> "Coeff":
        if isinstance(other, Coeff):
            if other.ring is not self.ring:
                raise ValueError("mismatched coefficient rings")
            return other
        if isinstance(other, int):
            return Coeff(self.ring, self.ring.from_int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Coeff(self.ring, self.ring.add(self.raw, o.raw))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Coeff(self.ring, self.ring.sub(self.raw, o.raw))

    def __rsub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Coeff(self.ring, self.ring.sub(o.raw, self.raw))

    def __neg__(self):
        return Coeff(self.ring, self.ring.neg(self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else Coeff(self.ring, self.ring.mul(self.raw, o.raw))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return Coeff(self.ring, self.ring.pow(self.raw, k))

    def __eq__(self, other):
        if isinstance(other, int):
            other = Coeff(self.ring, self.ring.from_int(other))
        if not isinstance(other, Coeff):
            return NotImplemented
        return self.ring is other.ring and self.raw == other.raw

    def __hash__(self):
        return hash((self.ring.spec, self.ring.M, self.raw))

    def __repr__(self):
        return self.ring.to_str(self.raw)

    @property
    def valuation(self) -> int | None:
        return self.ring.valuation(self.raw)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.raw)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.raw)

    def residue(self) -> int:
        return self.ring.residue(self.raw)

    def inverse(self) -> "Coeff":
        return Coeff(self.ring, self.ring.inverse(self.raw))


def unit_decompose(a: Coeff) -> tuple[int, Coeff] | ZeroAtPrecision:
    """a = unit * pi^v; the unit is returned at precision M - v."""
    res = a.ring.decompose(a.raw)
    if res is None:
        return ZeroAtPrecision(a.ring.M)
    v, u = res
    return v, Coeff(a.ring.with_precision(a.ring.M - v), u)


def frob(a: Coeff) -> Coeff:
    # the Frobenius lift on Z_p is the identity
    if a.ring.spec.ramified:
        raise RamifiedUnsupported("Frobenius lift only for the unramified model")
    return a


def hensel_sqrt(a: Coeff) -> Coeff | NotASquare:
    """Square root whose residue lies in 1..(p-1)/2."""
    ring = a.ring
    p = ring.p
    if p == 2:
        raise ValueError("p = 2 not supported")
    if not a.is_unit():
        raise ValueError("hensel_sqrt needs a unit")
    r = a.residue()
    root = next((b for b in range(1, (p - 1) // 2 + 1) if b * b % p == r), None)
    if root is None:
        return NotASquare(r, p)
    b = ring.from_int(root)
    half = ring.inverse(ring.from_int(2))
    for _ in range(ring.M.bit_length() + 2):
        b = ring.mul(half, ring.add(b, ring.mul(a.raw, ring.inverse(b))))
    return Coeff(ring, b)
