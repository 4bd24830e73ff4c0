"""Truncated power series over V/pi^M.

A `Series` is a sparse map from exponent tuples to raw coefficients of a
`CoeffRing`, with a total-degree bound D.  Besides the storage truncation
every series carries a *jet*: a monomial ideal W of V[[z]] such that the
stored data determines the true series modulo W.  Ring operations keep W
correct, which lets the colength engine certify results without guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .coeff import Coeff, CoeffRing
from .errors import OrderViolation, ShapeMismatch


# ---------------------------------------------------------------- variables

@dataclass(frozen=True)
class VarSet:
    n: int
    has_y: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one x-variable")

    @property
    def size(self) -> int:
        return self.n + (1 if self.has_y else 0)

    @property
    def names(self) -> tuple[str, ...]:
        xs = tuple(f"x{i + 1}" for i in range(self.n))
        return xs + ("y",) if self.has_y else xs

    @property
    def y(self) -> int:
        if not self.has_y:
            raise ValueError("no y variable")
        return self.n

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.size:
                raise ValueError(f"variable index {name} out of range")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None

    def with_y(self) -> "VarSet":
        return VarSet(self.n, True)

    def without_y(self) -> "VarSet":
        return VarSet(self.n, False)


# ---------------------------------------------------------------- jets

class Jet:
    """Monomial ideal W: pi^a z^b lies in W iff a >= prec(b)."""

    def prec(self, beta: tuple[int, ...]) -> int:
        raise NotImplementedError

    def low_order(self) -> int:
        """Some K with W inside M^K (M the maximal ideal)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Box(Jet):
    D: int
    M: int

    def prec(self, beta):
        return self.M if sum(beta) <= self.D else 0

    def low_order(self):
        return max(0, min(self.M, self.D + 1))


@dataclass(frozen=True)
class Adic(Jet):
    K: int

    def prec(self, beta):
        return max(self.K - sum(beta), 0)

    def low_order(self):
        return max(self.K, 0)


@dataclass(frozen=True)
class Lifted(Jet):
    """Ambiguity of a tilde lift: sum over b of <pi, y>^{prec_base(b)} x^b."""

    base: Jet
    y: int

    def prec(self, beta):
        k = beta[self.y]
        bx = beta[:self.y] + beta[self.y + 1:]
        return max(self.base.prec(bx) - k, 0)

    def low_order(self):
        return self.base.low_order()


@dataclass(frozen=True)
class Projected(Jet):
    """Image of a jet in the y-variable under y -> pi."""

    base: Jet
    y: int

    def prec(self, beta):
        best = None
        k = 0
        while True:
            full = beta[:self.y] + (k,) + beta[self.y:]
            val = self.base.prec(full) + k
            best = val if best is None else min(best, val)
            if k >= best:
                return best
            k += 1

    def low_order(self):
        return self.base.low_order()


@dataclass(frozen=True)
class Shifted(Jet):
    """Jet of a partial derivative in variable `var`."""

    base: Jet
    var: int

    def prec(self, beta):
        b = list(beta)
        b[self.var] += 1
        return self.base.prec(tuple(b))

    def low_order(self):
        return max(self.base.low_order() - 1, 0)


@dataclass(frozen=True)
class DeltaJet(Jet):
    """Jet of delta(f) for f known modulo Box(D, M).

    Errors from the degree cut come from delta(x^b), |b| > D, whose terms
    p^{j-1} x^{p(|b|-j)} sit in pi^{D - t} <x>^{p t}.
    """

    D: int
    M: int
    p: int

    def prec(self, beta):
        d = sum(beta)
        if d > self.D:
            return 0
        return max(0, min(self.M - 1, self.D - d // self.p))

    def low_order(self):
        return max(0, min(self.M - 1, self.D))


@dataclass(frozen=True)
class Meet(Jet):
    """Sum of ideals (pointwise minimum of prec)."""

    parts: tuple

    def prec(self, beta):
        return min(j.prec(beta) for j in self.parts)

    def low_order(self):
        return min(j.low_order() for j in self.parts)


def meet(*jets: Jet) -> Jet:
    flat = []
    for j in jets:
        for part in (j.parts if isinstance(j, Meet) else (j,)):
            if part not in flat:
                flat.append(part)
    # a Box with larger D and M adds nothing to a smaller one
    boxes = [j for j in flat if isinstance(j, Box)]
    dropped = {b for b in boxes for a in boxes if a != b and a.D <= b.D and a.M <= b.M}
    flat = [j for j in flat if j not in dropped]
    return flat[0] if len(flat) == 1 else Meet(tuple(flat))


# ---------------------------------------------------------------- series

def deglex_key(alpha: tuple[int, ...]):
    return (sum(alpha), tuple(-a for a in alpha))


class Series:
    """Truncated power series.  Immutable after construction."""

    __slots__ = ("ring", "vars", "D", "terms", "jet")

    def __init__(self, ring: CoeffRing, vars: VarSet, D: int, terms: dict | None = None,
                 jet: Jet | None = None):
        self.ring = ring
        self.vars = vars
        self.D = D
        clean = {}
        for a, c in (terms or {}).items():
            if len(a) != vars.size:
                raise ShapeMismatch(f"exponent {a} does not match {vars.names}")
            if sum(a) <= D and not ring.is_zero(c):
                clean[a] = c
        self.terms = clean
        self.jet = jet if jet is not None else Box(D, ring.M)

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, ring, vars, D):
        return cls(ring, vars, D)

    @classmethod
    def const(cls, ring, vars, D, value) -> "Series":
        c = Coeff.of(ring, value).raw
        return cls(ring, vars, D, {(0,) * vars.size: c})

    @classmethod
    def var(cls, ring, vars, D, name) -> "Series":
        i = vars.index(name)
        a = tuple(1 if j == i else 0 for j in range(vars.size))
        return cls(ring, vars, D, {a: ring.one()})

    @classmethod
    def monomial(cls, ring, vars, D, alpha, value=1) -> "Series":
        return cls(ring, vars, D, {tuple(alpha): Coeff.of(ring, value).raw})

    def like(self, terms: dict, jet: Jet | None = None) -> "Series":
        return Series(self.ring, self.vars, self.D, terms, jet if jet is not None else self.jet)

    # -- basic queries --------------------------------------------------

    @property
    def M(self) -> int:
        return self.ring.M

    @property
    def spec(self):
        return self.ring.spec

    def items(self):
        """Terms in deg-lex order."""
        for a in sorted(self.terms, key=deglex_key):
            yield a, self.terms[a]

    def coeff(self, alpha) -> Coeff:
        return Coeff(self.ring, self.terms.get(tuple(alpha), self.ring.zero()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def order(self) -> int | None:
        """ord over the maximal ideal <pi, z>; None for the zero series."""
        best = None
        for a, c in self.terms.items():
            o = sum(a) + self.ring.valuation(c)
            if best is None or o < best:
                best = o
        return best

    def x_order(self) -> int | None:
        """Lowest total degree of a stored term."""
        return min((sum(a) for a in self.terms), default=None)

    def constant(self) -> Coeff:
        return self.coeff((0,) * self.vars.size)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.ring is other.ring and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, self.ring.M, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Series({self.to_str()}; D={self.D}, M={self.M})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.vars.names
        out = []
        for a, c in self.items():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, a) if k)
            cs = self.ring.to_str(c)
            if not mono:
                out.append(cs)
            elif cs == "1":
                out.append(mono)
            elif cs == "-1":
                out.append("-" + mono)
            else:
                out.append(f"{cs}*{mono}")
        s = out[0]
        for t in out[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    # -- shape ------------------------------------------------------------

    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise TypeError("expected Series")
        if self.vars != other.vars or self.D != other.D or self.ring is not other.ring:
            raise ShapeMismatch(
                f"shape ({self.vars.names}, D={self.D}, M={self.M}) vs "
                f"({other.vars.names}, D={other.D}, M={other.M})")

    def at(self, D: int | None = None, M: int | None = None) -> "Series":
        """Change the truncation.  Raising M lifts canonical representatives;
        the jet still records what is actually known."""
        D = self.D if D is None else D
        M = self.M if M is None else M
        if D == self.D and M == self.M:
            return self
        ring = self.ring.with_precision(M)
        terms = {a: self.ring.lift(c, M) for a, c in self.terms.items() if sum(a) <= D}
        return Series(ring, self.vars, D, terms, meet(self.jet, Box(D, M)))

    def exact_at(self, D: int | None = None, M: int | None = None) -> "Series":
        """Like `at`, but declares the stored terms exact (a polynomial input)."""
        s = self.at(D, M)
        return Series(s.ring, s.vars, s.D, s.terms)

    def trim(self) -> "Series":
        """Drop terms that lie inside the jet."""
        keep = {}
        for a, c in self.terms.items():
            if self.ring.valuation(c) < self.jet.prec(a):
                keep[a] = c
        return self.like(keep)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, (int, Coeff)):
            return Series.const(self.ring, self.vars, self.D, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ring = self.ring
        out = dict(self.terms)
        for a, c in o.terms.items():
            out[a] = ring.add(out[a], c) if a in out else c
        return self.like(out, meet(self.jet, o.jet))

    __radd__ = __add__

    def __neg__(self):
        return self.like({a: self.ring.neg(c) for a, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def scale(self, c) -> "Series":
        c = Coeff.of(self.ring, c).raw
        ring = self.ring
        return self.like({a: ring.mul(v, c) for a, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Coeff)):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ring = self.ring
        D = self.D
        out: dict = {}
        big = sorted(o.terms.items(), key=lambda t: sum(t[0]))
        for a, c in self.terms.items():
            da = sum(a)
            for b, d in big:
                if da + sum(b) > D:
                    break
                k = tuple(x + y for x, y in zip(a, b))
                v = ring.mul(c, d)
                out[k] = ring.add(out[k], v) if k in out else v
        return self.like(out, meet(self.jet, o.jet))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Series":
        if k < 0:
            raise ValueError("negative power")
        result = self.like({(0,) * self.vars.size: self.ring.one()})
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coeffs(self, fn) -> "Series":
        return self.like({a: fn(c) for a, c in self.terms.items()})

    def partial(self, v) -> "Series":
        """Formal derivative; the degree bound drops by one."""
        i = self.vars.index(v)
        ring = self.ring
        out = {}
        for a, c in self.terms.items():
            if a[i]:
                b = a[:i] + (a[i] - 1,) + a[i + 1:]
                out[b] = ring.scale_int(c, a[i])
        return Series(ring, self.vars, self.D - 1, out, meet(Shifted(self.jet, i), Box(self.D - 1, ring.M)))

    def reduce_mod_pi(self) -> dict:
        """Residue-field image as {exponent: int mod p}."""
        out = {}
        for a, c in self.terms.items():
            r = self.ring.residue(c)
            if r:
                out[a] = r
        return out


# ---------------------------------------------------------------- lift / projection

def tilde_lift(f: Series) -> Series:
    """u pi^n x^a  ->  u y^n x^a."""
    if f.vars.has_y:
        raise ValueError("tilde_lift expects a series in the x-variables only")
    vars_y = f.vars.with_y()
    ring = f.ring
    out = {}
    top = 0
    for a, c in f.terms.items():
        v, u = ring.decompose(c)
        k = a + (v,)
        out[k] = ring.with_precision(ring.M - v).lift(u, ring.M)
        top = max(top, sum(k))
    D = max(f.D + ring.M - 1, top)
    return Series(ring, vars_y, D, out, Lifted(f.jet, vars_y.y))


def project_pr(F: Series) -> Series:
    """y -> pi."""
    if not F.vars.has_y:
        raise ValueError("project_pr expects a series with y")
    ring = F.ring
    yi = F.vars.y
    out: dict = {}
    for a, c in F.terms.items():
        k = a[yi]
        b = a[:yi] + a[yi + 1:]
        v = ring.mul(c, ring.pi_pow(k))
        out[b] = ring.add(out[b], v) if b in out else v
    return Series(ring, F.vars.without_y(), F.D, out, Projected(F.jet, yi))


def substitute(f: Series, assignment: dict) -> Series:
    """f(phi(z)) where phi sends each variable to a series in the maximal ideal.

    Variables missing from `assignment` are left alone.
    """
    vars = f.vars
    images = []
    for i, name in enumerate(vars.names):
        g = assignment.get(name, assignment.get(i))
        if g is None:
            g = Series.var(f.ring, vars, f.D, i)
        else:
            f._check(g)
            o = g.order()
            if o is not None and o < 1:
                raise OrderViolation(f"image of {name} is not in the maximal ideal")
        images.append(g)
    low = f.jet.low_order()
    jet = meet(Adic(low), *[g.jet for g in images])
    D_eff = min(f.D, max(low - 1, 0))
    imgs = [g.at(D_eff) for g in images]
    ring = f.ring
    one = Series(ring, vars, D_eff, {(0,) * vars.size: ring.one()})
    powers: list[list[Series]] = [[one] for _ in imgs]
    out = Series(ring, vars, D_eff)
    for a, c in f.terms.items():
        term = Series(ring, vars, D_eff, {(0,) * vars.size: c})
        for i, k in enumerate(a):
            if k:
                pw = powers[i]
                while len(pw) <= k:
                    pw.append(pw[-1] * imgs[i])
                term = term * pw[k]
            if not term:
                break
        out = out + term
    res = Series(ring, vars, f.D, out.terms, meet(jet, Box(f.D, ring.M)))
    return res.trim()


def in_fraktur_a(f: Series, r: int) -> bool:
    """Every term u pi^j (degree d monomial) has d >= 1 and j + d >= r."""
    for a, c in f.terms.items():
        d = sum(a)
        if d < 1 or d + f.ring.valuation(c) < r:
            return False
    return True


def ord_I(f: Series, I, k_max: int):
    from .localalg import ord_I as _ord_I
    return _ord_I(f, I, k_max)


def monomials_upto(nvars: int, D: int) -> list[tuple[int, ...]]:
    """All exponents of total degree <= D in deg-lex order."""
    out = []
    for d in range(D + 1):
        out.extend(_compositions(d, nvars))
    return sorted(out, key=deglex_key)


def _compositions(d: int, k: int) -> Iterable[tuple[int, ...]]:
    if k == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, k - 1):
            yield (first,) + rest


class Polynomial:
    """Exact polynomial over Z[pi]; coefficients are lists [c_0, c_1, ...]
    meaning sum c_i pi^i.  Can be realized as a Series at any (D, M)."""

    def __init__(self, spec, vars: VarSet, terms: dict):
        self.spec = spec
        self.vars = vars
        clean = {}
        for a, c in terms.items():
            c = [int(x) for x in c]
            while c and c[-1] == 0:
                c.pop()
            if c:
                clean[tuple(a)] = c
        self.terms = clean

    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def series(self, D: int, M: int) -> Series:
        from .coeff import CoeffRing
        ring = CoeffRing(self.spec, M)
        out = {}
        for a, c in self.terms.items():
            if sum(a) > D:
                continue
            if self.spec.ramified:
                out[a] = ring.reduce(c)
            else:
                out[a] = ring.reduce(sum(x * self.spec.p ** i for i, x in enumerate(c)))
        return Series(ring, self.vars, D, out)

    def __repr__(self):
        return f"Polynomial({self.series(self.degree(), 6).to_str()})"


@dataclass
class Ideal:
    """Generator list plus ambient variables (IdealPresentation)."""

    gens: list
    vars: VarSet

    def __init__(self, gens: Iterable[Series], vars: VarSet | None = None):
        self.gens = [g for g in gens]
        if not self.gens and vars is None:
            raise ValueError("empty ideal needs explicit vars")
        self.vars = vars if vars is not None else self.gens[0].vars
        for g in self.gens:
            if g.vars != self.vars:
                raise ShapeMismatch("generators live in different rings")
        specs = {g.ring.spec for g in self.gens}
        if len(specs) > 1:
            raise ShapeMismatch("generators over different DVRs")

    @property
    def spec(self):
        return self.gens[0].ring.spec

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.gens + other.gens, self.vars)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)


def power_generators(gens: list[Series], k: int) -> list[Series]:
    """Products of k generators (with repetition)."""
    from itertools import combinations_with_replacement
    if k == 0:
        g = gens[0]
        return [Series(g.ring, g.vars, g.D, {(0,) * g.vars.size: g.ring.one()})]
    out = []
    for combo in combinations_with_replacement(range(len(gens)), k):
        t = gens[combo[0]]
        for i in combo[1:]:
            t = t * gens[i]
        out.append(t)
    return out


__all__ = [
    "VarSet", "Series", "Polynomial", "Ideal", "Jet", "Box", "Adic", "Lifted", "Projected", "Shifted",
    "DeltaJet", "Meet", "meet", "tilde_lift", "project_pr", "substitute", "in_fraktur_a",
    "ord_I", "monomials_upto", "power_generators", "deglex_key",
]
