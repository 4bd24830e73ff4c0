"""Colength and membership for ideals of V[[z]].

The engine never trusts a truncation blindly.  It maintains a monomial ideal
Q (in pi and z) and works in the finite module R/S with S = M*Q, where every
generator is known exactly because its jet lies inside S.  Once every
minimal generator of Q lies in I + S, Nakayama gives Q inside I, hence
S inside I, and the echelon of (I + S)/S yields the exact length of R/I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .coeff import CoeffRing
from .errors import AtLeast, CombinatorialBlowup, NotFiniteUpToBounds, NotFoundUpTo
from .series import Ideal, Series, deglex_key, meet, monomials_upto

DEFAULT_NMAX = 16
POWER_CAP = 4000


# ---------------------------------------------------------------- monomial ideals

def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _minus(b, i):
    return b[:i] + (b[i] - 1,) + b[i + 1:]


def _plus(b, i):
    return b[:i] + (b[i] + 1,) + b[i + 1:]


class Staircase:
    """Monomial ideal of V[[z]] containing a power of the maximal ideal.

    `stair` maps z-exponents b to prec(b) > 0, the least j with pi^j z^b
    inside the ideal; exponents not listed have prec 0.
    """

    def __init__(self, nvars: int, stair: dict):
        self.nvars = nvars
        self.stair = {b: v for b, v in stair.items() if v > 0}

    @classmethod
    def maximal(cls, nvars):
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def from_prec(cls, nvars, fn, D):
        return cls(nvars, {b: fn(b) for b in monomials_upto(nvars, D)})

    def prec(self, b) -> int:
        return self.stair.get(b, 0)

    def _border(self):
        out = set(self.stair)
        for b in self.stair:
            for i in range(self.nvars):
                out.add(_plus(b, i))
        return out

    def times_max(self) -> "Staircase":
        new = {}
        for b in self._border():
            v = self.prec(b) + 1
            for i in range(self.nvars):
                if b[i]:
                    v = min(v, self.prec(_minus(b, i)))
            if v > 0:
                new[b] = v
        return Staircase(self.nvars, new)

    def generators(self) -> list:
        """Minimal generators pi^j z^b as pairs (j, b)."""
        out = []
        for b in self._border():
            j = self.prec(b)
            if all(self.prec(_minus(b, i)) > j for i in range(self.nvars) if b[i]):
                out.append((j, b))
        return sorted(out, key=lambda t: (t[0] + sum(t[1]), deglex_key(t[1])))

    def add_generators(self, gens) -> "Staircase":
        new = {}
        for b, v in self.stair.items():
            for j, g in gens:
                if j < v and all(x <= y for x, y in zip(g, b)):
                    v = j
            new[b] = v
        return Staircase(self.nvars, new)

    def colength(self) -> int:
        return sum(self.stair.values())

    def degree(self) -> int:
        """Largest z-degree of a monomial outside the ideal."""
        return max((sum(b) for b in self.stair), default=-1)

    def __len__(self):
        return len(self.stair)


# ---------------------------------------------------------------- linear algebra

class _Coords:
    """Z_p-coordinates of R/S: pairs (b, i) with modulus p^k(b, i)."""

    def __init__(self, S: Staircase, p: int, e: int):
        self.S = S
        self.p = p
        self.e = e
        self.index = {}
        kexp = []
        for b in sorted(S.stair, key=deglex_key):
            P = S.stair[b]
            for i in range(e):
                k = -(-(P - i) // e)
                if k > 0:
                    self.index[(b, i)] = len(kexp)
                    kexp.append(k)
        self.kexp = kexp
        self.kmax = max(kexp, default=0)
        self.big = p ** (2 * self.kmax) >= 2 ** 62
        self.dtype = object if self.big else np.int64
        self.mods = np.array([p ** k for k in kexp], dtype=self.dtype)

    def __len__(self):
        return len(self.kexp)

    def zero(self):
        return np.zeros(len(self), dtype=self.dtype)

    def add_term(self, vec, ring: CoeffRing, b, c):
        P = self.S.prec(b)
        if P <= 0:
            return
        low = ring.lift(c, min(P, ring.M))
        for i, x in enumerate(CoeffRing(ring.spec, min(P, ring.M)).coords(low)):
            r = self.index.get((b, i))
            if r is not None and x:
                vec[r] = (vec[r] + x) % self.mods[r]

    def series(self, f: Series, shift=None, pi_power=0):
        vec = self.zero()
        ring = f.ring
        mult = ring.pi_pow(pi_power) if pi_power else None
        for a, c in f.terms.items():
            b = a if shift is None else tuple(x + y for x, y in zip(a, shift))
            if b not in self.S.stair:
                continue
            if mult is not None:
                c = ring.mul(c, mult)
            self.add_term(vec, ring, b, c)
        return vec

    def monomial(self, spec, j, b):
        vec = self.zero()
        P = self.S.prec(b)
        if j < P:
            ring = CoeffRing(spec, P)
            self.add_term(vec, ring, b, ring.pi_pow(j))
        return vec


def _vp_int(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class Echelon:
    """Triangular generating set of a submodule of prod Z/p^k_r.

    Rows are processed in order; at each row the entry of least valuation
    becomes the pivot and p^(k_r - v) times the pivot is kept, so the
    remaining vectors still generate the part supported on later rows.
    """

    def __init__(self, coords: _Coords, vectors: list):
        self.coords = coords
        p = coords.p
        mods = coords.mods
        self.pivots: dict = {}
        self.vals = []
        G = [v % mods for v in vectors if v.any()]
        G = np.array(G, dtype=coords.dtype) if G else np.zeros((0, len(coords)), dtype=coords.dtype)
        top = p ** coords.kmax
        for r, k in enumerate(coords.kexp):
            m = int(mods[r])
            if G.shape[0]:
                col = G[:, r] % m
                nz = np.nonzero(col)[0]
            else:
                nz = []
            if len(nz) == 0:
                self.vals.append(k)
                continue
            best, bv = None, k
            for idx in nz:
                v = _vp_int(int(col[idx]), p)
                if v < bv:
                    best, bv = int(idx), v
                    if v == 0:
                        break
            P = G[best].copy()
            u = int(P[r]) // p ** bv
            P = (P * pow(u, -1, top)) % mods
            self.pivots[r] = (bv, P)
            self.vals.append(bv)
            rest = np.delete(G, best, axis=0)
            if rest.shape[0]:
                c = (rest[:, r] % m) // p ** bv
                rest = (rest - np.outer(c, P).astype(coords.dtype)) % mods
            extra = (P * p ** (k - bv)) % mods
            rows = [rest] if rest.shape[0] else []
            if extra.any():
                rows.append(extra[None, :])
            G = np.vstack(rows) if rows else np.zeros((0, len(coords)), dtype=coords.dtype)
            if G.shape[0]:
                G = G[G.any(axis=1)]

    def length(self) -> int:
        """Length of the quotient (prod Z/p^k_r) / span."""
        return sum(self.vals)

    def member(self, vec) -> bool:
        coords = self.coords
        p = coords.p
        mods = coords.mods
        h = vec % mods
        for r in range(len(coords)):
            x = int(h[r]) % int(mods[r])
            if not x:
                continue
            piv = self.pivots.get(r)
            if piv is None:
                return False
            v, P = piv
            if x % p ** v:
                return False
            h = (h - (x // p ** v) * P) % mods
        return True


def _columns(coords: _Coords, gens, e: int) -> list:
    cols = []
    for g in gens:
        for gam in coords.S.stair:
            for j in range(e):
                v = coords.series(g, gam, j)
                if v.any():
                    cols.append(v)
    return cols


def _valid(S: Staircase, series) -> bool:
    for f in series:
        jet = f.jet
        for b, v in S.stair.items():
            if v > jet.prec(b):
                return False
    return True


# ---------------------------------------------------------------- results

@dataclass
class LengthResult:
    value: int | Fraction
    certified: bool = True
    N_pi: int | None = None
    D_stable: int | None = None
    precision_events: list = field(default_factory=list)
    rounds: int = 0
    samples: list = field(default_factory=list)

    def scaled(self, den: int) -> "LengthResult":
        return LengthResult(Fraction(self.value, den), self.certified, self.N_pi,
                            self.D_stable, list(self.precision_events), self.rounds,
                            list(self.samples))

    def certificates(self) -> dict:
        return {"N_pi": self.N_pi, "D_stable": self.D_stable}


@dataclass(frozen=True)
class Membership:
    member: bool
    exact: bool
    D: int
    M: int

    def __bool__(self):
        return self.member


class _Quotient:
    """Certified presentation of R/I."""

    def __init__(self, I: Ideal, nmax: int):
        self.I = I
        spec = I.spec
        self.spec = spec
        n = I.vars.size
        e = spec.e
        gens = list(I.gens)
        Q = Staircase.maximal(n)
        rounds = 0
        while True:
            rounds += 1
            S = Q.times_max()
            bounds = {"D": max(g.D for g in gens), "M": max(g.M for g in gens),
                      "N_max": nmax, "rounds": rounds}
            if S.degree() > nmax or S.prec((0,) * n) > nmax + 1:
                raise NotFiniteUpToBounds("no finite-colength certificate within the degree cap",
                                          dict(bounds, cause="cap"))
            if not _valid(S, gens):
                raise NotFiniteUpToBounds("no finite-colength certificate at this precision",
                                          dict(bounds, cause="precision"))
            coords = _Coords(S, spec.p, e)
            ech = Echelon(coords, _columns(coords, gens, e))
            passed, failed = [], []
            for j, b in Q.generators():
                (passed if ech.member(coords.monomial(spec, j, b)) else failed).append((j, b))
            if not failed:
                break
            Q = S.add_generators(passed)
        self.Q, self.S, self.coords, self.ech = Q, S, coords, ech
        self.rounds = rounds
        self.length = ech.length()
        z = (0,) * n
        self.N_pi = next(N for N in range(S.prec(z) + 1)
                         if N >= S.prec(z) or ech.member(coords.monomial(spec, N, z)))
        self.D_stable = S.degree() + 1

    def result(self) -> LengthResult:
        return LengthResult(self.length, True, self.N_pi, self.D_stable, [], self.rounds)

    def member(self, f: Series) -> bool | None:
        """Exact membership, or None when f is not known modulo S."""
        if not _valid(self.S, [f]):
            return None
        return self.ech.member(self.coords.series(f))


def _quotient(I: Ideal, nmax: int) -> _Quotient:
    cache = I.__dict__.setdefault("_quotients", {})
    if nmax not in cache:
        try:
            cache[nmax] = _Quotient(I, nmax)
        except NotFiniteUpToBounds as exc:
            cache[nmax] = exc
    got = cache[nmax]
    if isinstance(got, NotFiniteUpToBounds):
        raise got
    return got


# ---------------------------------------------------------------- public operations

def quotient_length(I: Ideal, nmax: int = DEFAULT_NMAX) -> LengthResult:
    """Length of V[[z]]/I over V, certified, or NotFiniteUpToBounds."""
    return _quotient(I, nmax).result()


def _jet_membership(I: Ideal, f: Series) -> Membership:
    """Decide f in I + W where W is the sum of all the jets involved."""
    series = list(I.gens) + [f]
    W = meet(*[s.jet for s in series])
    D = max(s.D for s in series)
    M = max(s.M for s in series)
    S = Staircase.from_prec(I.vars.size, W.prec, D)
    coords = _Coords(S, I.spec.p, I.spec.e)
    ech = Echelon(coords, _columns(coords, I.gens, I.spec.e))
    return Membership(ech.member(coords.series(f)), False, D, M)


def membership(I: Ideal, f: Series, nmax: int = DEFAULT_NMAX) -> Membership:
    """f in I, exactly when I has certified finite colength and f is known
    well enough; otherwise at the jet level (exact=False)."""
    if f.vars != I.vars:
        raise ValueError("f and I live in different rings")
    try:
        q = _quotient(I, nmax)
    except NotFiniteUpToBounds:
        q = None
    if q is not None:
        got = q.member(f)
        if got is not None:
            return Membership(got, True, q.D_stable, q.S.prec((0,) * I.vars.size))
    return _jet_membership(I, f)


def contains(I: Ideal, f: Series, nmax: int = DEFAULT_NMAX) -> bool:
    return membership(I, f, nmax).member


def _one_like(f: Series) -> Series:
    return f.like({(0,) * f.vars.size: f.ring.one()})


def power_membership(I: Ideal, f: Series, N_max: int, nmax: int = DEFAULT_NMAX):
    """Smallest N <= N_max with f^N in I, else NotFoundUpTo(N_max)."""
    g = _one_like(f)
    exact = True
    for N in range(N_max + 1):
        m = membership(I, g, nmax)
        exact = exact and m.exact
        if m.member:
            if not m.exact and g.trim().is_zero():
                # f^N vanished into the truncation: no evidence either way
                return NotFoundUpTo(max(N - 1, 0), False)
            return N
        g = times(g, f)
    return NotFoundUpTo(N_max, exact)


def expand_power(I: Ideal, k: int, cap: int = POWER_CAP) -> Ideal:
    count = comb(len(I.gens) + k - 1, k)
    if count > cap:
        raise CombinatorialBlowup(f"I^{k} has {count} expanded generators (cap {cap})")
    gens = I.gens
    if k == 0:
        return Ideal([_one_like(gens[0])], I.vars)
    out = []
    for combo in combinations_with_replacement(range(len(gens)), k):
        t = gens[combo[0]]
        for i in combo[1:]:
            t = times(t, gens[i])
        out.append(t)
    return Ideal(out, I.vars)


def align(a: Series, b: Series):
    """Bring two series to their common (smaller) truncation."""
    D, M = min(a.D, b.D), min(a.M, b.M)
    return a.at(D, M), b.at(D, M)


def times(a: Series, b: Series) -> Series:
    a, b = align(a, b)
    return a * b


def product(A: Ideal, B: Ideal) -> Ideal:
    return Ideal([times(a, b) for a in A.gens for b in B.gens], A.vars)


def ideal_power_containment(A: Ideal, k: int, B: Ideal, cap: int = POWER_CAP,
                            nmax: int = DEFAULT_NMAX) -> bool:
    """A^k inside B, generator by generator."""
    return containment_detail(A, k, B, cap, nmax).member


def _nakayama_containment(mons: list, B: Ideal) -> Membership:
    """N = <pi^j z^b> inside B, tested as N inside B + M*N.

    Exact when M*N lies inside every generator's jet; otherwise the test
    runs modulo M*N + W and is reported as jet-level.
    """
    n = B.vars.size
    W = meet(*[g.jet for g in B.gens])
    D = max(g.D for g in B.gens)
    INF = float("inf")

    def pN(b):
        best = INF
        for j, g in mons:
            if j < best and all(x <= y for x, y in zip(g, b)):
                best = j
        return best

    def pMN(b):
        v = pN(b) + 1
        for i in range(n):
            if b[i]:
                v = min(v, pN(_minus(b, i)))
        return v

    exact = True
    stair = {}
    for b in monomials_upto(n, D + 1):
        v, w = pMN(b), W.prec(b) if sum(b) <= D else 0
        if v > w:
            exact = False
        if sum(b) <= D:
            stair[b] = int(min(v, w))
    S = Staircase(n, stair)
    coords = _Coords(S, B.spec.p, B.spec.e)
    ech = Echelon(coords, _columns(coords, B.gens, B.spec.e))
    M = max(g.M for g in B.gens)
    for j, b in mons:
        if not ech.member(coords.monomial(B.spec, j, b)):
            return Membership(False, exact, D, M)
    return Membership(True, exact, D, M)


def containment_detail(A: Ideal, k: int, B: Ideal, cap: int = POWER_CAP,
                       nmax: int = DEFAULT_NMAX) -> Membership:
    powered = expand_power(A, k, cap)
    mons = _monomial_gens(powered)
    if mons is not None:
        return _nakayama_containment(sorted(set(mons)), B)
    exact = True
    D = M = 0
    for g in powered.gens:
        m = membership(B, g, nmax)
        exact = exact and m.exact
        D, M = max(D, m.D), max(M, m.M)
        if not m.member:
            return Membership(False, exact, D, M)
    return Membership(True, exact, D, M)


def _monomial_gens(I: Ideal):
    """(j, b) pairs when every generator is a unit times pi^j z^b, else None."""
    out = []
    for g in I.gens:
        if len(g.terms) != 1:
            return None
        (b, c), = g.terms.items()
        out.append((g.ring.valuation(c), b))
    return out


def _monomial_power_prec(mons, k, b):
    best = None
    for combo in combinations_with_replacement(mons, k):
        s = [0] * len(b)
        j = 0
        for jj, g in combo:
            j += jj
            for i, x in enumerate(g):
                s[i] += x
        if all(x <= y for x, y in zip(s, b)) and (best is None or j < best):
            best = j
    return best


def ord_I(f: Series, I: Ideal, k_max: int, nmax: int = DEFAULT_NMAX):
    """Largest k <= k_max with f in I^k; AtLeast(k_max) if f lies in I^k_max."""
    if f.vars != I.vars:
        raise ValueError("f and I live in different rings")
    mons = _monomial_gens(I)
    for k in range(1, k_max + 1):
        if mons is not None and comb(len(mons) + k - 1, k) <= POWER_CAP:
            inside = True
            for a, c in f.terms.items():
                j = _monomial_power_prec(mons, k, a)
                if j is None or f.ring.valuation(c) < j:
                    inside = False
                    break
        else:
            inside = contains(expand_power(I, k), f, nmax)
        if not inside:
            return k - 1
    return AtLeast(k_max)


def maximal_ideal(like: Series) -> Ideal:
    """<pi, z_1, ..., z_m> in the ring of `like`."""
    ring, vars, D = like.ring, like.vars, like.D
    gens = [Series(ring, vars, D, {(0,) * vars.size: ring.pi()})]
    gens += [Series.var(ring, vars, D, i) for i in range(vars.size)]
    return Ideal(gens, vars)


def kappa_colength_dense(gens: list[Series], nmax: int = DEFAULT_NMAX) -> int:
    """dim_kappa kappa[[z]]/(gens mod pi) through the V-engine, adding pi."""
    g0 = gens[0]
    pi = Series(g0.ring, g0.vars, g0.D, {(0,) * g0.vars.size: g0.ring.pi()})
    return quotient_length(Ideal(list(gens) + [pi], g0.vars), nmax).value


__all__ = [
    "Staircase", "Echelon", "LengthResult", "Membership", "quotient_length", "membership",
    "contains", "power_membership", "expand_power", "product", "ideal_power_containment",
    "containment_detail", "align", "times", "ord_I", "maximal_ideal", "kappa_colength_dense", "DEFAULT_NMAX",
]
