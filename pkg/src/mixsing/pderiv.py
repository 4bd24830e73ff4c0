"""p-derivations on V[[x]] (unramified V) and the derivation d/dpi (ramified V)."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .coeff import CoeffRing
from .errors import PrecisionExhausted, RamifiedUnsupported, UnramifiedUnsupported
from .series import Adic, Box, DeltaJet, Ideal, Series, meet, tilde_lift, project_pr


def _unramified(f: Series):
    if f.ring.spec.ramified:
        raise RamifiedUnsupported("p-derivations need the unramified model")


def _lower(f: Series) -> Series:
    if f.M < 2:
        raise PrecisionExhausted("need precision >= 2 to divide by p")
    return f.at(M=f.M - 1)


def _div_p(f: Series, jet=None) -> Series:
    """Divide every coefficient by p; the result lives at precision M-1."""
    ring = f.ring
    low = ring.with_precision(ring.M - 1)
    out = {}
    for a, c in f.terms.items():
        if c % ring.p:
            raise ValueError("series not divisible by p")
        out[a] = low.reduce(c // ring.p)
    return Series(low, f.vars, f.D, out, jet if jet is not None else Box(f.D, low.M))


def c_p(f: Series, g: Series) -> Series:
    """(f^p + g^p - (f+g)^p)/p, expanded with integer coefficients."""
    f._check(g)
    p = f.ring.p
    out = Series.zero(f.ring, f.vars, f.D).like({}, meet(f.jet, g.jet))
    if not f or not g:
        return out
    fpows = [None, f]
    for _ in range(2, p):
        fpows.append(fpows[-1] * f)
    gpows = [None, g]
    for _ in range(2, p):
        gpows.append(gpows[-1] * g)
    for j in range(1, p):
        out = out - (fpows[j] * gpows[p - j]).scale(comb(p, j) // p)
    return out


def c_p_many(*fs: Series) -> Series:
    """C_p(X_1, ..., X_k) folded from the two-argument version."""
    acc = fs[0]
    total = c_p(fs[0], fs[0] * 0)
    for g in fs[1:]:
        total = total + c_p(acc, g)
        acc = acc + g
    return total


def frob0(f: Series) -> Series:
    """Coefficients fixed (Frobenius on Z_p), x^a -> x^{pa}."""
    _unramified(f)
    p = f.ring.p
    return f.like({tuple(p * k for k in a): c for a, c in f.terms.items()})


@dataclass(frozen=True)
class PDerivation:
    """delta with delta(x_i) = a_i; `values` may be empty for delta_0."""

    values: tuple

    @classmethod
    def zero(cls) -> "PDerivation":
        return cls(())

    @classmethod
    def of(cls, values) -> "PDerivation":
        return cls(tuple(values))

    def is_zero(self) -> bool:
        return all(not a for a in self.values)

    def value(self, i: int, like: Series) -> Series:
        if i < len(self.values) and self.values[i] is not None:
            return self.values[i]
        return Series.zero(like.ring, like.vars, like.D)


def delta_of_coeff(ring: CoeffRing, c):
    """delta(c) = (c - c^p)/p on Z_p, returned at precision M-1."""
    low = ring.with_precision(ring.M - 1)
    t = ring.sub(c, ring.pow(c, ring.p))
    return low.reduce(t // ring.p)


class _MonomialDeltas:
    """delta(x^a) by the product rule, memoised per exponent."""

    def __init__(self, delta: PDerivation, like: Series):
        self.like = like
        self.low = _lower(like.like({}))
        self.vals = [_lower(delta.value(i, like)) for i in range(like.vars.size)]
        self.p = like.ring.p
        self.memo: dict = {}

    def __call__(self, alpha: tuple) -> Series:
        if alpha in self.memo:
            return self.memo[alpha]
        if not any(alpha):
            out = self.low
        else:
            l = next(i for i, k in enumerate(alpha) if k)
            beta = alpha[:l] + (alpha[l] - 1,) + alpha[l + 1:]
            a_l = self.vals[l]
            xpbeta = self.low.like({tuple(self.p * k for k in beta): self.low.ring.one()})
            if not any(beta):
                out = a_l
            else:
                db = self(beta)
                xl_p = self.low.like({tuple(self.p if i == l else 0 for i in range(len(alpha))): self.low.ring.one()})
                out = xl_p * db + xpbeta * a_l + (a_l * db).scale(self.p)
        self.memo[alpha] = out
        return out


def _delta_jet(f: Series, delta: PDerivation):
    if isinstance(f.jet, Box):
        if delta.is_zero():
            return Box(f.D, f.M - 1)
        return DeltaJet(f.D, f.M, f.ring.p)
    # delta(M^{k+1}) lies in M^k
    return meet(Adic(f.jet.low_order() - 1), Box(f.D, f.M - 1))


def delta_term(delta: PDerivation, f: Series, alpha: tuple, c, mono=None) -> Series:
    """delta(c x^alpha) = x^{p alpha} delta(c) + c^p delta(x^alpha) + p delta(c) delta(x^alpha)."""
    mono = mono or _MonomialDeltas(delta, f)
    ring = f.ring
    low = mono.low
    dc = delta_of_coeff(ring, c)
    p = ring.p
    out = low.like({tuple(p * k for k in alpha): dc})
    if any(alpha):
        dx = mono(alpha)
        if dx:
            cp = low.ring.reduce(ring.pow(c, p))
            out = out + dx.scale(cp) + dx.scale(low.ring.mul(dc, p % low.ring.top))
    return out


def delta_eval(delta: PDerivation, f: Series, order=None) -> Series:
    """delta(f) at precision M-1 by folding the sum rule over the terms of f."""
    _unramified(f)
    mono = _MonomialDeltas(delta, f)
    terms = list(f.items()) if order is None else [(a, f.terms[a]) for a in order]
    S = f.like({}, Box(f.D, f.M))
    dS = mono.low
    for a, c in terms:
        t = f.like({a: c}, Box(f.D, f.M))
        dS = dS + delta_term(delta, f, a, c, mono) + _lower(c_p(S, t))
        S = S + t
    return dS.like(dS.terms, _delta_jet(f, delta))


def delta0_closed(f: Series) -> Series:
    """(Frob_0(f) - f^p)/p."""
    _unramified(f)
    base = f.like(f.terms, Box(f.D, f.M))
    return _div_p(frob0(base) - base ** f.ring.p, _delta_jet(f, PDerivation.zero()))


def delta_closed_form(delta: PDerivation, f: Series) -> Series:
    """delta(f) = delta_0(f) + sum_a c_a delta(x^a), which is what the product
    and sum rules give when Frob is the identity on Z_p."""
    mono = _MonomialDeltas(delta, f)
    out = delta0_closed(f)
    low = mono.low.ring
    for a, c in f.items():
        if any(a):
            dx = mono(a)
            if dx:
                out = out + dx.scale(low.reduce(c))
    return out.like(out.terms, _delta_jet(f, delta))


def delta_closed_form_p_alpha(delta: PDerivation, f: Series) -> Series:
    """The variant with delta(x^{p a}) in the middle sum, kept only so
    the discrepancy with the axioms can be exhibited."""
    mono = _MonomialDeltas(delta, f)
    ring = f.ring
    low = mono.low.ring
    p = ring.p
    out = delta0_closed(f)
    for a, c in f.items():
        if not any(a):
            continue
        cp = low.reduce(ring.pow(c, p))
        pa = tuple(p * k for k in a)
        if sum(pa) <= f.D:
            out = out + mono(pa).scale(cp)
        out = out + mono(a).scale(low.reduce(ring.sub(c, ring.pow(c, p))))
    return out


def j_delta(delta: PDerivation, f: Series) -> Ideal:
    """<(d_1 f)^p, ..., (d_n f)^p, delta(f)>."""
    _unramified(f)
    p = f.ring.p
    gens = [f.partial(i) ** p for i in range(f.vars.size)]
    gens.append(delta_eval(delta, f))
    return Ideal(gens, f.vars)


# ---------------------------------------------------------------- ramified

def _ramified(f: Series):
    if not f.ring.spec.ramified:
        raise UnramifiedUnsupported("d/dpi needs a ramified DVR (p in <pi^2>)")


def partial_pi(f: Series) -> Series:
    """pr(d_y f~) = sum u_a n_a pi^{n_a - 1} x^a, a series over V."""
    _ramified(f)
    F = tilde_lift(f)
    return project_pr(F.partial(F.vars.y)).at(D=f.D)


def d_dpi_coeff(ring: CoeffRing, c) -> int:
    """The Z-derivation V -> F_p with pi -> 1: the pi^1 coordinate mod p.

    It kills Z_p and pi^2 V, so only the coordinate of pi survives."""
    return ring.coords(c)[1] % ring.p


def d_dpi(f: Series) -> dict:
    """d/dpi(f) in F_p[[x]] as {exponent: residue}."""
    _ramified(f)
    out = {}
    for a, c in f.terms.items():
        r = d_dpi_coeff(f.ring, c)
        if r:
            out[a] = r
    return out


def d_dpi_recipe(f: Series) -> dict:
    """partial_pi(f) reduced mod pi."""
    return partial_pi(f).reduce_mod_pi()
