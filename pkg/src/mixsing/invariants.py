"""Tjurina-type invariants of f in V[[x]] assembled from the engines."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import localalg as la
from . import mora
from .errors import (AtLeast, MixsingError, NotFiniteUpToBounds, NotFoundUpTo,
                     PrecisionExhausted, PreconditionError, RamifiedUnsupported,
                     UnramifiedUnsupported)
from .localalg import LengthResult
from .pderiv import PDerivation, d_dpi, j_delta
from .series import Ideal, Polynomial, Series, monomials_upto, tilde_lift


@dataclass
class Config:
    D: int = 12
    M: int = 8
    samples: int = 5
    seed: int = 0
    nmax: int = 16
    kmax: int = 8
    retry: bool = True

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class GenericSampler:
    """Random a = c0*y + sum c_i*x_i + c*pi with unit coefficients."""

    seed: int = 0
    samples: int = 5

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample")

    def forms(self, F: Series) -> list[Series]:
        rng = random.Random(self.seed)
        ring, vars, D = F.ring, F.vars, F.D
        out = []
        for _ in range(self.samples):
            terms = {}
            for i in range(vars.size):
                e = tuple(1 if j == i else 0 for j in range(vars.size))
                terms[e] = ring.random_unit(rng)
            terms[(0,) * vars.size] = ring.mul(ring.random_unit(rng), ring.pi())
            out.append(Series(ring, vars, D, terms))
        return out


# ---------------------------------------------------------------- plumbing

def _realize(f, D, M) -> Series:
    return f if isinstance(f, Series) else f.series(D, M)


def _attempt(f, cfg: Config, fn, D=None, M=None):
    """Run fn on f.  Exact polynomial input gets one retry with M doubled
    when the engine ran out of precision."""
    D = cfg.D if D is None else D
    M = cfg.M if M is None else M
    events = []
    if isinstance(f, Series) or not cfg.retry:
        return fn(_realize(f, D, M)), events
    try:
        return fn(f.series(D, M)), events
    except NotFiniteUpToBounds as exc:
        if exc.bounds.get("cause") != "precision":
            raise
        events.append({"event": "retry", "from": {"D": D, "M": M}, "to": {"D": D + 4, "M": 2 * M}})
    except PrecisionExhausted:
        events.append({"event": "retry", "from": {"D": D, "M": M}, "to": {"D": D + 4, "M": 2 * M}})
    out = fn(f.series(D + 4, 2 * M))
    if isinstance(out, LengthResult):
        out.precision_events.extend(events)
    return out, events


def _unramified(f):
    if f.spec.ramified:
        raise RamifiedUnsupported("this invariant needs the unramified model")


def _ramified(f):
    if not f.spec.ramified:
        raise UnramifiedUnsupported("this invariant needs a ramified DVR")


def _const(s: Series, raw) -> Series:
    return Series(s.ring, s.vars, s.D, {(0,) * s.vars.size: raw})


def _pi(s: Series) -> Series:
    return _const(s, s.ring.pi())


def jacobian(s: Series, variables=None) -> list[Series]:
    idx = range(s.vars.size) if variables is None else variables
    return [s.partial(i) for i in idx]


def order(f) -> int | None:
    s = _realize(f, 12, 8) if not isinstance(f, Series) else f
    return s.order()


# ---------------------------------------------------------------- tau_V, mu_V

def _sampled(s: Series, sampler: GenericSampler, nmax: int, with_f: bool, jac: str) -> LengthResult:
    if s.vars.has_y:
        raise PreconditionError("f must be a series in the x-variables only")
    return _sampled_lift(tilde_lift(s), sampler, nmax, with_f, jac)


def _sampled_lift(F: Series, sampler: GenericSampler, nmax: int, with_f: bool, jac: str) -> LengthResult:
    if not F.vars.has_y:
        raise PreconditionError("expected a series in V[[x, y]]")
    if jac == "full":
        base = jacobian(F)
    elif jac == "x":
        base = jacobian(F, range(F.vars.n))
    else:
        raise ValueError("jacobian must be 'full' or 'x'")
    if with_f:
        base.append(F)
    got, errors = [], []
    for a in sampler.forms(F):
        try:
            got.append(la.quotient_length(Ideal(base + [a], F.vars), nmax))
        except NotFiniteUpToBounds as exc:
            errors.append(exc)
    if not got:
        precision = [e for e in errors if e.bounds.get("cause") == "precision"]
        raise (precision or errors)[0]
    best = min(r.value for r in got)
    winner = next(r for r in got if r.value == best)
    agree = sum(1 for r in got if r.value == best)
    samples = [r.value for r in got] + ["bounds"] * len(errors)
    return LengthResult(best, agree >= 2 or sampler.samples == 1, winner.N_pi, winner.D_stable,
                        [], winner.rounds, samples)


def tau_V(f, sampler: GenericSampler | None = None, cfg: Config | None = None,
          jacobian: str = "full") -> LengthResult:
    """length V[[x,y]]/(J(f~) + <f~, a>), minimised over sampled a."""
    cfg = cfg or Config()
    sampler = sampler or GenericSampler(cfg.seed, cfg.samples)
    return _attempt(f, cfg, lambda s: _sampled(s, sampler, cfg.nmax, True, jacobian))[0]


def tau_V_lift(F, sampler: GenericSampler | None = None, cfg: Config | None = None,
               jacobian: str = "full") -> LengthResult:
    """The same length for an arbitrary F in V[[x,y]] in place of f~.

    Used to check that contact-equivalent lifts u*phi(f~) give tau_V(f).
    """
    cfg = cfg or Config()
    sampler = sampler or GenericSampler(cfg.seed, cfg.samples)
    return _attempt(F, cfg, lambda s: _sampled_lift(s, sampler, cfg.nmax, True, jacobian))[0]


def mu_V(f, sampler: GenericSampler | None = None, cfg: Config | None = None,
         jacobian: str = "full") -> LengthResult:
    """length V[[x,y]]/(J(f~) + <a>), minimised over sampled a."""
    cfg = cfg or Config()
    sampler = sampler or GenericSampler(cfg.seed, cfg.samples)
    return _attempt(f, cfg, lambda s: _sampled(s, sampler, cfg.nmax, False, jacobian))[0]


# ---------------------------------------------------------------- p-derivation invariants

def _realize_delta(delta: PDerivation | None, s: Series) -> PDerivation:
    if delta is None:
        return PDerivation.zero()
    vals = []
    for v in delta.values:
        if v is None:
            vals.append(None)
        elif isinstance(v, Series):
            vals.append(v.at(s.D, s.M))
        elif isinstance(v, int):
            vals.append(Series.const(s.ring, s.vars, s.D, v))
        elif isinstance(v, dict):
            vals.append(Series(s.ring, s.vars, s.D, {a: s.ring.from_int(c) for a, c in v.items()}))
        else:
            vals.append(v.series(s.D, s.M))
    return PDerivation(tuple(vals))


def _delta_ideal(s: Series, delta, with_f: bool, with_p: bool) -> Ideal:
    _unramified(s)
    gens = list(j_delta(_realize_delta(delta, s), s).gens)
    if with_f:
        gens.append(s)
    if with_p:
        gens.append(_pi(s))
    return Ideal(gens, s.vars)


def _scaled_length(I: Ideal, s: Series, nmax: int) -> LengthResult:
    return la.quotient_length(I, nmax).scaled(s.ring.p ** s.vars.n)


def tau_delta(f, delta: PDerivation | None = None, cfg: Config | None = None) -> LengthResult:
    """(1/p^n) length V[[x]]/(<f> + J_delta(f))."""
    cfg = cfg or Config()
    return _attempt(f, cfg, lambda s: _scaled_length(_delta_ideal(s, delta, True, False), s, cfg.nmax))[0]


def mu_delta(f, delta: PDerivation | None = None, cfg: Config | None = None) -> LengthResult:
    """(1/p^n) length V[[x]]/J_delta(f)."""
    cfg = cfg or Config()
    return _attempt(f, cfg, lambda s: _scaled_length(_delta_ideal(s, delta, False, False), s, cfg.nmax))[0]


def random_delta(n: int, rng: random.Random, degree: int = 2, bound: int = 50) -> PDerivation:
    """delta(x_i) = random integer polynomial of degree <= `degree`."""
    vals = []
    for _ in range(n):
        terms = {}
        for a in monomials_upto(n, degree):
            c = rng.randrange(-bound, bound + 1)
            if c:
                terms[a] = c
        vals.append(terms)
    return PDerivation(tuple(vals))


def _kappa_gens(gens: list[Series]) -> list[dict]:
    return [g.reduce_mod_pi() for g in gens]


def _tau_Delta_once(s: Series, delta, nmax: int, backend: str) -> LengthResult:
    I = _delta_ideal(s, delta, True, True)
    if backend == "dense":
        return _scaled_length(I, s, nmax)
    if backend == "mora":
        val = mora.kappa_colength(_kappa_gens(I.gens), s.vars.size, s.ring.p)
        if val is None:
            raise NotFiniteUpToBounds("residue-field colength is not finite", {"backend": "mora"})
        return LengthResult(Fraction(val, s.ring.p ** s.vars.n))
    raise ValueError("backend must be 'dense' or 'mora'")


def tau_Delta(f, cfg: Config | None = None, backend: str = "dense", check: bool = True) -> LengthResult:
    """(1/p^n) length V[[x]]/(<f, p> + J_delta(f)), computed with delta_0.

    With `check`, a random delta is run as well; the value may not depend
    on delta, so a mismatch raises.
    """
    cfg = cfg or Config()
    D = cfg.D
    if backend == "mora" and isinstance(f, Polynomial):
        # make delta_0(f) an honest polynomial
        D = max(D, f.spec.p * f.degree())
    res = _attempt(f, cfg, lambda s: _tau_Delta_once(s, None, cfg.nmax, backend), D=D)[0]
    if check:
        rng = random.Random(cfg.seed + 7919)
        n = f.vars.n
        other = _attempt(f, cfg, lambda s: _tau_Delta_once(s, random_delta(n, rng), cfg.nmax, "dense"), D=D)[0]
        if other.value != res.value:
            raise MixsingError(f"tau_Delta depends on delta: {res.value} vs {other.value}")
    return res


def _tau_pi_gens(s: Series) -> list[Series]:
    _ramified(s)
    dd = d_dpi(s)
    lift = Series(s.ring, s.vars, s.D, {a: s.ring.from_int(c) for a, c in dd.items()})
    return [s] + jacobian(s) + [lift]


def tau_pi(f, cfg: Config | None = None, backend: str = "dense") -> LengthResult:
    """dim_kappa kappa[[x]]/(<f mod pi> + J_pi(f))."""
    cfg = cfg or Config()

    def run(s):
        gens = _tau_pi_gens(s)
        if backend == "dense":
            return la.quotient_length(Ideal(gens + [_pi(s)], s.vars), cfg.nmax)
        val = mora.kappa_colength(_kappa_gens(gens), s.vars.size, s.ring.p)
        if val is None:
            raise NotFiniteUpToBounds("residue-field colength is not finite", {"backend": "mora"})
        return LengthResult(val)
    return _attempt(f, cfg, run)[0]


# ---------------------------------------------------------------- orders, j, determinacy

def ord_uniformizer(f, cfg: Config | None = None):
    """Smallest N with p^N in <f, (d_i f)^p> (unramified), or with
    pi^N in <f> + J(f) (ramified).  NotFoundUpTo when the cap is hit.

    Polynomial input is realized with M > N_max so that pi^{N_max} is
    still nonzero."""
    cfg = cfg or Config()
    M = cfg.M if isinstance(f, Series) else max(cfg.M, cfg.nmax + 1)

    def run(s):
        if s.spec.ramified:
            gens = [s] + jacobian(s)
        else:
            gens = [s] + [d ** s.ring.p for d in jacobian(s)]
        return la.power_membership(Ideal(gens, s.vars), _pi(s), cfg.nmax, cfg.nmax)
    return _attempt(f, cfg, run, M=M)[0]


def _ideal_for(s: Series, I) -> Ideal:
    if isinstance(I, Ideal):
        return I
    if I in (None, "max"):
        return la.maximal_ideal(s)
    if I == "vars":
        return Ideal([Series.var(s.ring, s.vars, s.D, i) for i in range(s.vars.size)], s.vars)
    if callable(I):
        return I(s)
    raise ValueError(f"unknown ideal spec {I!r}")


def jacobian_number(f, I="max", cfg: Config | None = None) -> int:
    """length(I/(<f> + J(f))), by additivity."""
    cfg = cfg or Config()

    def run(s):
        Ii = _ideal_for(s, I)
        o = la.ord_I(s, Ii, 2, cfg.nmax)
        if not isinstance(o, AtLeast) and o < 2:
            raise PreconditionError("jacobian number needs f in I^2")
        big = la.quotient_length(Ideal([s] + jacobian(s), s.vars), cfg.nmax).value
        return big - la.quotient_length(Ii, cfg.nmax).value
    return _attempt(f, cfg, run)[0]


@dataclass
class Determinacy:
    k: int
    order: int
    ord_I: int
    exact: bool
    j: int | None = None
    j_bound: int | None = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def determinacy_bound(f, I="max", cfg: Config | None = None):
    """Smallest k with I^{k+2} inside I<f> + I^2 J(f); the order is 2k - ord_I(f) + 2."""
    cfg = cfg or Config()

    def run(s):
        Ii = _ideal_for(s, I)
        o = la.ord_I(s, Ii, cfg.kmax + 2, cfg.nmax)
        if isinstance(o, AtLeast):
            raise PreconditionError("ord_I(f) exceeds the cap; f is too close to 0 at this precision")
        J = Ideal(jacobian(s), s.vars)
        K = la.product(Ii, Ideal([s], s.vars)) + la.product(la.expand_power(Ii, 2), J)
        for k in range(cfg.kmax + 1):
            m = la.containment_detail(Ii, k + 2, K, nmax=cfg.nmax)
            if m.member:
                out = Determinacy(k, 2 * k - o + 2, o, m.exact)
                if o >= 2:
                    try:
                        j = jacobian_number(s, Ii, cfg)
                        out.j, out.j_bound = j, 2 * j - o + 2
                    except NotFiniteUpToBounds:
                        pass
                return out
        return NotFoundUpTo(cfg.kmax)
    return _attempt(f, cfg, run)[0]


# ---------------------------------------------------------------- isolation

@dataclass
class Verdict:
    kind: str  # Regular | Isolated | Inconclusive
    certificates: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.certificates}


def is_regular(s: Series) -> bool:
    o = s.order()
    return o is not None and o <= 1


def isolated_singularity_check(f, cfg: Config | None = None) -> Verdict:
    """Unramified: p in rad(J(f) + <f>) and tau_Delta finite.
    Ramified: pi in rad(J(f) + <f>) and tau_pi finite."""
    cfg = cfg or Config()
    s = _realize(f, cfg.D, cfg.M)
    if is_regular(s):
        return Verdict("Regular", {"ord": s.order()})
    bounds = {"D": cfg.D, "M": cfg.M, "N_max": cfg.nmax, "samples": cfg.samples}
    try:
        N = _attempt(f, cfg, lambda t: la.power_membership(
            Ideal([t] + jacobian(t), t.vars), _pi(t), cfg.nmax, cfg.nmax))[0]
    except NotFiniteUpToBounds as exc:
        return Verdict("Inconclusive", {"bounds": bounds, "reason": str(exc)})
    if isinstance(N, NotFoundUpTo):
        return Verdict("Inconclusive", {"bounds": bounds, "reason": "uniformizer not in the radical up to N_max"})
    try:
        tau = tau_pi(f, cfg) if s.spec.ramified else tau_Delta(f, cfg)
    except NotFiniteUpToBounds as exc:
        return Verdict("Inconclusive", {"bounds": bounds, "radical_exponent": N, "reason": str(exc)})
    name = "tau_pi" if s.spec.ramified else "tau_Delta"
    return Verdict("Isolated", {"radical_exponent": N, name: tau.value})


# ---------------------------------------------------------------- report

def fmt(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _length_entry(call):
    try:
        r = call()
    except MixsingError as exc:
        return exc.payload()
    if isinstance(r, LengthResult):
        out = {"value": fmt(r.value), "certified": r.certified, "N_pi": r.N_pi, "D_stable": r.D_stable}
        if r.samples:
            out["samples"] = [fmt(v) for v in r.samples]
        if r.precision_events:
            out["precision_events"] = r.precision_events
        return out
    if isinstance(r, NotFoundUpTo):
        return {"flag": "NotFoundUpTo", "bound": r.bound, "exact": r.exact}
    if isinstance(r, AtLeast):
        return {"flag": "AtLeast", "k": r.k}
    if hasattr(r, "as_dict"):
        return r.as_dict()
    return {"value": fmt(r)}
