import random

import pytest
import sympy

from conftest import RAMIFIED, S
from mixsing.coeff import CoeffRing, DvrSpec
from mixsing.errors import RamifiedUnsupported, UnramifiedUnsupported
from mixsing.pderiv import (PDerivation, c_p, d_dpi, d_dpi_coeff, d_dpi_recipe, delta0_closed,
                            delta_closed_form, delta_closed_form_p_alpha, delta_eval, partial_pi)
from mixsing.series import Series, VarSet, monomials_upto


def _lower(s):
    return s.at(M=s.M - 1)


def _same(a, b):
    return (a - b).trim().is_zero()


def rand_series(rng, R, V, D, deg, density=0.6):
    return Series(R, V, D, {a: R.random(rng) for a in monomials_upto(V.size, deg) if rng.random() < density})


def rand_delta(rng, R, V, D):
    return PDerivation(tuple(rand_series(rng, R, V, D, 2) for _ in range(V.size)))


CASES = [(p, n, M) for p in (3, 5) for n in (1, 2) for M in (3, 5)]


@pytest.mark.parametrize("p,n,M", CASES)
def test_sum_and_product_rules(p, n, M):
    rng = random.Random(p * 100 + n * 10 + M)
    R, V, D = CoeffRing(DvrSpec(p), M), VarSet(n), 8
    for _ in range(100 // len(CASES) + 1):
        f, g = rand_series(rng, R, V, D, 3), rand_series(rng, R, V, D, 3)
        d = rand_delta(rng, R, V, D) if rng.random() < 0.7 else PDerivation.zero()
        df, dg = delta_eval(d, f), delta_eval(d, g)
        assert _same(delta_eval(d, f + g), df + dg + _lower(c_p(f, g)))
        rhs = _lower(f ** p) * dg + _lower(g ** p) * df + (df * dg).scale(p)
        assert _same(delta_eval(d, f * g), rhs)


def test_delta_of_one_is_zero():
    f = S("1", p=5)
    assert delta_eval(PDerivation.zero(), f).is_zero()


def test_c_p_is_twisted_additivity():
    # delta_0 on constants: delta(a + b) - delta(a) - delta(b) = C_p(a, b)
    R, V = CoeffRing(DvrSpec(3), 6), VarSet(1)
    a, b = Series.const(R, V, 4, 4), Series.const(R, V, 4, 7)
    d = PDerivation.zero()
    assert _same(delta_eval(d, a + b) - delta_eval(d, a) - delta_eval(d, b), _lower(c_p(a, b)))


def test_delta_zero_closed_form_matches_fold():
    rng = random.Random(11)
    for k in range(50):
        p = (3, 5, 7)[k % 3]
        n = 1 + k % 2
        R, V = CoeffRing(DvrSpec(p), 3 + k % 4), VarSet(n)
        f = rand_series(rng, R, V, 9, 4)
        assert _same(delta0_closed(f), delta_eval(PDerivation.zero(), f))


def test_general_closed_form_matches_fold():
    rng = random.Random(12)
    for _ in range(30):
        R, V = CoeffRing(DvrSpec(3), 5), VarSet(2)
        f = rand_series(rng, R, V, 8, 3)
        d = rand_delta(rng, R, V, 8)
        assert _same(delta_closed_form(d, f), delta_eval(d, f))


def test_p_alpha_closed_form_disagrees_with_the_rules():
    f = S("x1^2", p=3, D=10, M=5)
    d = PDerivation((Series.const(f.ring, f.vars, f.D, 1),))
    assert not _same(delta_closed_form_p_alpha(d, f), delta_eval(d, f))
    assert _same(delta_closed_form(d, f), delta_eval(d, f))


def test_known_values():
    f = S("3*x1", p=3, D=6, M=5)
    assert delta_eval(PDerivation.zero(), f).terms == {(3,): f.ring.with_precision(4).reduce(-8)}
    d1 = PDerivation((Series.const(f.ring, f.vars, f.D, 1),))
    low = f.ring.with_precision(4)
    assert delta_eval(d1, f).terms == {(0,): 3, (3,): low.reduce(-8)}


X = sympy.symbols("x1 x2")


def _exact_delta(f, a, p, n):
    """(phi(f) - f^p)/p with phi(x_i) = x_i^p + p a_i, computed over Z[x]."""
    sub = {X[i]: X[i] ** p + p * a[i] for i in range(n)}
    return sympy.expand((f.subs(sub, simultaneous=True) - f ** p) / p)


def _series_of(expr, R, V, D):
    poly = sympy.Poly(expr, *X[:V.n])
    return Series(R, V, D, {tuple(m): R.reduce(int(c)) for m, c in zip(poly.monoms(), poly.coeffs())})


def test_delta_against_frobenius_lift_oracle():
    rng = random.Random(5)
    for _ in range(25):
        p, n = rng.choice([3, 5]), rng.choice([1, 2])
        M, D = 5, 20
        R, V = CoeffRing(DvrSpec(p), M), VarSet(n)
        f = sum(rng.randint(-20, 20) * sympy.Mul(*[X[i] ** rng.randint(0, 2) for i in range(n)])
                for _ in range(3)) + rng.choice([0, p, p * p])
        # delta(x_i) without constant term keeps every degree exact
        a = [sum(rng.randint(-5, 5) * X[j] for j in range(n)) for _ in range(n)]
        fs = _series_of(sympy.expand(f), R, V, D) if sympy.expand(f) != 0 else Series(R, V, D)
        d = PDerivation(tuple(_series_of(sympy.expand(ai), R, V, D) if ai != 0 else Series(R, V, D)
                              for ai in a))
        want = _series_of(_exact_delta(f, a, p, n), R.with_precision(M - 1), V, D)
        got = delta_eval(d, fs)
        assert _same(got, want)


def test_delta_needs_unramified():
    with pytest.raises(RamifiedUnsupported):
        delta_eval(PDerivation.zero(), S("x1", spec=RAMIFIED))


def test_d_dpi_is_a_derivation_to_the_residue_field():
    R = CoeffRing(RAMIFIED, 5)
    rng = random.Random(9)
    for _ in range(100):
        a, b = R.random(rng), R.random(rng)
        lhs = d_dpi_coeff(R, R.mul(a, b))
        rhs = (R.residue(a) * d_dpi_coeff(R, b) + R.residue(b) * d_dpi_coeff(R, a)) % 3
        assert lhs == rhs
        assert d_dpi_coeff(R, R.add(a, b)) == (d_dpi_coeff(R, a) + d_dpi_coeff(R, b)) % 3
        assert d_dpi_coeff(R, R.from_int(rng.randint(-99, 99))) == 0
    assert d_dpi_coeff(R, R.pi()) == 1


def test_d_dpi_on_series():
    f = S("x1^2 + pi^3 + pi*x1", spec=RAMIFIED)
    # pi^3 = 3 pi has no pi^1 coordinate mod 3
    assert d_dpi(f) == {(1,): 1}
    assert d_dpi_recipe(f) == partial_pi(f).reduce_mod_pi()
    with pytest.raises(UnramifiedUnsupported):
        d_dpi(S("x1"))


def test_recipe_misses_pi_inside_units():
    # the recipe treats u = 1 + pi as a constant, the derivation does not
    f = S("(1+pi)*x1^2 + pi^3", spec=RAMIFIED)
    assert d_dpi(f) == {(2,): 1}
    assert d_dpi_recipe(f) == {}

