import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import RAMIFIED, P, S
from mixsing.coeff import CoeffRing, DvrSpec
from mixsing.errors import OrderViolation, ShapeMismatch
from mixsing.series import (Polynomial, Series, VarSet, in_fraktur_a, monomials_upto, project_pr,
                            substitute, tilde_lift)

X = sympy.symbols("x1 x2")


def _to_series(expr, p, n, D, M):
    poly = sympy.Poly(sympy.expand(expr), *X[:n])
    terms = {tuple(m): [int(c)] for m, c in zip(poly.monoms(), poly.coeffs())}
    return Polynomial(DvrSpec(p), VarSet(n), terms).series(D, M)


@st.composite
def int_polys(draw, n=2, deg=3):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, deg)] * n), st.integers(-30, 30), max_size=5))
    return sum((c * sympy.Mul(*[X[i] ** a[i] for i in range(n)]) for a, c in terms.items()), sympy.Integer(0))


@settings(max_examples=40, deadline=None)
@given(int_polys(), int_polys(), st.sampled_from([3, 5]))
def test_arithmetic_matches_exact_expansion(f, g, p):
    D, M = 6, 4
    a, b = _to_series(f, p, 2, D, M), _to_series(g, p, 2, D, M)
    assert a + b == _to_series(f + g, p, 2, D, M)
    assert a * b == _to_series(f * g, p, 2, D, M)
    assert a - b == _to_series(f - g, p, 2, D, M)


def test_tilde_lift_example():
    F = tilde_lift(S("p^2*x1 + 2*p*x1^3 + x2^2", p=3))
    assert F.vars.names == ("x1", "x2", "y")
    assert set(F.terms) == {(1, 0, 2), (3, 0, 1), (0, 2, 0)}
    assert all(F.ring.is_unit(c) for c in F.terms.values())


@pytest.mark.parametrize("spec", [DvrSpec(3), DvrSpec(5), RAMIFIED])
def test_projection_undoes_lift(spec):
    rng = random.Random(3)
    R = CoeffRing(spec, 6)
    V = VarSet(2)
    for _ in range(20):
        f = Series(R, V, 5, {a: R.random(rng) for a in monomials_upto(2, 3) if rng.random() < 0.5})
        assert project_pr(tilde_lift(f)).terms == f.terms


def test_partial_lowers_degree_bound():
    f = S("x1^3 + p*x1*x2", p=5, D=6)
    d = f.partial("x1")
    assert d.D == 5
    assert d.terms == {(2, 0): 3, (0, 1): 5}


def test_order_counts_pi():
    assert S("p^2 + x1^2").order() == 2
    assert S("p*x1").order() == 2
    assert S("x1 + p^5").order() == 1
    assert S("pi^3 + x1^2", spec=RAMIFIED).order() == 2
    assert S("3*x1", spec=RAMIFIED).order() == 3


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        S("x1", D=5) + S("x1", D=6)


def test_substitute_inverse_automorphism():
    f = S("x1^2 + p*x2 + x1*x2^2", p=5, D=8)
    R, V = f.ring, f.vars
    x1, x2 = Series.var(R, V, 8, 0), Series.var(R, V, 8, 1)
    there = substitute(f, {0: x1 + x2, 1: x2})
    back = substitute(there, {0: x1 - x2, 1: x2})
    assert (back - f).trim().is_zero()


def test_substitute_needs_maximal_ideal():
    f = S("x1^2")
    with pytest.raises(OrderViolation):
        substitute(f, {0: f + 1})


def test_polynomial_degree_and_truncation():
    f = P("x1^5 + x1 + p")
    assert f.degree() == 5
    assert (0,) not in f.series(3, 4).terms or f.series(3, 4).terms[(0,)] == 3
    assert (5,) not in f.series(3, 4).terms


def test_fraktur_a():
    assert in_fraktur_a(S("p*x1^2 + x1^3"), 3)
    assert not in_fraktur_a(S("x1^2"), 3)
    assert not in_fraktur_a(S("p^4"), 3)


def test_monomials_upto():
    assert len(monomials_upto(3, 2)) == 10
    assert monomials_upto(1, 3) == [(0,), (1,), (2,), (3,)]
