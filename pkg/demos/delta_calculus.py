"""p-derivations on truncated power series.

delta(f) = (phi(f) - f^p)/p for the Frobenius lift phi with phi(x_i) = x_i^p + p*delta(x_i).
The sum and product rules are checked on a small example, and the closed
form delta_0(f) + sum c_a delta(x^a) is compared with the fold.
"""

from mixsing import CoeffRing, DvrSpec, PDerivation, Series, VarSet, delta_eval
from mixsing.pderiv import c_p, delta_closed_form, delta_closed_form_p_alpha

R, V = CoeffRing(DvrSpec(3), 5), VarSet(1)
x = Series.var(R, V, 10, 0)
one = Series.const(R, V, 10, 1)

f = x * x + one.scale(3)
g = x + one.scale(2)
d = PDerivation((x,))  # delta(x1) = x1

df, dg = delta_eval(d, f), delta_eval(d, g)
print("delta(f)       =", df)
print("delta(g)       =", dg)

lower = lambda s: s.at(M=s.M - 1)
lhs = delta_eval(d, f + g)
rhs = df + dg + lower(c_p(f, g))
print("sum rule holds:", (lhs - rhs).trim().is_zero())

lhs = delta_eval(d, f * g)
rhs = lower(f ** 3) * dg + lower(g ** 3) * df + (df * dg).scale(3)
print("product rule holds:", (lhs - rhs).trim().is_zero())

print("closed form matches:", (delta_closed_form(d, f) - df).trim().is_zero())
print("x^(p a) variant matches:", (delta_closed_form_p_alpha(d, f) - df).trim().is_zero())
