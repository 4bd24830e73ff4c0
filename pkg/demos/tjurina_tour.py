"""Walk through the Tjurina-type invariants on a few small hypersurfaces.

Run with:  python3 demos/tjurina_tour.py
"""

from mixsing import Config, DvrSpec, mu_V, tau_Delta, tau_delta, tau_pi, tau_V
from mixsing.cli import parse_eisenstein, parse_expression
from mixsing.errors import NotFiniteUpToBounds
from mixsing.invariants import fmt, ord_uniformizer

cfg = Config()


def show(label, thunk):
    try:
        r = thunk()
        val = fmt(r.value) if hasattr(r, "value") else r
    except NotFiniteUpToBounds as exc:
        val = f"not finite up to {exc.bounds}"
    print(f"  {label:<14} {val}")


for src, p in [("p^2+x1^2", 3), ("x1^2+p^3", 3), ("x1^3+p^2", 3), ("p*x1+x1^3", 5)]:
    f = parse_expression(src, DvrSpec(p))
    print(f"{src}  (p = {p})")
    show("tau_V", lambda: tau_V(f, cfg=cfg))
    show("mu_V", lambda: mu_V(f, cfg=cfg))
    show("tau(f, d0)", lambda: tau_delta(f, None, cfg))
    show("tau_Delta", lambda: tau_Delta(f, cfg))
    show("ord_f(p)", lambda: ord_uniformizer(f, cfg))
    print()

# tau_Delta sits between two honest bounds: tau_Delta <= tau(f, d) <= ord_f(p) tau_Delta
f = parse_expression("x1^2+p^2", DvrSpec(3))
print("x1^2+p^2: tau_Delta =", fmt(tau_Delta(f, cfg).value),
      " ord_f(p) =", ord_uniformizer(f, cfg),
      " tau(f, d0) =", fmt(tau_delta(f, None, cfg).value))

# over Z_3[pi]/(pi^2 - 3) the derivative in pi replaces p-derivations
spec = parse_eisenstein("t^2-3", 3)
print()
for src in ["x1^2+pi^3", "x1^3+pi^2"]:
    f = parse_expression(src, spec)
    print(f"{src}: tau_pi = {tau_pi(f, cfg).value}, tau_V = {tau_V(f, cfg=cfg).value}")
