"""Quadratic part, rank and the splitting of f~ into squares plus a residual."""

from mixsing import Config, DvrSpec, classify, hessian, split
from mixsing.cli import parse_expression
from mixsing.normform import diagonalize_rank

cfg = Config()
for src, p in [("p^2+x1^2+x2^2", 3), ("x1^2+p^3", 3), ("p^2+x1^2+x1*x2^2", 5), ("x1*x2+p*x1+x2^2+p^2", 5)]:
    s = parse_expression(src, DvrSpec(p)).series(cfg.D, cfg.M)
    h = hessian(s)
    r, _ = diagonalize_rank(h)
    sp = split(s, 8)
    c = classify(s, cfg=cfg)
    print(f"{src}  (p = {p})")
    print(f"  unit-square rank {r} of {h.size}, k = {sp.k}")
    print(f"  normal form  {sp.normal_form()}  (valid through order {sp.valid_order})")
    print(f"  classify     {c.kind}, tau_V = {c.tau_V}")
    for ob in sp.obstructions:
        print(f"  no square root: {ob}")
