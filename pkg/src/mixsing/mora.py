"""Standard bases over F_p for a local degree ordering (Mora's tangent cone
algorithm).  Used for residue-field colengths dim F_p[[x]]/I with I
generated by polynomials."""

from __future__ import annotations

from itertools import product as iproduct

Poly = dict  # exponent tuple -> int mod p


def _key(a):
    # larger key = larger monomial: low degree first, then lex
    return (-sum(a), a)


def lead(f: Poly):
    return max(f, key=_key)


def ecart(f: Poly) -> int:
    return max(sum(a) for a in f) - sum(lead(f))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_mul(f: Poly, g: Poly, c: int, shift, p: int) -> Poly:
    """f - c * x^shift * g."""
    out = dict(f)
    for a, v in g.items():
        b = tuple(x + y for x, y in zip(a, shift))
        w = (out.get(b, 0) - c * v) % p
        if w:
            out[b] = w
        else:
            out.pop(b, None)
    return out


def _reduce_step(h: Poly, g: Poly, p: int) -> Poly:
    lh, lg = lead(h), lead(g)
    shift = tuple(x - y for x, y in zip(lh, lg))
    c = h[lh] * pow(g[lg], -1, p) % p
    return _sub_mul(h, g, c, shift, p)


def nf_mora(f: Poly, G: list, p: int) -> Poly:
    """Weak normal form: returns h with LM(h) outside L(G), or 0."""
    h = dict(f)
    T = list(G)
    while h:
        lh = lead(h)
        cands = [g for g in T if _divides(lead(g), lh)]
        if not cands:
            break
        g = min(cands, key=ecart)
        if ecart(g) > ecart(h):
            T.append(h)
        h = _reduce_step(h, g, p)
    return h


def _spoly(f: Poly, g: Poly, p: int) -> Poly:
    lf, lg = lead(f), lead(g)
    m = tuple(max(x, y) for x, y in zip(lf, lg))
    a = {tuple(x + y for x, y in zip(k, (mi - li for mi, li in zip(m, lf)))): v * pow(f[lf], -1, p) % p
         for k, v in f.items()}
    sg = tuple(mi - li for mi, li in zip(m, lg))
    return _sub_mul(a, g, pow(g[lg], -1, p), sg, p)


def standard_basis(gens: list, p: int) -> list:
    S = [dict(g) for g in gens if g]
    pairs = [(i, j) for j in range(len(S)) for i in range(j)]
    while pairs:
        i, j = pairs.pop()
        li, lj = lead(S[i]), lead(S[j])
        # coprime leading monomials: the pair reduces to zero
        if all(x == 0 or y == 0 for x, y in zip(li, lj)):
            continue
        h = nf_mora(_spoly(S[i], S[j], p), S, p)
        if h:
            S.append(h)
            pairs.extend((k, len(S) - 1) for k in range(len(S) - 1))
    return S


def staircase_size(leads: list, n: int) -> int | None:
    """Number of monomials outside the monomial ideal <leads>; None if infinite."""
    bounds = []
    for i in range(n):
        pure = [a[i] for a in leads if all(x == 0 for j, x in enumerate(a) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    count = 0
    for a in iproduct(*(range(b) for b in bounds)):
        if not any(_divides(l, a) for l in leads):
            count += 1
    return count


def kappa_colength(gens: list, n: int, p: int) -> int | None:
    """dim_{F_p} F_p[[x_1..x_n]]/<gens>, None when not finite."""
    gens = [{a: c % p for a, c in g.items() if c % p} for g in gens]
    gens = [g for g in gens if g]
    if not gens:
        return None
    S = standard_basis(gens, p)
    return staircase_size([lead(g) for g in S], n)
