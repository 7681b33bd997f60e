"""Random generators and a sympy oracle shared by the test modules."""
import random

import sympy

from noncancel import GF, Poly, Presentation
from noncancel.lines import ZT


def rand_exps(rng: random.Random, n: int, max_deg: int) -> tuple:
    e = [0] * n
    for _ in range(rng.randint(0, max_deg)):
        e[rng.randrange(n)] += 1
    return tuple(e)


def rand_coeff(rng: random.Random, field: GF, nonzero=False):
    while True:
        if field.is_prime_field:
            c = rng.randrange(field.p)
        else:
            c = field([rng.randrange(field.p) for _ in range(field.degree)])
        if not nonzero or c != field.zero:
            return c


def rand_poly(rng, field, vars, max_deg=6, max_terms=6, nonzero=False) -> Poly:
    while True:
        terms = [(rand_exps(rng, len(vars), max_deg), rand_coeff(rng, field))
                 for _ in range(rng.randint(0, max_terms))]
        a = Poly(field, vars, terms)
        if a or not nonzero:
            return a


def to_sympy(a: Poly):
    syms = sympy.symbols(a.vars)
    return sympy.Poly.from_dict({e: c for e, c in a.terms().items()} or {(0,) * len(syms): 0},
                                *syms, modulus=a.field.p)


def from_sympy(s, field: GF, vars) -> Poly:
    return Poly(field, vars, {m: field(int(c)) for m, c in s.terms() if int(c) % field.p})


def rand_presentation(rng, p=None, m=None, x_dependent=True) -> Presentation:
    """A random valid presentation; F has nonzero x-free part f(Z, T)."""
    p = p or rng.choice([2, 3])
    m = m or rng.randint(1, 3)
    F = GF(p)
    xv = tuple(f"X{i + 1}" for i in range(m))
    r = [rng.randint(2, 3) for _ in range(m)]
    while True:
        f = rand_poly(rng, F, ZT, max_deg=5, max_terms=4, nonzero=True)
        if f.degree() >= 1:
            break
    G = f.embed(xv + ZT)
    if x_dependent:
        # only monomials involving some x, so the x-free part stays f
        extra = rand_poly(rng, F, xv + ZT, max_deg=4, max_terms=4)
        G = G + Poly(F, G.vars, {e: c for e, c in extra.terms().items() if any(e[:m])})
    return Presentation(F, r, G)


def rand_raw(rng, pres: Presentation, max_deg=6, max_terms=6, max_y=3) -> Poly:
    """A raw polynomial over the presentation's variables with y-degree <= max_y."""
    n = len(pres.vars)
    yi = pres.vars.index("Y")
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        e = list(rand_exps(rng, n, max_deg))
        e[yi] = rng.randint(0, max_y)
        for i in range(pres.m):
            e[i] += rng.choice([0, 0, pres.r[i], 2 * pres.r[i]])
        terms.append((tuple(e), rand_coeff(rng, pres.field, nonzero=True)))
    return Poly(pres.field, pres.vars, terms)
