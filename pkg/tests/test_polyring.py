import json
import random
import threading

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from noncancel.polyring import (
    GF, MAX_EXP, ContextMismatchError, LaurentPoly, NotDivisibleError, NotPolynomialError,
    Poly, PolyRing, RingHom, delocalize, delta_quotient, exact_div, is_prime, localize,
    substitute,
)

from helpers import from_sympy, rand_coeff, rand_poly, to_sympy

ZT = ("Z", "T")
VARS5 = ("A", "B", "C", "D", "E")


def P(text, p=2, vars=ZT):
    return Poly.parse(text, GF(p), vars)


# --- fields -----------------------------------------------------------------

def test_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**31 - 1)
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(2**31 + 11)


def test_extension_field_f4():
    F4 = GF(2, [1, 1, 1])
    w = F4.gen()
    assert F4.add(F4.add(F4.mul(w, w), w), F4.one) == F4.zero
    nonzero = [c for c in F4.elements() if c != F4.zero]
    assert len(nonzero) == 3
    for c in nonzero:
        assert F4.mul(c, F4.inv(c)) == F4.one
        assert F4.pow(c, 3) == F4.one
        assert F4.frob(c) == F4.pow(c, 2)


def test_extension_field_f9_and_rejections():
    F9 = GF(3, [1, 0, 1])  # w^2 + 1
    assert F9.order == 9
    assert len(set(F9.elements())) == 9
    for c in F9.elements():
        assert F9.pow(c, 9) == c
    with pytest.raises(ValueError):
        GF(2, [1, 0, 1])  # (w+1)^2
    with pytest.raises(ValueError):
        GF(3, [1, 1])  # degree 1
    with pytest.raises(ValueError):
        GF(3, [1, 0, 2])  # not monic


def test_field_json_roundtrip():
    for F in (GF(5), GF(2, [1, 1, 1]), GF(3, [2, 2, 1])):
        assert GF.from_json(F.to_json()) == F


# --- worked examples ----------------------------------------------------------

def test_arith_examples():
    s = P("Z+T")
    assert s * s == P("Z^2+T^2")
    assert s * Poly.zero(GF(2), ZT) == Poly.zero(GF(2), ZT)
    assert P("Z^2+2*T", 3) + P("Z^2+T", 3) == P("2*Z^2", 3)


def test_arith_context_mismatch():
    with pytest.raises(ContextMismatchError):
        P("Z", 2) + P("Z", 3)
    with pytest.raises(ContextMismatchError):
        P("Z") * P("Z", 2, ("Z", "T", "U"))


def test_exact_div_examples():
    assert exact_div(P("Z^2-T^2", 5), P("Z-T", 5)) == P("Z+T", 5)
    with pytest.raises(ZeroDivisionError):
        exact_div(P("Z"), Poly.zero(GF(2), ZT))
    with pytest.raises(NotDivisibleError):
        exact_div(P("Z^2+T", 3), P("Z+T", 3))


def test_exact_div_recovers_nagata_cofactor():
    f = P("Z^4+T+T^6")
    P1 = P("Z*T^3 + Z^2*T + T^5 + 1")
    assert exact_div(f * P1, f) == P1


def test_substitute_examples():
    F2 = GF(2)
    h = RingHom(ZT, ("S",), {"Z": "S+S^6", "T": "S^4"}, F2)
    assert substitute(h, P("Z^4+T+T^6")) == Poly.zero(F2, ("S",))
    a = P("Z^2*T+3", 5)
    assert substitute(RingHom.identity(GF(5), ZT), a) == a
    h0 = RingHom(ZT, ZT, {"Z": 0, "T": 0}, GF(5))
    assert substitute(h0, a) == Poly.const(GF(5), ZT, 3)


def test_substitute_unknown_variable():
    with pytest.raises(ContextMismatchError):
        RingHom(("Z",), ZT, {"Z": "Z"}, GF(2))(P("Z*T"))


def test_delta_quotient_examples():
    F2 = GF(2)
    UV = ("U", "V")
    assert delta_quotient(Poly.parse("S^2", F2, ("S",))) == Poly.parse("U+V", F2, UV)
    assert delta_quotient(Poly.parse("S", F2, ("S",))) == Poly.one(F2, UV)
    d = delta_quotient(Poly.parse("S+S^6", F2, ("S",)))
    expected = Poly.one(F2, UV)
    for i in range(6):
        expected = expected + Poly.monomial(F2, UV, (i, 5 - i))
    assert d == expected


def test_localize_examples():
    F = GF(3)
    xz = ("X1", "Z")
    a = localize(Poly.parse("X1^2*Z", F, xz), ["X1"])
    assert a * LaurentPoly(F, xz, ["X1"], {(-2, 0): 1}) == localize(Poly.parse("Z", F, xz), ["X1"])
    with pytest.raises(NotPolynomialError):
        delocalize(LaurentPoly(F, xz, ["X1"], {(-1, 1): 1}))
    with pytest.raises(ValueError):
        LaurentPoly(F, xz, ["X1"], {(0, -1): 1})
    # y -> F / x^2 with F = Z, then times x^2 gives Z back
    y_img = LaurentPoly(F, xz, ["X1"], {(-2, 1): 1})
    assert delocalize(y_img.monomial_shift((2, 0))) == Poly.parse("Z", F, xz)


def test_localize_roundtrip_random():
    rng = random.Random(11)
    for _ in range(50):
        a = rand_poly(rng, GF(5), VARS5)
        assert delocalize(localize(a, ["A", "B"])) == a


# --- canonical form and serialization -----------------------------------------

def test_no_zero_coefficients_and_canonical_order():
    F = GF(3)
    a = Poly(F, ZT, [((1, 0), 1), ((1, 0), 2), ((0, 2), 1), ((3, 0), 3)])
    assert a.terms() == {(0, 2): 1}
    b = P("T^3 + Z*T + Z^2 + 1", 3)
    keys = [e for e, _ in b.items()]
    assert keys == sorted(keys, reverse=True)


def test_poly_json_roundtrip_is_bit_exact():
    rng = random.Random(3)
    for F in (GF(2), GF(7), GF(2, [1, 1, 1])):
        for _ in range(20):
            a = rand_poly(rng, F, VARS5)
            d = a.to_json()
            text = json.dumps(d)
            b = Poly.from_json(json.loads(text))
            assert b == a
            assert json.dumps(b.to_json()) == text
            terms = [tuple(t[1]) for t in d["terms"]]
            assert terms == sorted(terms, reverse=True)
            if F.is_prime_field:
                assert all(0 <= t[0] < F.p for t in d["terms"])
                assert "ext" not in d
            else:
                assert d["ext"] == [1, 1, 1]


def test_exponent_overflow_is_loud():
    F = GF(2)
    big = Poly.monomial(F, ZT, (MAX_EXP, 0))
    with pytest.raises(OverflowError):
        big * P("Z")
    with pytest.raises(OverflowError):
        Poly.monomial(F, ZT, (MAX_EXP + 1, 0))


def test_parse_constant_and_generator():
    F4 = GF(2, [1, 1, 1])
    a = Poly.parse("w*Z + 1", F4, ZT)
    assert a.coeff((1, 0)) == F4.gen()
    assert isinstance(Poly.parse("0", GF(3), ZT), Poly)


# --- properties against sympy ---------------------------------------------------

def test_ring_axioms_random_triples():
    rng = random.Random(2024)
    for i in range(200):
        p = rng.choice([2, 3, 5, 7])
        F = GF(p)
        n = rng.randint(1, 5)
        vars = VARS5[:n]
        a, b, c = (rand_poly(rng, F, vars, max_deg=6) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a
        assert a * Poly.one(F, vars) == a
        if i % 4 == 0:
            prod = from_sympy(to_sympy(a) * to_sympy(b), F, vars)
            assert a * b == prod


def test_ring_axioms_extension_fields():
    rng = random.Random(7)
    for F in (GF(2, [1, 1, 1]), GF(3, [1, 0, 1]), GF(2, [1, 1, 0, 1])):
        for _ in range(40):
            a, b, c = (rand_poly(rng, F, ("A", "B", "C"), max_deg=4) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a + b) - b == a


def test_exact_div_random():
    rng = random.Random(99)
    for _ in range(100):
        F = GF(rng.choice([2, 3, 5]))
        vars = VARS5[:rng.randint(1, 4)]
        a = rand_poly(rng, F, vars, max_deg=5)
        b = rand_poly(rng, F, vars, max_deg=4, nonzero=True)
        assert exact_div(a * b, b) == a


def test_exact_div_nondivisible_agrees_with_sympy():
    rng = random.Random(5)
    seen = 0
    for _ in range(100):
        F = GF(rng.choice([2, 3]))
        vars = ("A", "B")
        a = rand_poly(rng, F, vars, max_deg=5, nonzero=True)
        b = rand_poly(rng, F, vars, max_deg=3, nonzero=True)
        q, rem = sympy.div(to_sympy(a), to_sympy(b))
        divisible = rem.is_zero
        if divisible:
            assert exact_div(a, b) == from_sympy(q, F, vars)
        else:
            # sympy's remainder is order-dependent; confirm with a multiply-back test
            try:
                qq = exact_div(a, b)
            except NotDivisibleError:
                seen += 1
                continue
            assert qq * b == a
    assert seen > 50


def test_substitute_multiplicative_random():
    rng = random.Random(17)
    for _ in range(100):
        F = GF(rng.choice([2, 3, 5]))
        dom = VARS5[:rng.randint(1, 3)]
        cod = ("S", "R")
        h = RingHom(dom, cod, {v: rand_poly(rng, F, cod, max_deg=3, max_terms=3) for v in dom}, F)
        a = rand_poly(rng, F, dom, max_deg=4)
        b = rand_poly(rng, F, dom, max_deg=4)
        assert h(a * b) == h(a) * h(b)
        assert h(a + b) == h(a) + h(b)


def test_substitute_matches_sympy_and_composes():
    rng = random.Random(23)
    for _ in range(30):
        F = GF(rng.choice([2, 3, 5]))
        dom = ("A", "B")
        mid = ("C", "D")
        cod = ("E",)
        h = RingHom(dom, mid, {v: rand_poly(rng, F, mid, 3, 3) for v in dom}, F)
        g = RingHom(mid, cod, {v: rand_poly(rng, F, cod, 3, 3) for v in mid}, F)
        a = rand_poly(rng, F, dom, 4)
        assert substitute(g.compose(h), a) == substitute(g, substitute(h, a))
        syms = sympy.symbols(dom)
        expr = to_sympy(a).as_expr().subs({s: to_sympy(h.images[v]).as_expr()
                                           for s, v in zip(syms, dom)}, simultaneous=True)
        oracle = from_sympy(sympy.Poly(expr, *sympy.symbols(mid), modulus=F.p), F, mid)
        assert h(a) == oracle


def test_frobenius_linearity():
    rng = random.Random(31)
    for _ in range(50):
        F = GF(rng.choice([2, 3, 5, 7]))
        vars = VARS5[:3]
        a = rand_poly(rng, F, vars, 4)
        b = rand_poly(rng, F, vars, 4)
        p = F.p
        assert (a + b) ** p == a ** p + b ** p
        assert a ** p == a.frobenius()


def test_power_matches_repeated_product_and_sympy():
    rng = random.Random(37)
    for _ in range(25):
        F = GF(rng.choice([2, 3, 5]))
        a = rand_poly(rng, F, ("A", "B"), 3, 4)
        n = rng.randint(0, 30)
        expected = Poly.one(F, ("A", "B"))
        for _ in range(n):
            expected = expected * a
        assert a ** n == expected
        assert a ** n == from_sympy(to_sympy(a) ** n, F, ("A", "B"))


def test_delta_quotient_random():
    rng = random.Random(41)
    for _ in range(40):
        F = GF(rng.choice([2, 3, 5]))
        Ps = rand_poly(rng, F, ("S",), max_deg=12, max_terms=8)
        UV = ("U", "V")
        d = delta_quotient(Ps)
        U, V = Poly.gens(F, UV)
        lhs = (U - V) * d
        rhs = Ps.subs({"S": U}, UV) - Ps.subs({"S": V}, UV)
        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5, 7]))
def test_hypothesis_additive_inverse_and_distributivity(seed, p):
    rng = random.Random(seed)
    F = GF(p)
    a, b, c = (rand_poly(rng, F, ("A", "B", "C"), 5) for _ in range(3))
    assert (a + b) - b == a
    assert a - a == Poly.zero(F, a.vars)
    assert (a + b) * c == a * c + b * c


def test_concurrent_use_is_safe():
    rng = random.Random(43)
    F = GF(3)
    pairs = [(rand_poly(rng, F, VARS5, 5), rand_poly(rng, F, VARS5, 5)) for _ in range(40)]
    expected = [a * b for a, b in pairs]
    results = [None] * len(pairs)

    def work(i):
        a, b = pairs[i]
        results[i] = a * b

    threads = [threading.Thread(target=work, args=(i,)) for i in range(len(pairs))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == expected


def test_polyring_protocol():
    R = PolyRing(GF(2), ("Z", "T"))
    RU = R.adjoin("U")
    assert RU.vars == ("Z", "T", "U")
    assert R.element("Z*T") == P("Z*T")
    assert PolyRing.from_json(R.to_json()) == R
