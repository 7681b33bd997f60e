import json
import random

import pytest

from noncancel.asanuma import (
    AElem, HypothesisError, NotADomainError, Presentation, in_B, new_presentation,
    normal_form, to_localization,
)
from noncancel.polyring import GF, ContextMismatchError, LaurentPoly, Poly

from helpers import rand_presentation, rand_raw

F2 = GF(2)
NAGATA_23 = "Z^4 + T + T^6"


@pytest.fixture
def A1():
    return new_presentation(F2, 1, (2,), NAGATA_23)


def loc(pres, text):
    """Element of B[x^-1] written as a polynomial times x^shift."""
    lv = pres.xvars + ("Z", "T") + pres.extra_vars
    return LaurentPoly(pres.field, lv, pres.xvars, Poly.parse(text, pres.field, lv).terms())


# --- presentation validation -------------------------------------------------

def test_new_presentation_examples():
    A = new_presentation(F2, 1, (2,), NAGATA_23)
    assert A.m == 1 and A.r == (2,)
    assert A.gens == ("X1", "Y", "Z", "T")
    with pytest.raises(HypothesisError):
        new_presentation(F2, 1, (1,), "Z")
    with pytest.raises(NotADomainError):
        new_presentation(F2, 2, (2, 2), "X1*Z")
    with pytest.raises(NotADomainError):
        new_presentation(F2, 1, (2,), "0")


def test_presentation_json_roundtrip():
    A = new_presentation(GF(3), 2, (2, 3), "Z^9 + T + T^6 + X1*X2*Z", extra_vars=("W",))
    d = A.to_json()
    assert set(d) >= {"p", "m", "r", "F", "extra_vars"}
    assert Presentation.from_json(json.loads(json.dumps(d))) == A


def test_m_zero_presentation_is_polynomial_in_z_t():
    A0 = Presentation(GF(3), (), Poly.parse("Z + T^2", GF(3), ("Z", "T")))
    assert A0.element("Y") == A0.element("Z + T^2")
    assert A0.element("Y^2").in_B()


# --- normal form ---------------------------------------------------------------

def test_normal_form_examples(A1):
    f = A1.element(NAGATA_23)
    assert A1.element("X1^2*Y") == f
    a = A1.element("X1^3*Y^2")
    assert a == A1.element("X1*Y") * f
    assert all(e[0] < 2 for e, _ in a.poly.items() if e[1] > 0)
    assert a.to_localization() == loc(A1, "(Z^4+T+T^6)^2") * LaurentPoly(
        F2, ("X1", "Z", "T"), ("X1",), {(-1, 0, 0): 1})
    assert A1.element("Z+T").poly == Poly.parse("Z+T", F2, A1.vars)


def test_arith_examples(A1):
    x, y = A1.gen("X1"), A1.gen("Y")
    assert x * x * y == A1.element(NAGATA_23)
    a = A1.element("X1*Z + Y*T + 1")
    assert a * 1 == a and a * A1.one() == a
    xy2 = (x * y) * (x * y)
    assert xy2 == y * A1.element(NAGATA_23)
    lhs = xy2.to_localization()
    xm2 = LaurentPoly(F2, ("X1", "Z", "T"), ("X1",), {(-2, 0, 0): 1})
    assert lhs == loc(A1, "(Z^4+T+T^6)^2") * xm2


def test_arith_presentation_mismatch(A1):
    B = new_presentation(F2, 1, (3,), NAGATA_23)
    with pytest.raises(ContextMismatchError):
        A1.gen("Y") + B.gen("Y")


def test_to_localization_examples(A1):
    xm2 = LaurentPoly(F2, ("X1", "Z", "T"), ("X1",), {(-2, 0, 0): 1})
    assert A1.gen("Y").to_localization() == loc(A1, NAGATA_23) * xm2
    assert A1.gen("Z").to_localization() == loc(A1, "Z")
    xyf = A1.element("X1*Y") * A1.element(NAGATA_23)
    xm1 = LaurentPoly(F2, ("X1", "Z", "T"), ("X1",), {(-1, 0, 0): 1})
    assert to_localization(xyf) == loc(A1, "(Z^4+T+T^6)^2") * xm1


def test_in_B_examples():
    A = new_presentation(GF(3), 2, (2, 2), "Z^9 + T + T^6")
    assert in_B(A.element("Z^2*T"))
    assert not in_B(A.element("X1*Y"))
    assert in_B(A.element("X1^2*X2^2*Y"))


def test_adjoined_variables_are_free():
    A = new_presentation(F2, 1, (2,), NAGATA_23, extra_vars=("W",))
    AU = A.adjoin("U")
    assert AU.vars[-2:] == ("W", "U")
    a = AU.element("X1^2*Y*W*U")
    assert a == AU.element("(Z^4+T+T^6)*W*U")
    assert A.base().extra_vars == ()


def test_element_from_other_presentation_rejected(A1):
    B = new_presentation(F2, 1, (2,), "Z + T")
    with pytest.raises(ContextMismatchError):
        A1.element(B.gen("Z"))


# --- properties -------------------------------------------------------------------

def _check_eq1(a: AElem):
    pres = a.ring
    for e, _ in a.poly.items():
        if e[pres.m] > 0:
            assert any(e[i] < pres.r[i] for i in range(pres.m)), e


def test_confluence_randomized_orders():
    rng = random.Random(101)
    for _ in range(200):
        pres = rand_presentation(rng)
        raw = rand_raw(rng, pres)
        ref = normal_form(pres, raw)
        alt = normal_form(pres, raw, rng=random.Random(rng.random()))
        assert alt == ref
        _check_eq1(ref)


def test_normal_form_is_idempotent():
    rng = random.Random(102)
    for _ in range(100):
        pres = rand_presentation(rng)
        a = normal_form(pres, rand_raw(rng, pres))
        assert normal_form(pres, a.poly).poly == a.poly


def test_multiplication_agrees_with_localization():
    rng = random.Random(103)
    for _ in range(500):
        pres = rand_presentation(rng)
        a = normal_form(pres, rand_raw(rng, pres, max_deg=4, max_terms=4, max_y=2))
        b = normal_form(pres, rand_raw(rng, pres, max_deg=4, max_terms=4, max_y=2))
        assert (a * b).to_localization() == a.to_localization() * b.to_localization()


def test_localization_is_injective_on_normal_forms():
    rng = random.Random(104)
    for _ in range(100):
        pres = rand_presentation(rng)
        a = normal_form(pres, rand_raw(rng, pres))
        b = normal_form(pres, rand_raw(rng, pres))
        assert (a == b) == (a.to_localization() == b.to_localization())
        assert (a - a).to_localization() == LaurentPoly(
            pres.field, pres.xvars + ("Z", "T"), pres.xvars)


def test_domain_products_nonzero():
    rng = random.Random(105)
    done = 0
    while done < 200:
        pres = rand_presentation(rng)
        a = normal_form(pres, rand_raw(rng, pres, max_deg=4, max_terms=4, max_y=2))
        b = normal_form(pres, rand_raw(rng, pres, max_deg=4, max_terms=4, max_y=2))
        if a.is_zero() or b.is_zero():
            continue
        assert not (a * b).is_zero()
        done += 1


def test_ring_axioms_in_A():
    rng = random.Random(106)
    for _ in range(60):
        pres = rand_presentation(rng)
        a, b, c = (normal_form(pres, rand_raw(rng, pres, 3, 3, 2)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
