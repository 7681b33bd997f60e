"""The ring A = k[X1..Xm, Y, Z, T] / (X1^r1 ... Xm^rm Y - F) and its elements.

Elements are stored in the unique monomial basis

    x^i z^j1 t^j2 y^l  (plus adjoined free variables),  with i_s < r_s for some s
    whenever l > 0,

so equality of elements is equality of their stored polynomials.  The map
y -> F / x^r into the Laurent ring B[(x1...xm)^-1] is kept as an independent
way to compare elements.
"""
from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from typing import Mapping, Sequence

from .polyring import (
    GF, ContextMismatchError, LaurentPoly, Poly, _coerce_vars, _pack, _unpack,
)

__all__ = [
    "Presentation", "AElem", "HypothesisError", "NotADomainError",
    "new_presentation", "normal_form", "to_localization", "in_B",
]

BASE_NAMES = ("Y", "Z", "T")


class HypothesisError(ValueError):
    """An exponent r_i <= 1."""


class NotADomainError(ValueError):
    """F = 0 or some x_j divides F, so the quotient is not a domain."""


class Presentation:
    """Exponent data (r_1..r_m) and F in k[X1..Xm, Z, T], plus adjoined free variables."""

    def __init__(self, field: GF, r: Sequence[int], F: Poly,
                 extra_vars: Sequence[str] = (), xvars: Sequence[str] | None = None):
        self.field = field
        self.r = tuple(int(e) for e in r)
        if xvars is None:
            xvars = tuple(f"X{i + 1}" for i in range(len(self.r)))
        self.xvars = _coerce_vars(xvars)
        if len(self.xvars) != len(self.r):
            raise ValueError("need one exponent per x-variable")
        self.extra_vars = _coerce_vars(extra_vars)
        self.vars = _coerce_vars(self.xvars + BASE_NAMES + self.extra_vars)
        for i, e in enumerate(self.r):
            if e <= 1:
                raise HypothesisError(f"r_{i + 1} = {e}; every exponent must exceed 1")
        if F.field != field:
            raise ContextMismatchError("F lives over a different field")
        fvars = self.xvars + ("Z", "T")
        self.F = F.embed(fvars)
        if not self.F:
            raise NotADomainError("F = 0")
        for x in self.xvars:
            if not self.F.subs({x: 0}):
                raise NotADomainError(f"{x} divides F")

    # ring protocol ---------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.r)

    @property
    def gens(self) -> tuple[str, ...]:
        return self.vars

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.xvars + ("Z", "T")

    @cached_property
    def F_full(self) -> Poly:
        return self.F.embed(self.vars)

    @cached_property
    def xr(self) -> Poly:
        """The monomial x1^r1 ... xm^rm."""
        return Poly.monomial(self.field, self.vars, self.r + (0,) * (len(self.vars) - self.m))

    @cached_property
    def relation(self) -> Poly:
        return self.xr * Poly.gen(self.field, self.vars, "Y") - self.F_full

    @cached_property
    def _relkey(self) -> int:
        exps = list(self.r) + [1] + [0] * (len(self.vars) - self.m - 1)
        return _pack(exps)

    @cached_property
    def _Fpowers(self) -> dict:
        return {1: self.F_full}

    def _Fpow(self, k: int) -> Poly:
        cache = self._Fpowers
        if k not in cache:
            cache[k] = self.F_full ** k
        return cache[k]

    def is_reducible_exps(self, exps: Sequence[int]) -> bool:
        m = self.m
        return exps[m] > 0 and all(exps[i] >= self.r[i] for i in range(m))

    def reduce(self, poly: Poly) -> Poly:
        """Normal form (y-reduced, x^r y rewritten) of a polynomial over this presentation's variables."""
        if poly.field != self.field:
            raise ContextMismatchError("field mismatch")
        if poly.vars != self.vars:
            poly = poly.embed(self.vars)
        F = self.field
        m, r, n = self.m, self.r, len(self.vars)
        relkey = self._relkey
        result: dict[int, object] = {}
        todo = poly
        while todo:
            groups: dict[int, dict] = defaultdict(dict)
            for key, c in todo._t.items():
                exps = _unpack(key, n)
                k = exps[m]
                for i in range(m):
                    if k == 0:
                        break
                    q = exps[i] // r[i]
                    if q < k:
                        k = q
                if k == 0:
                    result[key] = F.add(result.get(key, F.zero), c)
                else:
                    groups[k][key - k * relkey] = c
            todo = Poly._make(F, self.vars, {})
            for k in sorted(groups):
                todo = todo + Poly._make(F, self.vars, groups[k]) * self._Fpow(k)
        return Poly._make(F, self.vars, {k: c for k, c in result.items() if c != F.zero})

    def element(self, value) -> "AElem":
        if isinstance(value, AElem):
            if value.ring != self:
                raise ContextMismatchError("element of a different presentation")
            return value
        if isinstance(value, str):
            value = Poly.parse(value, self.field, self.vars)
        elif not isinstance(value, Poly):
            value = Poly.const(self.field, self.vars, self.field(value))
        return AElem(self, self.reduce(value))

    def gen(self, name: str) -> "AElem":
        return AElem(self, Poly.gen(self.field, self.vars, name))

    def zero(self) -> "AElem":
        return AElem(self, Poly.zero(self.field, self.vars))

    def one(self) -> "AElem":
        return AElem(self, Poly.one(self.field, self.vars))

    def adjoin(self, *names: str) -> "Presentation":
        clash = set(names) & set(self.vars)
        if clash:
            raise ContextMismatchError(f"variables {sorted(clash)} already present")
        return Presentation(self.field, self.r, self.F, self.extra_vars + tuple(names), self.xvars)

    def with_F(self, F: Poly) -> "Presentation":
        return Presentation(self.field, self.r, F, self.extra_vars, self.xvars)

    def base(self) -> "Presentation":
        """The same presentation without adjoined variables."""
        return Presentation(self.field, self.r, self.F, (), self.xvars)

    def is_x_free(self) -> bool:
        return not set(self.F.used_vars()) & set(self.xvars)

    # comparison / io -------------------------------------------------------
    def _key(self):
        return (self.field, self.r, self.xvars, self.extra_vars, self.F)

    def __eq__(self, other):
        return isinstance(other, Presentation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        xr = "*".join(f"{x}^{e}" for x, e in zip(self.xvars, self.r)) or "1"
        extra = f"[{','.join(self.extra_vars)}]" if self.extra_vars else ""
        return f"Presentation({self.field}: {xr}*Y - ({self.F})){extra}"

    def to_json(self) -> dict:
        d = self.field.to_json()
        d.update({"m": self.m, "r": list(self.r), "F": self.F.to_json(),
                  "extra_vars": list(self.extra_vars)})
        if self.xvars != tuple(f"X{i + 1}" for i in range(self.m)):
            d["xvars"] = list(self.xvars)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Presentation":
        field = GF.from_json(d)
        r = d["r"]
        if "m" in d and d["m"] != len(r):
            raise ValueError(f"m = {d['m']} does not match r = {r}")
        F = Poly.from_json(d["F"])
        if F.field != field:
            raise ContextMismatchError("F's field differs from the presentation's field")
        return cls(field, r, F, d.get("extra_vars", ()), d.get("xvars"))


def new_presentation(field: GF, m: int, r: Sequence[int], F: Poly | str,
                     extra_vars: Sequence[str] = ()) -> Presentation:
    if len(r) != m:
        raise ValueError(f"m = {m} but {len(r)} exponents given")
    if isinstance(F, str):
        F = Poly.parse(F, field, tuple(f"X{i + 1}" for i in range(m)) + ("Z", "T"))
    return Presentation(field, r, F, extra_vars)


class AElem:
    """Element of a presentation, held in normal form."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: Presentation, poly: Poly):
        self.ring = ring
        self.poly = poly

    def _other(self, other) -> "AElem":
        if isinstance(other, AElem):
            if other.ring != self.ring:
                raise ContextMismatchError("elements of different presentations")
            return other
        if isinstance(other, (int, tuple)):
            return self.ring.element(other)
        if isinstance(other, Poly):
            return self.ring.element(other)
        raise TypeError(f"cannot combine AElem with {type(other).__name__}")

    def __add__(self, other):
        # sums of normal forms are normal
        return AElem(self.ring, self.poly + self._other(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return AElem(self.ring, self.poly - self._other(other).poly)

    def __rsub__(self, other):
        return AElem(self.ring, self._other(other).poly - self.poly)

    def __neg__(self):
        return AElem(self.ring, -self.poly)

    def __mul__(self, other):
        return AElem(self.ring, self.ring.reduce(self.poly * self._other(other).poly))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return AElem(self.ring, self.ring.reduce(self.poly ** n))

    def __eq__(self, other):
        if isinstance(other, AElem):
            return self.ring == other.ring and self.poly == other.poly
        if isinstance(other, (int, Poly)):
            return self == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __bool__(self):
        return bool(self.poly)

    def is_zero(self) -> bool:
        return not self.poly

    def y_degree(self) -> int:
        return self.poly.degree("Y")

    def in_B(self) -> bool:
        return in_B(self)

    def to_localization(self) -> LaurentPoly:
        return to_localization(self)

    def subs(self, images: Mapping[str, object]) -> "AElem":
        imgs = {k: (v.poly if isinstance(v, AElem) else v) for k, v in images.items()}
        return self.ring.element(self.poly.subs(imgs))

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"AElem({self.poly})"

    def to_json(self) -> dict:
        return self.poly.to_json()


def normal_form(pres: Presentation, raw: Poly, rng=None) -> AElem:
    """Rewrite x^r*y -> F until every monomial with y satisfies i_s < r_s for some s.

    With ``rng`` (a ``random.Random``) one rewrite is applied at a time to a
    randomly chosen reducible monomial; the result must not depend on it.
    """
    if rng is None:
        return AElem(pres, pres.reduce(raw))
    raw = raw.embed(pres.vars)
    F = pres.field
    n = len(pres.vars)
    relkey = pres._relkey
    cur = dict(raw._t)
    while True:
        reducible = sorted(k for k in cur if pres.is_reducible_exps(_unpack(k, n)))
        if not reducible:
            break
        key = rng.choice(reducible)
        c = cur.pop(key)
        repl = pres.F_full.mul_monomial(key - relkey, c)
        for k2, c2 in repl._t.items():
            v = F.add(cur.get(k2, F.zero), c2)
            if v == F.zero:
                cur.pop(k2, None)
            else:
                cur[k2] = v
    return AElem(pres, Poly._make(F, pres.vars, cur))


def _localized_vars(pres: Presentation) -> tuple[str, ...]:
    return pres.xvars + ("Z", "T") + pres.extra_vars


def to_localization(a: AElem) -> LaurentPoly:
    """Image of ``a`` in B[(x1...xm)^-1][extras] under y -> F * x^-r."""
    pres = a.ring
    F = pres.field
    lvars = _localized_vars(pres)
    m = pres.m
    inv = pres.xvars
    Fl = LaurentPoly(F, lvars, inv, {e + (0,) * len(pres.extra_vars): c
                                     for e, c in pres.F.terms().items()})
    y_img = Fl.monomial_shift(tuple(-e for e in pres.r) + (0,) * (len(lvars) - m))
    ypows = {0: LaurentPoly(F, lvars, inv, {(0,) * len(lvars): F.one})}
    total = LaurentPoly(F, lvars, inv)
    for exps, c in a.poly.terms().items():
        ell = exps[m]
        if ell not in ypows:
            ypows[ell] = y_img ** ell
        rest = exps[:m] + exps[m + 1:]
        term = ypows[ell].monomial_shift(rest)
        total = total + LaurentPoly._make(term, {e: F.mul(v, c) for e, v in term._t.items()})
    return total


def in_B(a: AElem) -> bool:
    """True iff ``a`` lies in k[x1..xm, z, t] (plus adjoined variables): no y in its normal form."""
    return a.poly.degree("Y") <= 0
