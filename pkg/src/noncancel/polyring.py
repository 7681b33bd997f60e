"""Exact sparse multivariate polynomials over F_p and F_{p^e}.

Exponent vectors are packed into a single Python int (``_BITS`` bits per
variable, first variable most significant), so adding exponent vectors is one
integer addition and descending integer order *is* descending lex order.
Every operation that can grow exponents checks against ``MAX_EXP`` and raises
``OverflowError`` rather than letting one slot carry into the next.
"""
from __future__ import annotations

import ast
import heapq
import itertools
from collections import defaultdict
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "GF", "Poly", "LaurentPoly", "PolyRing", "RingHom",
    "ContextMismatchError", "NotDivisibleError", "NotPolynomialError",
    "is_prime", "exact_div", "substitute", "delta_quotient",
    "localize", "delocalize", "MAX_EXP",
]

_BITS = 24
_MASK = (1 << _BITS) - 1
MAX_EXP = _MASK


class ContextMismatchError(ValueError):
    """Operands live over different fields or variable lists."""


class NotDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder."""


class NotPolynomialError(ValueError):
    """A Laurent polynomial with a negative exponent was asked to be a polynomial."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13):
        if n % d == 0:
            return n == d
    i = 17
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

def _upoly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic, low-to-high
    a = [c % p for c in a]
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * mod[j]) % p
    a = a[:d] + [0] * max(0, d - len(a))
    return a


def _upoly_divides(div: Sequence[int], a: Sequence[int], p: int) -> bool:
    """True iff the monic polynomial ``div`` divides ``a`` over F_p."""
    return not any(_upoly_mod(list(a), div, p))


class GF:
    """The field F_p, or F_p[w]/(modulus) when ``modulus`` is given.

    Prime-field elements are plain ints in ``range(p)``.  Extension elements
    are tuples of length ``degree`` (coefficients of 1, w, w^2, ...).
    """

    __slots__ = ("p", "modulus", "degree", "zero", "one", "_hash")

    def __init__(self, p: int, modulus: Sequence[int] | None = None):
        p = int(p)
        if not (2 <= p < 2**31) or not is_prime(p):
            raise ValueError(f"characteristic must be a prime below 2**31, got {p}")
        self.p = p
        if modulus is None:
            self.modulus = None
            self.degree = 1
            self.zero, self.one = 0, 1
        else:
            mod = tuple(int(c) % p for c in modulus)
            while mod and mod[-1] == 0:
                mod = mod[:-1]
            if len(mod) < 3 or mod[-1] != 1:
                raise ValueError("extension modulus must be monic of degree >= 2")
            if len(mod) - 1 > 8:
                raise ValueError("extension degree above 8 is not supported")
            if not _irreducible(mod, p):
                raise ValueError(f"modulus {list(mod)} is reducible over F_{p}")
            self.modulus = mod
            self.degree = len(mod) - 1
            self.zero = (0,) * self.degree
            self.one = (1,) + (0,) * (self.degree - 1)
        self._hash = hash((self.p, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.modulus is None

    @property
    def order(self) -> int:
        return self.p ** self.degree

    def __eq__(self, other):
        return isinstance(other, GF) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.modulus is None:
            return f"GF({self.p})"
        return f"GF({self.p}, {list(self.modulus)})"

    # element construction -------------------------------------------------
    def __call__(self, value) -> object:
        """Coerce an int (or coefficient list for extensions) to a field element."""
        if self.modulus is None:
            if isinstance(value, (list, tuple)):
                raise TypeError("prime-field elements are ints")
            return int(value) % self.p
        if isinstance(value, (list, tuple)):
            vals = [int(c) for c in value]
            if len(vals) > self.degree:
                vals = _upoly_mod(vals, self.modulus, self.p)
            return tuple(c % self.p for c in vals) + (0,) * (self.degree - len(vals))
        return (int(value) % self.p,) + (0,) * (self.degree - 1)

    def gen(self):
        """The class of w in F_p[w]/(modulus)."""
        if self.modulus is None:
            raise ValueError("prime field has no extension generator")
        return self([0, 1])

    def elements(self) -> Iterator:
        if self.modulus is None:
            yield from range(self.p)
        else:
            for digits in itertools.product(range(self.p), repeat=self.degree):
                yield tuple(reversed(digits))

    def contains(self, c) -> bool:
        if self.modulus is None:
            return isinstance(c, int) and 0 <= c < self.p
        return isinstance(c, tuple) and len(c) == self.degree and all(0 <= x < self.p for x in c)

    # arithmetic ------------------------------------------------------------
    def add(self, a, b):
        if self.modulus is None:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.modulus is None:
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.modulus is None:
            return -a % self.p
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        if self.modulus is None:
            return a * b % self.p
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return tuple(_upoly_mod(prod, self.modulus, self.p))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.modulus is None:
            return pow(a, n, self.p)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.modulus is None:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.order - 2)

    def frob(self, a):
        """a -> a^p."""
        if self.modulus is None:
            return a
        return self.pow(a, self.p)

    # serialization ---------------------------------------------------------
    def encode(self, c):
        return c if self.modulus is None else list(c)

    def to_json(self) -> dict:
        d = {"p": self.p}
        if self.modulus is not None:
            d["ext"] = list(self.modulus)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "GF":
        return cls(d["p"], d.get("ext"))


def _irreducible(mod: Sequence[int], p: int) -> bool:
    d = len(mod) - 1
    # any factor has a monic factor of degree <= d // 2
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            cand = list(tail) + [1]
            if _upoly_divides(cand, mod, p):
                return False
    return True


# ---------------------------------------------------------------------------
# Packing helpers
# ---------------------------------------------------------------------------

def _pack(exps: Iterable[int]) -> int:
    key = 0
    for e in exps:
        if e < 0:
            raise ValueError("negative exponent in a polynomial")
        if e > MAX_EXP:
            raise OverflowError(f"exponent {e} exceeds {MAX_EXP}")
        key = (key << _BITS) | e
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = key & _MASK
        key >>= _BITS
    return tuple(out)


def _unit_key(i: int, n: int) -> int:
    return 1 << (_BITS * (n - 1 - i))


def _key_divides(kd: int, k: int, n: int) -> bool:
    for _ in range(n):
        if (kd & _MASK) > (k & _MASK):
            return False
        kd >>= _BITS
        k >>= _BITS
    return True


def _coerce_vars(vars) -> tuple[str, ...]:
    vs = tuple(vars)
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate variable names in {vs}")
    for v in vs:
        if not isinstance(v, str) or not v.isidentifier():
            raise ValueError(f"bad variable name {v!r}")
    return vs


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

class Poly:
    """Immutable sparse polynomial over ``field`` in the ordered variables ``vars``."""

    __slots__ = ("field", "vars", "_t", "_maxdeg", "_hash")

    def __init__(self, field: GF, vars: Sequence[str], terms=None):
        self.field = field
        self.vars = _coerce_vars(vars)
        t: dict[int, object] = {}
        n = len(self.vars)
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exps, c in items:
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError(f"exponent vector {exps} has wrong length for {self.vars}")
                key = _pack(exps)
                c = field(c)
                if key in t:
                    c = field.add(t[key], c)
                if c == field.zero:
                    t.pop(key, None)
                else:
                    t[key] = c
        self._t = t
        self._maxdeg = None
        self._hash = None

    @classmethod
    def _make(cls, field, vars, t) -> "Poly":
        obj = object.__new__(cls)
        obj.field = field
        obj.vars = vars
        obj._t = t
        obj._maxdeg = None
        obj._hash = None
        return obj

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field, vars) -> "Poly":
        return cls._make(field, _coerce_vars(vars), {})

    @classmethod
    def const(cls, field, vars, c) -> "Poly":
        c = field(c) if not field.contains(c) else c
        vars = _coerce_vars(vars)
        return cls._make(field, vars, {} if c == field.zero else {0: c})

    @classmethod
    def one(cls, field, vars) -> "Poly":
        return cls.const(field, vars, field.one)

    @classmethod
    def gen(cls, field, vars, name: str) -> "Poly":
        vars = _coerce_vars(vars)
        if name not in vars:
            raise ContextMismatchError(f"{name!r} is not one of {vars}")
        return cls._make(field, vars, {_unit_key(vars.index(name), len(vars)): field.one})

    @classmethod
    def gens(cls, field, vars) -> tuple["Poly", ...]:
        vars = _coerce_vars(vars)
        return tuple(cls.gen(field, vars, v) for v in vars)

    @classmethod
    def monomial(cls, field, vars, exps: Sequence[int], c=None) -> "Poly":
        vars = _coerce_vars(vars)
        c = field.one if c is None else field(c)
        if c == field.zero:
            return cls._make(field, vars, {})
        return cls._make(field, vars, {_pack(exps): c})

    @classmethod
    def parse(cls, text: str, field: GF, vars: Sequence[str]) -> "Poly":
        """Parse an expression such as ``"Z^4 + T + T^6 + 2*X1*Z"``."""
        vars = _coerce_vars(vars)
        env = {v: cls.gen(field, vars, v) for v in vars}
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        val = _eval_ast(tree.body, env, field, vars)
        return val if isinstance(val, Poly) else cls.const(field, vars, field(val))

    # basic access ----------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_coeff(self):
        return self._t.get(0, self.field.zero)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def items(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """(exponent tuple, coefficient) pairs in descending lex order."""
        n = len(self.vars)
        for key in sorted(self._t, reverse=True):
            yield _unpack(key, n), self._t[key]

    def terms(self) -> dict[tuple[int, ...], object]:
        n = len(self.vars)
        return {_unpack(k, n): c for k, c in self._t.items()}

    def coeff(self, exps: Sequence[int]):
        return self._t.get(_pack(exps), self.field.zero)

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        key = max(self._t)
        return _unpack(key, len(self.vars)), self._t[key]

    def max_degrees(self) -> tuple[int, ...]:
        if self._maxdeg is None:
            n = len(self.vars)
            md = [0] * n
            for key in self._t:
                for i, e in enumerate(_unpack(key, n)):
                    if e > md[i]:
                        md[i] = e
            self._maxdeg = tuple(md)
        return self._maxdeg

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``.  The zero polynomial has degree -1."""
        if not self._t:
            return -1
        if var is not None:
            return self.max_degrees()[self._index(var)]
        n = len(self.vars)
        return max(sum(_unpack(k, n)) for k in self._t)

    total_degree = degree

    def used_vars(self) -> tuple[str, ...]:
        md = self.max_degrees() if self._t else (0,) * len(self.vars)
        return tuple(v for v, d in zip(self.vars, md) if d)

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ContextMismatchError(f"{var!r} is not one of {self.vars}") from None

    # equality --------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.vars == other.vars and self._t == other._t
        if isinstance(other, int) or (isinstance(other, tuple) and self.field.modulus):
            c = self.field(other)
            return self._t == ({} if c == self.field.zero else {0: c})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.vars, frozenset(self._t.items())))
        return self._hash

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.field != other.field:
            raise ContextMismatchError(f"field mismatch: {self.field} vs {other.field}")
        if self.vars != other.vars:
            raise ContextMismatchError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, tuple, list)):
            return Poly.const(self.field, self.vars, self.field(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        F = self.field
        t = dict(self._t)
        if F.modulus is None:
            p = F.p
            for k, c in other._t.items():
                v = (t.get(k, 0) + c) % p
                if v:
                    t[k] = v
                else:
                    t.pop(k, None)
        else:
            zero = F.zero
            for k, c in other._t.items():
                v = F.add(t.get(k, zero), c)
                if v != zero:
                    t[k] = v
                else:
                    t.pop(k, None)
        return Poly._make(F, self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly._make(F, self.vars, {k: F.neg(c) for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Poly":
        F = self.field
        c = c if F.contains(c) else F(c)
        if c == F.zero:
            return Poly._make(F, self.vars, {})
        return Poly._make(F, self.vars, {k: F.mul(v, c) for k, v in self._t.items()})

    def _overflow_check(self, other: "Poly"):
        if not self._t or not other._t:
            return
        for a, b in zip(self.max_degrees(), other.max_degrees()):
            if a + b > MAX_EXP:
                raise OverflowError("exponent overflow in polynomial product")

    def __mul__(self, other):
        if isinstance(other, (int, tuple, list)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self._t or not other._t:
            return Poly._make(self.field, self.vars, {})
        self._overflow_check(other)
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        F = self.field
        if F.modulus is None:
            p = F.p
            out: dict[int, int] = {}
            get = out.get
            for kb, cb in b.items():
                for ka, ca in a.items():
                    k = ka + kb
                    out[k] = get(k, 0) + ca * cb
            t = {}
            for k, c in out.items():
                c %= p
                if c:
                    t[k] = c
        else:
            zero, add, mul = F.zero, F.add, F.mul
            out = {}
            get = out.get
            for kb, cb in b.items():
                for ka, ca in a.items():
                    k = ka + kb
                    out[k] = add(get(k, zero), mul(ca, cb))
            t = {k: c for k, c in out.items() if c != zero}
        return Poly._make(F, self.vars, t)

    __rmul__ = __mul__

    def mul_monomial(self, exps: Sequence[int] | int, c=None) -> "Poly":
        key = exps if isinstance(exps, int) else _pack(exps)
        n = len(self.vars)
        md = self.max_degrees() if self._t else (0,) * n
        for a, b in zip(md, _unpack(key, n)):
            if a + b > MAX_EXP:
                raise OverflowError("exponent overflow in monomial shift")
        F = self.field
        if c is None:
            return Poly._make(F, self.vars, {k + key: v for k, v in self._t.items()})
        c = F(c) if not F.contains(c) else c
        if c == F.zero:
            return Poly._make(F, self.vars, {})
        return Poly._make(F, self.vars, {k + key: F.mul(v, c) for k, v in self._t.items()})

    def frobenius(self) -> "Poly":
        """self^p computed termwise: (sum c m)^p = sum c^p m^p in characteristic p."""
        F = self.field
        p = F.p
        if self._t and max(self.max_degrees()) * p > MAX_EXP:
            raise OverflowError("exponent overflow in Frobenius")
        return Poly._make(F, self.vars, {k * p: F.frob(c) for k, c in self._t.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative power of a polynomial")
        F = self.field
        if n == 0:
            return Poly.one(F, self.vars)
        if not self._t:
            return self
        if max(self.max_degrees()) * n > MAX_EXP:
            raise OverflowError("exponent overflow in power")
        if len(self._t) == 1:
            (k, c), = self._t.items()
            return Poly._make(F, self.vars, {k * n: F.pow(c, n)})
        # a^n = prod_k frob^k(a^{d_k}) over the base-p digits d_k of n
        p = F.p
        result = None
        base = self
        while n:
            n, d = divmod(n, p)
            if d:
                part = base._small_pow(d)
                result = part if result is None else result * part
            if n:
                base = base.frobenius()
        return result

    def _small_pow(self, d: int) -> "Poly":
        result = None
        base = self
        while d:
            if d & 1:
                result = base if result is None else result * base
            d >>= 1
            if d:
                base = base * base
        return result

    # variable management ---------------------------------------------------
    def embed(self, vars: Sequence[str]) -> "Poly":
        """Same polynomial viewed over a variable list containing all used variables."""
        vars = _coerce_vars(vars)
        if vars == self.vars:
            return self
        n, n2 = len(self.vars), len(vars)
        pos = {}
        for i, v in enumerate(self.vars):
            if v in vars:
                pos[i] = vars.index(v)
        units = {i: _unit_key(j, n2) for i, j in pos.items()}
        t = {}
        for k, c in self._t.items():
            nk = 0
            for i, e in enumerate(_unpack(k, n)):
                if e:
                    if i not in units:
                        raise ContextMismatchError(
                            f"variable {self.vars[i]!r} is used but absent from {vars}")
                    nk += e * units[i]
            t[nk] = c
        return Poly._make(self.field, vars, t)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly._make(self.field, _coerce_vars(mapping.get(v, v) for v in self.vars), self._t)

    def change_field(self, field: GF) -> "Poly":
        """Push a prime-field polynomial into an extension of the same characteristic."""
        if field.p != self.field.p:
            raise ContextMismatchError("characteristic mismatch")
        if field == self.field:
            return self
        if not self.field.is_prime_field:
            raise ContextMismatchError("can only lift from the prime field")
        return Poly._make(field, self.vars, {k: field(c) for k, c in self._t.items()})

    def subs(self, images: Mapping[str, object], vars: Sequence[str] | None = None) -> "Poly":
        """Substitute ``images[v]`` for each listed variable; result lives over ``vars``.

        Variables without an image are kept (they must appear in ``vars``).
        Images may be Polys over ``vars`` or field constants.
        """
        vars = self.vars if vars is None else _coerce_vars(vars)
        F = self.field
        imgs = []
        for v in self.vars:
            if v in images:
                img = images[v]
                if isinstance(img, Poly):
                    if img.field != F:
                        raise ContextMismatchError("image over a different field")
                    if img.vars != vars:
                        img = img.embed(vars)
                else:
                    img = Poly.const(F, vars, F(img) if not F.contains(img) else img)
                imgs.append(img)
            elif v in vars:
                imgs.append(None)  # identity: handled by a cheap monomial shift
            else:
                raise ContextMismatchError(f"no image for variable {v!r}")
        extra = set(images) - set(self.vars)
        if extra:
            raise ContextMismatchError(f"images given for unknown variables {sorted(extra)}")
        return _substitute_terms(self, imgs, vars)

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at field values for every variable."""
        res = self.subs(point, vars=())
        return res.constant_coeff()

    def univariate_coeffs(self, var: str) -> dict[int, "Poly"]:
        """Split as sum_i c_i * var^i with var-free c_i (same variable list)."""
        i = self._index(var)
        n = len(self.vars)
        shift = _BITS * (n - 1 - i)
        out: dict[int, dict] = defaultdict(dict)
        for k, c in self._t.items():
            e = (k >> shift) & _MASK
            out[e][k - (e << shift)] = c
        return {e: Poly._make(self.field, self.vars, t) for e, t in sorted(out.items())}

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        d = self.field.to_json()
        d["vars"] = list(self.vars)
        d["terms"] = [[self.field.encode(c), list(e)] for e, c in self.items()]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Poly":
        field = GF.from_json(d)
        vars = _coerce_vars(d["vars"])
        for c, e in d["terms"]:
            if field.modulus is None and not (isinstance(c, int) and 0 <= c < field.p):
                raise ValueError(f"coefficient {c!r} not in 0..{field.p - 1}")
        return cls(field, vars, [(tuple(e), c) for c, e in d["terms"]])

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e)
            if self.field.modulus is None:
                cs = str(c)
            else:
                cs = "(" + "+".join(
                    ("w" if i == 1 else f"w^{i}") if i and x == 1 else
                    (str(x) if not i else f"{x}*" + ("w" if i == 1 else f"w^{i}"))
                    for i, x in enumerate(c) if x) + ")"
            if not mono:
                parts.append(cs)
            elif c == self.field.one:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self}, vars={list(self.vars)}, {self.field})"


def _substitute_terms(a: Poly, imgs: list, vars: tuple[str, ...]) -> Poly:
    F = a.field
    n = len(a.vars)
    n2 = len(vars)
    ident_units = {i: _unit_key(vars.index(v), n2) for i, v in enumerate(a.vars) if imgs[i] is None}
    powers: list[dict[int, Poly]] = [dict() for _ in range(n)]

    def power(i: int, e: int) -> Poly:
        cache = powers[i]
        if e not in cache:
            cache[e] = imgs[i] ** e
        return cache[e]

    # trie over exponent prefixes; identity variables become monomial shifts
    def rec(i: int, group: list[tuple[tuple[int, ...], object]]) -> Poly:
        if i == n:
            acc = F.zero
            for _, c in group:
                acc = F.add(acc, c)
            return Poly._make(F, vars, {} if acc == F.zero else {0: acc})
        by_e: dict[int, list] = defaultdict(list)
        for exps, c in group:
            by_e[exps[i]].append((exps, c))
        total = None
        for e, sub in by_e.items():
            part = rec(i + 1, sub)
            if not part._t:
                continue
            if e:
                if imgs[i] is None:
                    part = part.mul_monomial(e * ident_units[i])
                else:
                    part = part * power(i, e)
            total = part if total is None else total + part
        return total if total is not None else Poly._make(F, vars, {})

    group = [(_unpack(k, n), c) for k, c in a._t.items()]
    if not group:
        return Poly._make(F, vars, {})
    return rec(0, group)


_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__"}


def _eval_ast(node, env, field, vars):
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left, env, field, vars)
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int):
                raise ValueError("exponents must be integer literals")
            return left ** node.right.value
        right = _eval_ast(node.right, env, field, vars)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        if isinstance(left, int) and isinstance(right, int):
            return {"__add__": left + right, "__sub__": left - right, "__mul__": left * right}[op]
        if isinstance(left, int):
            left = Poly.const(field, vars, field(left))
        return getattr(left, op)(right)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_ast(node.operand, env, field, vars)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.Name):
        if node.id == "w" and node.id not in env and field.modulus is not None:
            return Poly.const(field, vars, field.gen())
        if node.id not in env:
            raise ContextMismatchError(f"unknown variable {node.id!r}; expected one of {vars}")
        return env[node.id]
    raise ValueError(f"cannot parse expression node {ast.dump(node)}")


# ---------------------------------------------------------------------------
# Division, substitution, difference quotients
# ---------------------------------------------------------------------------

def exact_div(a: Poly, b: Poly) -> Poly:
    """Return q with q*b == a, or raise NotDivisibleError.

    Leading-term elimination in descending lex order: if b | a then at every
    step the leading term of the remainder is divisible by LT(b), so the first
    failure of that test proves non-divisibility.
    """
    a._check(b)
    if not b._t:
        raise ZeroDivisionError("polynomial division by zero")
    F = a.field
    n = len(a.vars)
    if len(b._t) == 1:
        (kb, cb), = b._t.items()
        inv = F.inv(cb)
        t = {}
        for k, c in a._t.items():
            if not _key_divides(kb, k, n):
                raise NotDivisibleError(f"{b} does not divide {a}")
            t[k - kb] = F.mul(c, inv)
        return Poly._make(F, a.vars, t)
    ltk = max(b._t)
    inv = F.inv(b._t[ltk])
    zero = F.zero
    rem = dict(a._t)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    q: dict[int, object] = {}
    rest = [(k - ltk, c) for k, c in b._t.items() if k != ltk]  # offsets relative to LT
    while heap:
        k = -heapq.heappop(heap)
        c = rem.get(k)
        if c is None:
            continue
        if not _key_divides(ltk, k, n):
            raise NotDivisibleError(f"{b} does not divide {a}")
        del rem[k]
        coef = F.mul(c, inv)
        qk = k - ltk
        q[qk] = coef
        for off, cb in rest:
            k2 = k + off
            v = F.sub(rem.get(k2, zero), F.mul(coef, cb))
            if v == zero:
                rem.pop(k2, None)
            else:
                if k2 not in rem:
                    heapq.heappush(heap, -k2)
                rem[k2] = v
    return Poly._make(F, a.vars, q)


def substitute(h: "RingHom", a: Poly) -> Poly:
    return h(a)


def delta_quotient(P: Poly, u: str = "U", v: str = "V", vars: Sequence[str] | None = None) -> Poly:
    """The polynomial D(U, V) with P(U) - P(V) = (U - V) * D(U, V)."""
    used = P.used_vars()
    if len(used) > 1:
        raise ContextMismatchError(f"delta_quotient needs a univariate polynomial, got vars {used}")
    vars = (u, v) if vars is None else _coerce_vars(vars)
    F = P.field
    n = len(vars)
    iu, iv = vars.index(u), vars.index(v)
    ku, kv = _unit_key(iu, n), _unit_key(iv, n)
    t: dict[int, object] = {}
    for exps, c in P.items():
        d = sum(exps)
        if d > MAX_EXP:
            raise OverflowError("exponent overflow in delta_quotient")
        for i in range(d):
            key = i * ku + (d - 1 - i) * kv
            t[key] = F.add(t.get(key, F.zero), c)
    return Poly._make(F, vars, {k: c for k, c in t.items() if c != F.zero})


class RingHom:
    """Algebra map determined by images of the domain variables."""

    def __init__(self, domain_vars: Sequence[str], codomain_vars: Sequence[str],
                 images: Mapping[str, Poly | str | int], field: GF):
        self.domain_vars = _coerce_vars(domain_vars)
        self.codomain_vars = _coerce_vars(codomain_vars)
        self.field = field
        missing = set(self.domain_vars) - set(images)
        if missing:
            raise ContextMismatchError(f"no image for {sorted(missing)}")
        unknown = set(images) - set(self.domain_vars)
        if unknown:
            raise ContextMismatchError(f"images for unknown variables {sorted(unknown)}")
        self.images = {}
        for v in self.domain_vars:
            img = images[v]
            if isinstance(img, str):
                img = Poly.parse(img, field, self.codomain_vars)
            elif not isinstance(img, Poly):
                img = Poly.const(field, self.codomain_vars, field(img))
            self.images[v] = img.embed(self.codomain_vars)

    @classmethod
    def identity(cls, field, vars) -> "RingHom":
        vars = _coerce_vars(vars)
        return cls(vars, vars, {v: Poly.gen(field, vars, v) for v in vars}, field)

    def __call__(self, a: Poly) -> Poly:
        if a.field != self.field:
            raise ContextMismatchError("field mismatch")
        if not set(a.used_vars()) <= set(self.domain_vars):
            raise ContextMismatchError(
                f"{a} uses variables outside the domain {self.domain_vars}")
        a = a.embed(self.domain_vars)
        return a.subs(self.images, self.codomain_vars)

    def compose(self, inner: "RingHom") -> "RingHom":
        """self o inner."""
        return RingHom(inner.domain_vars, self.codomain_vars,
                       {v: self(img) for v, img in inner.images.items()}, self.field)

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain_vars),
            "codomain": list(self.codomain_vars),
            "images": {v: self.images[v].to_json() for v in self.domain_vars},
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "RingHom":
        imgs = {v: Poly.from_json(p) for v, p in d["images"].items()}
        field = next(iter(imgs.values())).field if imgs else GF(2)
        return cls(d["domain"], d["codomain"], imgs, field)


class PolyRing:
    """k[vars] as a ring object (the free case of the ring protocol used by ExpMap)."""

    def __init__(self, field: GF, vars: Sequence[str]):
        self.field = field
        self.vars = _coerce_vars(vars)

    @property
    def gens(self) -> tuple[str, ...]:
        return self.vars

    def reduce(self, poly: Poly) -> Poly:
        if poly.field != self.field:
            raise ContextMismatchError("field mismatch")
        return poly.embed(self.vars)

    def element(self, value) -> Poly:
        if isinstance(value, str):
            return Poly.parse(value, self.field, self.vars)
        if isinstance(value, Poly):
            return self.reduce(value)
        return Poly.const(self.field, self.vars, self.field(value))

    def gen(self, name: str) -> Poly:
        return Poly.gen(self.field, self.vars, name)

    def adjoin(self, *names: str) -> "PolyRing":
        clash = set(names) & set(self.vars)
        if clash:
            raise ContextMismatchError(f"variables {sorted(clash)} already present")
        return PolyRing(self.field, self.vars + tuple(names))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.field == other.field and self.vars == other.vars

    def __hash__(self):
        return hash((self.field, self.vars))

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.vars)})"

    def to_json(self) -> dict:
        d = self.field.to_json()
        d["vars"] = list(self.vars)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "PolyRing":
        return cls(GF.from_json(d), d["vars"])


# ---------------------------------------------------------------------------
# Laurent polynomials (kept deliberately separate from the packed kernel)
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Polynomial in which the variables in ``invertible`` may carry negative exponents."""

    __slots__ = ("field", "vars", "invertible", "_t")

    def __init__(self, field: GF, vars: Sequence[str], invertible: Iterable[str], terms=None):
        self.field = field
        self.vars = _coerce_vars(vars)
        self.invertible = frozenset(invertible)
        if not self.invertible <= set(self.vars):
            raise ContextMismatchError("invertible variables must be among vars")
        flags = [v in self.invertible for v in self.vars]
        t = {}
        for exps, c in (terms.items() if isinstance(terms, Mapping) else (terms or ())):
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.vars):
                raise ValueError("exponent vector length mismatch")
            for e, ok in zip(exps, flags):
                if e < 0 and not ok:
                    raise ValueError("negative exponent on a non-invertible variable")
            c = field(c) if not field.contains(c) else c
            if exps in t:
                c = field.add(t[exps], c)
            if c == field.zero:
                t.pop(exps, None)
            else:
                t[exps] = c
        self._t = t

    @classmethod
    def _make(cls, like: "LaurentPoly", t: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.field, obj.vars, obj.invertible = like.field, like.vars, like.invertible
        obj._t = t
        return obj

    def _check(self, other):
        if (self.field, self.vars, self.invertible) != (other.field, other.vars, other.invertible):
            raise ContextMismatchError("Laurent polynomial context mismatch")

    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        for e in sorted(self._t, reverse=True):
            yield e, self._t[e]

    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.field, self.vars, self.invertible, self._t) == (
            other.field, other.vars, other.invertible, other._t)

    def __hash__(self):
        return hash((self.field, self.vars, frozenset(self._t.items())))

    def __add__(self, other):
        self._check(other)
        F = self.field
        t = dict(self._t)
        for e, c in other._t.items():
            v = F.add(t.get(e, F.zero), c)
            if v == F.zero:
                t.pop(e, None)
            else:
                t[e] = v
        return LaurentPoly._make(self, t)

    def __neg__(self):
        F = self.field
        return LaurentPoly._make(self, {e: F.neg(c) for e, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.field(other)
            F = self.field
            return LaurentPoly._make(self, {e: F.mul(v, c) for e, v in self._t.items()
                                            if F.mul(v, c) != F.zero})
        self._check(other)
        F = self.field
        t: dict = {}
        for ea, ca in self._t.items():
            for eb, cb in other._t.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                t[e] = F.add(t.get(e, F.zero), F.mul(ca, cb))
        return LaurentPoly._make(self, {e: c for e, c in t.items() if c != F.zero})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = LaurentPoly(self.field, self.vars, self.invertible,
                             {(0,) * len(self.vars): self.field.one})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monomial_shift(self, exps: Sequence[int]) -> "LaurentPoly":
        shift = LaurentPoly(self.field, self.vars, self.invertible, {tuple(exps): self.field.one})
        return self * shift

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    __repr__ = __str__


def localize(a: Poly, invertible: Iterable[str]) -> LaurentPoly:
    return LaurentPoly(a.field, a.vars, invertible, a.terms())


def delocalize(a: LaurentPoly) -> Poly:
    for exps in a._t:
        if any(e < 0 for e in exps):
            raise NotPolynomialError(f"{a} has a negative exponent")
    return Poly(a.field, a.vars, a._t)
