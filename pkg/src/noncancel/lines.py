"""Line certificates in k[Z, T], Nagata lines, and coordinate-reduction evidence.

A certificate (f, h, P, Q, P1, Q1) is accepted iff

    Z - P(h) = f * P1,   T - Q(h) = f * Q1,   f(P(S), Q(S)) = 0,   h(P(S), Q(S)) = S.

The last two say S -> (P(S), Q(S)) parametrizes f = 0 with inverse h, so
k[Z, T]/(f) = k[S]; the first two say k[Z, T] = k[h] + f k[Z, T].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .expmap import VerificationReport
from .polyring import GF, Poly, exact_div, is_prime

__all__ = [
    "LineCertificate", "CoordinateEvidence", "make_nagata_certificate", "nagata_line",
    "verify_line_certificate", "coordinate_reduction_evidence", "replay_moves",
    "apply_move", "ZT", "S",
]

ZT = ("Z", "T")
S = ("S",)


@dataclass(frozen=True)
class LineCertificate:
    field: GF
    f: Poly
    h: Poly
    P: Poly
    Q: Poly
    P1: Poly
    Q1: Poly

    def __post_init__(self):
        for name in ("f", "h", "P1", "Q1"):
            object.__setattr__(self, name, _coerce(getattr(self, name), self.field, ZT))
        for name in ("P", "Q"):
            object.__setattr__(self, name, _coerce(getattr(self, name), self.field, S))

    def to_json(self) -> dict:
        d = self.field.to_json()
        for name in ("f", "h", "P", "Q", "P1", "Q1"):
            d[name] = getattr(self, name).to_json()
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "LineCertificate":
        field = GF.from_json(d)
        return cls(field, *(Poly.from_json(d[n]) for n in ("f", "h", "P", "Q", "P1", "Q1")))


def _coerce(p, field: GF, vars) -> Poly:
    if isinstance(p, str):
        return Poly.parse(p, field, vars)
    if isinstance(p, int):
        return Poly.const(field, vars, field(p))
    if p.field != field:
        p = p.change_field(field)
    return p.embed(vars)


def nagata_line(p: int, q: int, field: GF | None = None) -> Poly:
    """Z^(p^2) + T + T^(qp)."""
    field = GF(p) if field is None else field
    Z, T = Poly.gens(field, ZT)
    return Z ** (p * p) + T + T ** (q * p)


def make_nagata_certificate(p: int, q: int) -> LineCertificate:
    """Closed-form certificate for the Nagata line via two Frobenius descents.

    With e = (-1)^q in F_p: z^p + t^q collapses to s^p on the curve, so
    h = z + e (z^p + t^q)^q inverts S -> (S - e S^(pq), -S^(p^2)).
    """
    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"p = {p} and q = {q} must both be prime")
    if p == q:
        raise ValueError("q must be a prime different from p")
    F = GF(p)
    eps = F((-1) ** q)
    Z, T = Poly.gens(F, ZT)
    s = Poly.gen(F, S, "S")
    f = nagata_line(p, q, F)
    h = Z + (Z ** p + T ** q) ** q * eps
    P = s - s ** (p * q) * eps
    Q = -(s ** (p * p))
    P1 = exact_div(Z - P.subs({"S": h}, ZT), f)
    Q1 = exact_div(T - Q.subs({"S": h}, ZT), f)
    cert = LineCertificate(F, f, h, P, Q, P1, Q1)
    rep = verify_line_certificate(cert)
    if not rep.ok:
        raise AssertionError(f"Nagata certificate ({p}, {q}) failed: {rep.failures()}")
    return cert


def verify_line_certificate(c: LineCertificate) -> VerificationReport:
    F = c.field
    Z, T = Poly.gens(F, ZT)
    s = Poly.gen(F, S, "S")
    Ph = c.P.subs({"S": c.h}, ZT)
    Qh = c.Q.subs({"S": c.h}, ZT)
    param = {"Z": c.P, "T": c.Q}
    rep = VerificationReport()
    rep.add("Z - P(h) = f*P1", "Z", Z - Ph, c.f * c.P1)
    rep.add("T - Q(h) = f*Q1", "T", T - Qh, c.f * c.Q1)
    rep.add("f(P(S), Q(S)) = 0", "f", c.f.subs(param, S), Poly.zero(F, S))
    rep.add("h(P(S), Q(S)) = S", "h", c.h.subs(param, S), s)
    return rep


# ---------------------------------------------------------------------------
# Coordinate reduction
# ---------------------------------------------------------------------------

@dataclass
class CoordinateEvidence:
    verdict: str
    degree: int
    bound: int
    moves: list[dict] = field(default_factory=list)
    candidates_tested: int = 0

    @property
    def reduced(self) -> bool:
        return self.verdict == "reduced-to-linear"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "degree": self.degree,
            "degree_bound": self.bound,
            "moves": [_move_json(mv) for mv in self.moves],
            "candidates_tested": self.candidates_tested,
        }


def _move_json(mv: dict) -> dict:
    if mv["kind"] == "elem":
        return {"kind": "elem", "target": mv["target"], "g": mv["g"].to_json()}
    return {"kind": "affine", "matrix": [list(r) for r in mv["matrix"]],
            "shift": list(mv["shift"])}


def move_from_json(d: Mapping) -> dict:
    if d["kind"] == "elem":
        return {"kind": "elem", "target": d["target"], "g": Poly.from_json(d["g"])}
    return {"kind": "affine", "matrix": [list(r) for r in d["matrix"]], "shift": list(d["shift"])}


def apply_move(f: Poly, mv: dict) -> Poly:
    """Substitute one logged move into f (a polynomial in Z, T)."""
    F = f.field
    Z, T = Poly.gens(F, ZT)
    if mv["kind"] == "elem":
        g = mv["g"].embed(ZT)
        if mv["target"] == "T":
            return f.subs({"T": T + g})
        if mv["target"] == "Z":
            return f.subs({"Z": Z + g})
        raise ValueError(f"bad move target {mv['target']!r}")
    (a, b), (c, d) = mv["matrix"]
    e, g = mv["shift"]
    return f.subs({"Z": Z * F(a) + T * F(b) + F(e), "T": Z * F(c) + T * F(d) + F(g)})


def replay_moves(f: Poly, moves: Sequence[dict]) -> Poly:
    for mv in moves:
        f = apply_move(f, mv)
    return f


def _projective_linear(F: GF) -> Iterator[tuple]:
    """GL2(F) modulo scalars, identity first, in a fixed order."""
    elems = list(F.elements())
    one, zero = F.one, F.zero
    yield ((one, zero), (zero, one))
    for a, b, c, d in itertools.product(elems, repeat=4):
        det = F.sub(F.mul(a, d), F.mul(b, c))
        if det == zero:
            continue
        # normalize: first nonzero entry of (a, b) equals 1
        lead = a if a != zero else b
        if lead != one:
            continue
        if (a, b, c, d) == (one, zero, zero, one):
            continue
        yield ((a, b), (c, d))


def _weighted_top(f: Poly, e: int) -> tuple[int, Poly]:
    """Top (Z:1, T:e)-weighted form of f and its weighted degree."""
    terms = f.terms()
    D = max(i + e * j for i, j in terms)
    return D, Poly(f.field, ZT, {(i, j): c for (i, j), c in terms.items() if i + e * j == D})


def _lower_bound(f1: Poly, e: int, c) -> int:
    """A lower bound for deg f1(Z, T + g(Z)) over all g of degree e with leading coefficient c.

    The elementary map T -> T + g(Z) preserves (1, e)-weighted degree D, and the
    top weighted form of the result is top(f1)(Z, T + c Z^e), which depends
    only on c.  The total degree of the result is at least the largest total
    degree among the monomials of that form.
    """
    F = f1.field
    D, top = _weighted_top(f1, e)
    Z, T = Poly.gens(F, ZT)
    topR = top.subs({"T": T + (Z ** e).scale(c)})
    return max(i + j for (i, j) in topR.terms())


def _elementary_candidates(F: GF, e: int, c) -> Iterator[Poly]:
    # g = c Z^e + (coefficients of Z^2 .. Z^(e-1)); constant and linear parts are
    # affine and cannot change the degree, so they are omitted.
    elems = list(F.elements())
    Z = Poly.gen(F, ZT, "Z")
    for lower in itertools.product(elems, repeat=max(0, e - 2)):
        g = (Z ** e).scale(c)
        for k, a in enumerate(lower):
            if a != F.zero:
                g = g + (Z ** (e - 1 - k)).scale(a)
        yield g


def _find_decreasing_move(f: Poly, bound: int, prune: bool, counter: list[int]):
    F = f.field
    d = f.degree()
    Z, T = Poly.gens(F, ZT)
    nonzero = [x for x in F.elements() if x != F.zero]
    for L in _projective_linear(F):
        (a, b), (c_, d_) = L
        f1 = f.subs({"Z": Z.scale(a) + T.scale(b), "T": Z.scale(c_) + T.scale(d_)})
        for e in range(2, bound + 1):
            for c in nonzero:
                if prune and _lower_bound(f1, e, c) >= d:
                    continue
                for g in _elementary_candidates(F, e, c):
                    counter[0] += 1
                    R = f1.subs({"T": T + g})
                    if R.degree() < d:
                        moves = []
                        if L != ((F.one, F.zero), (F.zero, F.one)):
                            moves.append({"kind": "affine", "matrix": _plain(L, F), "shift": [0, 0]})
                        moves.append({"kind": "elem", "target": "T", "g": g.embed(("Z",))})
                        return moves, R
    return None


def _plain(L, F: GF):
    if F.is_prime_field:
        return [list(r) for r in L]
    return [[list(x) for x in r] for r in L]


def coordinate_reduction_evidence(f: Poly, degree_bound: int, prune: bool = True) -> CoordinateEvidence:
    """Greedily lower deg f by a linear change followed by T -> T + g(Z), deg g <= bound.

    The search at each stage is exhaustive over g up to the bound; ``prune``
    discards (change, deg g, leading coefficient) triples proven unable to
    lower the degree (see ``_lower_bound``).  Returns reduced-to-linear with a
    replayable move log, or stuck-at-degree-d.  Evidence only: it is not a
    decision procedure for being a coordinate.
    """
    f = f.embed(ZT)
    if f.degree() < 1:
        raise ValueError("constant polynomials are not lines")
    moves: list[dict] = []
    counter = [0]
    cur = f
    while cur.degree() > 1:
        found = _find_decreasing_move(cur, degree_bound, prune, counter)
        if found is None:
            d = cur.degree()
            return CoordinateEvidence(f"stuck-at-degree-{d}", d, degree_bound, moves, counter[0])
        step, cur = found
        moves.extend(step)
    return CoordinateEvidence("reduced-to-linear", cur.degree(), degree_bound, moves, counter[0])
