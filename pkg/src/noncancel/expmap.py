"""Exponential maps (G_a-actions) given by generator images in R[U].

A ring here is either a ``Presentation`` or a ``PolyRing``; both expose
``field``, ``vars``, ``gens``, ``reduce`` and ``adjoin``.  Images are stored
as polynomials over ``ring.adjoin(u).vars`` in normal form.

Both exponential-map axioms are checked on generators only.  That suffices:
each side of each axiom is an algebra map, and algebra maps agreeing on
generators agree everywhere.  For a presentation we additionally check that
the images satisfy the defining relation, i.e. that the generator
assignment really defines a map on the quotient.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .asanuma import AElem, Presentation
from .polyring import GF, ContextMismatchError, Poly, PolyRing, exact_div

__all__ = [
    "ExpMap", "Check", "VerificationReport", "InvariantReport",
    "NotApplicableError", "verify_exponential", "make_phi1", "make_phi2",
    "make_translation", "is_invariant", "dk_lowerbound", "induce_on_fiber",
    "apply_map",
]

Ring = Union[Presentation, PolyRing]


class NotApplicableError(ValueError):
    """The requested construction does not apply to this map or parameter."""


@dataclass(frozen=True)
class Check:
    name: str
    subject: str
    ok: bool
    lhs: str = ""
    rhs: str = ""

    def to_json(self) -> dict:
        d = {"check": self.name, "subject": self.subject, "status": "pass" if self.ok else "fail"}
        if not self.ok:
            d["lhs"], d["rhs"] = self.lhs, self.rhs
        return d


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name, subject, lhs, rhs) -> bool:
        ok = lhs == rhs
        self.checks.append(Check(name, subject, ok, "" if ok else str(lhs), "" if ok else str(rhs)))
        return ok

    def to_json(self) -> dict:
        return {"status": "pass" if self.ok else "fail",
                "checks": [c.to_json() for c in self.checks]}


@dataclass(frozen=True)
class ExpMap:
    ring: Ring
    images: Mapping[str, Poly]
    u: str = "U"
    status: str = "unchecked"  # unchecked | verified | failed
    report: VerificationReport | None = dataclasses.field(default=None, compare=False)
    # (scaled weight vector, degree of U) when produced by homogenization
    grading: tuple | None = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        ringU = self.ring.adjoin(self.u)
        imgs = {}
        for g in self.ring.gens:
            img = self.images.get(g)
            if img is None:
                img = Poly.gen(self.ring.field, ringU.vars, g)
            elif isinstance(img, AElem):
                img = img.poly
            elif isinstance(img, str):
                img = Poly.parse(img, self.ring.field, ringU.vars)
            imgs[g] = ringU.reduce(img)
        unknown = set(self.images) - set(self.ring.gens)
        if unknown:
            raise ContextMismatchError(f"images for unknown generators {sorted(unknown)}")
        object.__setattr__(self, "images", imgs)

    @property
    def ringU(self) -> Ring:
        return self.ring.adjoin(self.u)

    def image(self, g: str):
        """The image of generator ``g`` as an element of R[U]."""
        ringU = self.ringU
        return ringU.element(self.images[g]) if isinstance(ringU, Presentation) else self.images[g]

    def moved(self) -> list[str]:
        ringU = self.ringU
        # reduce the generator too: with m = 0, y itself is not a normal form
        return [g for g in self.ring.gens
                if self.images[g] != ringU.reduce(Poly.gen(self.ring.field, ringU.vars, g))]

    def is_nontrivial(self) -> bool:
        # an algebra map fixing every generator fixes everything
        return bool(self.moved())

    def __call__(self, a) -> Poly:
        return apply_map(self, a)

    def to_json(self) -> dict:
        key = "presentation" if isinstance(self.ring, Presentation) else "ring"
        return {key: self.ring.to_json(), "u": self.u,
                "images": {g: self.images[g].to_json() for g in self.ring.gens},
                "status": self.status}

    @classmethod
    def from_json(cls, d: Mapping) -> "ExpMap":
        if "presentation" in d:
            ring = Presentation.from_json(d["presentation"])
        else:
            ring = PolyRing.from_json(d["ring"])
        imgs = {g: Poly.from_json(p) for g, p in d["images"].items()}
        return cls(ring, imgs, d.get("u", "U"))


def _as_poly(ring: Ring, a) -> Poly:
    if isinstance(a, AElem):
        return a.poly
    if isinstance(a, str):
        return Poly.parse(a, ring.field, ring.vars)
    return a


def apply_map(phi: ExpMap, a) -> Poly:
    """phi(a) in R[U], normal form."""
    ringU = phi.ringU
    a = _as_poly(phi.ring, a)
    if not set(a.used_vars()) <= set(phi.ring.vars):
        raise ContextMismatchError(f"{a} is not an element of {phi.ring}")
    a = a.embed(phi.ring.vars)
    return ringU.reduce(a.subs(phi.images, ringU.vars))


def verify_exponential(phi: ExpMap) -> VerificationReport:
    ring, u = phi.ring, phi.u
    v = "V" if "V" not in ring.vars and u != "V" else "V_"
    ringU = ring.adjoin(u)
    ringUV = ring.adjoin(u, v)
    F = ring.field
    rep = VerificationReport()
    imgs_V = {g: phi.images[g].embed(ringUV.vars).subs({u: Poly.gen(F, ringUV.vars, v)})
              for g in ring.gens}
    U_poly = Poly.gen(F, ringUV.vars, u)
    for g in ring.gens:
        img = phi.images[g]
        gen = ringU.reduce(Poly.gen(F, ringU.vars, g))
        rep.add("identity at U=0", g, ringU.reduce(img.subs({u: 0})), gen)
        img_uv = img.embed(ringUV.vars)
        lhs = ringUV.reduce(img_uv.subs({**imgs_V, u: U_poly}))
        rhs = ringUV.reduce(img_uv.subs({u: U_poly + Poly.gen(F, ringUV.vars, v)}))
        rep.add("phi_V phi_U = phi_(V+U)", g, lhs, rhs)
    if isinstance(ring, Presentation):
        rel = ring.relation
        rep.add("defining relation preserved", "x^r*y - F",
                ringU.reduce(rel.subs(phi.images, ringU.vars)), Poly.zero(F, ringU.vars))
    return rep


def _verified(phi: ExpMap) -> ExpMap:
    rep = verify_exponential(phi)
    return dataclasses.replace(phi, status="verified" if rep.ok else "failed", report=rep)


def _make_phi(pres: Presentation, moving: str, u: str = "U") -> ExpMap:
    if u in pres.vars:
        raise ContextMismatchError(f"{u!r} already names a variable of the presentation")
    F = pres.field
    vars_u = pres.base_vars + pres.extra_vars + (u,)
    Fp = pres.F.embed(vars_u)
    xr = Poly.monomial(F, vars_u, pres.r + (0,) * (len(vars_u) - pres.m))
    U = Poly.gen(F, vars_u, u)
    shift = xr * U
    moved = Fp.subs({moving: Poly.gen(F, vars_u, moving) + shift})
    delta = exact_div(moved - Fp, shift)  # guaranteed exact: shift divides F(..s+shift..) - F(..s..)
    ringU = pres.adjoin(u)
    images = {
        moving: (Poly.gen(F, vars_u, moving) + shift).embed(ringU.vars),
        "Y": Poly.gen(F, ringU.vars, "Y") + (U * delta).embed(ringU.vars),
    }
    return _verified(ExpMap(pres, images, u))


def make_phi1(pres: Presentation, u: str = "U") -> ExpMap:
    """t -> t + x^r U, y -> y + U*(F(x,z,t+x^r U) - F)/(x^r U); fixes x and z."""
    return _make_phi(pres, "T", u)


def make_phi2(pres: Presentation, u: str = "U") -> ExpMap:
    """z -> z + x^r U, with the matching y-image; fixes x and t."""
    return _make_phi(pres, "Z", u)


def make_translation(ring: PolyRing, var: str | int, u: str = "U") -> ExpMap:
    """var -> var + U on a polynomial ring in at least two variables."""
    if len(ring.vars) < 2:
        raise NotApplicableError("translations witness DK = whole ring only for n >= 2 variables")
    name = ring.vars[var] if isinstance(var, int) else var
    ringU = ring.adjoin(u)
    img = Poly.gen(ring.field, ringU.vars, name) + Poly.gen(ring.field, ringU.vars, u)
    return _verified(ExpMap(ring, {name: img}, u))


def is_invariant(phi: ExpMap, a) -> bool:
    ringU = phi.ringU
    a = _as_poly(phi.ring, a)
    return apply_map(phi, a) == ringU.reduce(a.embed(ringU.vars))


@dataclass
class InvariantReport:
    ring: Ring
    invariant_gens: list[str]
    per_map: list[list[str]]

    @property
    def nontrivial(self) -> bool:
        return True  # trivial maps are rejected on input

    @property
    def covers_all(self) -> bool:
        return set(self.invariant_gens) >= set(self.ring.gens)

    @property
    def covers_B(self) -> bool:
        """Whether k[x1..xm, z, t] lies in the lower bound (for a presentation)."""
        need = self.ring.base_vars if isinstance(self.ring, Presentation) else self.ring.gens
        return set(self.invariant_gens) >= set(need)

    def to_json(self) -> dict:
        return {"invariant_generators": self.invariant_gens,
                "per_map": self.per_map,
                "contains_B": self.covers_B,
                "whole_ring": self.covers_all}


def dk_lowerbound(ring: Ring, maps: Sequence[ExpMap]) -> InvariantReport:
    """Generators shown invariant under some supplied non-trivial exponential map.

    The subring they generate is contained in the Derksen invariant.
    """
    if not maps:
        raise ValueError("at least one exponential map is required")
    found: set[str] = set()
    per_map = []
    for phi in maps:
        if phi.ring != ring:
            raise ContextMismatchError("map defined on a different ring")
        if phi.status != "verified":
            phi = _verified(phi)
            if phi.status != "verified":
                raise ValueError("map fails the exponential-map axioms")
        if not phi.is_nontrivial():
            raise ValueError("trivial exponential map supplied")
        inv = [g for g in ring.gens if is_invariant(phi, Poly.gen(ring.field, ring.vars, g))]
        per_map.append(inv)
        found.update(inv)
    return InvariantReport(ring, [g for g in ring.gens if g in found], per_map)


def induce_on_fiber(phi: ExpMap, j: int, lam, invariants: Sequence = ()) -> tuple[ExpMap, VerificationReport]:
    """Specialize x_j = lam (1-based j) and rescale y' = lam^(r_j) y.

    Returns the induced verified map on the fiber presentation together with a
    report on the supplied invariants (their images must stay invariant).
    """
    pres = phi.ring
    if not isinstance(pres, Presentation):
        raise NotApplicableError("fibers are defined for presentations only")
    if not 1 <= j <= pres.m:
        raise NotApplicableError(f"x-index {j} out of range 1..{pres.m}")
    F = pres.field
    lam = F(lam) if not F.contains(lam) else lam
    if lam == F.zero:
        raise NotApplicableError("lambda must be a unit; the fiber at 0 degenerates")
    xj = pres.xvars[j - 1]
    if phi.images[xj] != Poly.gen(F, phi.ringU.vars, xj):
        raise NotApplicableError(f"{xj} is not fixed by the map")
    rj = pres.r[j - 1]
    keep = [i for i in range(pres.m) if i != j - 1]
    Ffib = pres.F.subs({xj: lam}).embed(tuple(pres.xvars[i] for i in keep) + ("Z", "T"))
    fiber = Presentation(F, [pres.r[i] for i in keep], Ffib, pres.extra_vars,
                         [pres.xvars[i] for i in keep])
    fiberU = fiber.adjoin(phi.u)
    lam_r = F.pow(lam, rj)
    spec = {xj: lam, "Y": Poly.gen(F, fiberU.vars, "Y").scale(F.inv(lam_r))}

    def push(poly: Poly) -> Poly:
        return fiberU.reduce(poly.subs(spec, fiberU.vars))

    images = {g: push(phi.images[g]) for g in fiber.gens}
    images["Y"] = fiberU.reduce(images["Y"].scale(lam_r))
    induced = _verified(ExpMap(fiber, images, phi.u))
    rep = VerificationReport()
    spec_base = {xj: lam, "Y": Poly.gen(F, fiber.vars, "Y").scale(F.inv(lam_r))}
    for a in invariants:
        a = _as_poly(pres, a).embed(pres.vars)
        a_f = fiber.reduce(a.subs(spec_base, fiber.vars))
        rep.add("invariant survives on the fiber", str(a), apply_map(induced, a_f),
                fiberU.reduce(a_f.embed(fiberU.vars)))
    return induced, rep
