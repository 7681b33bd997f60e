"""Explicit isomorphism A[W] = k[X1..Xm, Z1, T1, W1] for x-free lines F = f(Z, T).

With x^r = X1^r1 ... Xm^rm and a line certificate (f, h, P, Q, P1, Q1):

    W1 = x^r W + h(z, t)
    Z1 = (z - P(W1)) / x^r = P1(z, t) y - W * dP(W1, h)
    T1 = (t - Q(W1)) / x^r = Q1(z, t) y - W * dQ(W1, h)

where dP(U, V) = (P(U) - P(V)) / (U - V).  Conversely

    z = P(W1) + x^r Z1,  t = Q(W1) + x^r T1,
    y = f(z, t) / x^r,   W = (W1 - h(z, t)) / x^r,

the last two divisions being exact because f(P(S), Q(S)) = 0 and
h(P(S), Q(S)) = S.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .asanuma import AElem, Presentation
from .expmap import VerificationReport
from .lines import ZT, LineCertificate, verify_line_certificate
from .polyring import ContextMismatchError, Poly, PolyRing, RingHom, delta_quotient, exact_div

__all__ = ["StableIsoCertificate", "StableIsoError", "build_stable_iso", "verify_stable_iso"]


class StableIsoError(ValueError):
    """Hypotheses for the construction are not met."""


@dataclass
class StableIsoCertificate:
    presentation: Presentation  # A[W]
    cert: LineCertificate
    free_ring: PolyRing  # k[X1..Xm, Z1, T1, W1]
    forward: RingHom  # free ring -> A[W]
    backward: RingHom  # A[W] generators -> free ring
    report: VerificationReport | None = None

    @property
    def roundtrip_verified(self) -> bool:
        return self.report is not None and self.report.ok

    def forward_image(self, v: str) -> AElem:
        return self.presentation.element(self.forward.images[v])

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation.to_json(),
            "line_certificate": self.cert.to_json(),
            "free_ring": self.free_ring.to_json(),
            "forward": {v: self.forward.images[v].to_json() for v in self.forward.domain_vars},
            "backward": {v: self.backward.images[v].to_json() for v in self.backward.domain_vars},
            "transcript": self.report.to_json() if self.report else None,
            "roundtrip_verified": self.roundtrip_verified,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "StableIsoCertificate":
        pres = Presentation.from_json(d["presentation"])
        cert = LineCertificate.from_json(d["line_certificate"])
        free = PolyRing.from_json(d["free_ring"])
        fwd = RingHom(free.vars, pres.vars,
                      {v: Poly.from_json(p) for v, p in d["forward"].items()}, pres.field)
        bwd = RingHom(pres.vars, free.vars,
                      {v: Poly.from_json(p) for v, p in d["backward"].items()}, pres.field)
        return cls(pres, cert, free, fwd, bwd)


def build_stable_iso(pres: Presentation, cert: LineCertificate, w: str = "W",
                     names: Sequence[str] = ("Z1", "T1", "W1")) -> StableIsoCertificate:
    F = pres.field
    if cert.field != F:
        raise StableIsoError("line certificate over a different field")
    if not pres.is_x_free():
        raise StableIsoError(f"F = {pres.F} depends on the x-variables")
    f_pres = pres.F.embed(ZT) if set(pres.F.used_vars()) <= set(ZT) else None
    if f_pres != cert.f:
        raise StableIsoError(f"presentation F = {pres.F} differs from certificate f = {cert.f}")
    line_rep = verify_line_certificate(cert)
    if not line_rep.ok:
        raise StableIsoError("line certificate does not verify: "
                             + ", ".join(c.name for c in line_rep.failures()))
    base = pres.base()
    if pres.extra_vars and pres.extra_vars != (w,):
        raise StableIsoError(f"unexpected adjoined variables {pres.extra_vars}")
    AW = base.adjoin(w)
    z1, t1, w1 = names
    clash = set(names) & set(AW.vars)
    if clash or len(set(names)) != 3:
        raise ContextMismatchError(f"free-ring names {sorted(clash)} collide with {AW.vars}")
    free = PolyRing(F, pres.xvars + (z1, t1, w1))

    # forward: free ring -> A[W]
    def inA(p: Poly) -> Poly:
        return p.embed(AW.vars)

    h, P1, Q1 = inA(cert.h), inA(cert.P1), inA(cert.Q1)
    xr = AW.xr
    Y, Wv = AW.gen("Y").poly, AW.gen(w).poly
    W1_img = xr * Wv + h
    dP = delta_quotient(cert.P, "U_", "V_").subs({"U_": W1_img, "V_": h}, AW.vars)
    dQ = delta_quotient(cert.Q, "U_", "V_").subs({"U_": W1_img, "V_": h}, AW.vars)
    fwd_imgs = {x: Poly.gen(F, AW.vars, x) for x in pres.xvars}
    fwd_imgs[z1] = AW.reduce(P1 * Y - Wv * dP)
    fwd_imgs[t1] = AW.reduce(Q1 * Y - Wv * dQ)
    fwd_imgs[w1] = W1_img
    forward = RingHom(free.vars, AW.vars, fwd_imgs, F)

    # backward: A[W] -> free ring
    Xr = Poly.monomial(F, free.vars, pres.r + (0, 0, 0))
    W1 = free.gen(w1)
    bz = cert.P.subs({"S": W1}, free.vars) + Xr * free.gen(z1)
    bt = cert.Q.subs({"S": W1}, free.vars) + Xr * free.gen(t1)
    at = {"Z": bz, "T": bt}
    by = exact_div(cert.f.subs(at, free.vars), Xr)
    bW = exact_div(W1 - cert.h.subs(at, free.vars), Xr)
    bwd_imgs = {x: free.gen(x) for x in pres.xvars}
    bwd_imgs.update({"Y": by, "Z": bz, "T": bt, w: bW})
    backward = RingHom(AW.vars, free.vars, bwd_imgs, F)

    out = StableIsoCertificate(AW, cert, free, forward, backward)
    out.report = verify_stable_iso(out)
    return out


def verify_stable_iso(sc: StableIsoCertificate) -> VerificationReport:
    """Recheck both composites on generators and the relation, from the stored maps alone."""
    AW, free = sc.presentation, sc.free_ring
    fwd, bwd = sc.forward, sc.backward
    F = AW.field
    rep = VerificationReport()
    for v in free.vars:
        rep.add("backward(forward(v)) = v", v, bwd(fwd.images[v]), free.gen(v))
    for g in AW.gens:
        rep.add("forward(backward(g)) = g", g, AW.reduce(fwd(bwd.images[g])),
                Poly.gen(F, AW.vars, g))
    # backward must respect x^r y = f(z, t)
    rep.add("backward respects x^r*y = F", "relation", bwd(AW.relation), Poly.zero(F, free.vars))
    return rep
