"""Weight gradings on B[(x1...xm)^-1], filtrations on A and their associated graded rings.

A weight vector q = (q1..qm) gives x_j degree q_j, z and t degree 0, and y
degree b = u_F - (q1 r1 + ... + qm rm) where u_F is the top degree of F.
The degree of an element of A is the maximum over the monomials of its
normal form; the leading form keeps exactly the monomials attaining it.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .asanuma import AElem, Presentation
from .expmap import Check, ExpMap, VerificationReport, verify_exponential
from .polyring import LaurentPoly, Poly

__all__ = [
    "GradedDecomposition", "GradedDegenerationError", "InducedMapFailure",
    "graded_components", "filtration_degree", "y_degree_weight",
    "associated_graded", "leading_form", "induce_homogeneous", "is_homogeneous",
]


class GradedDegenerationError(ValueError):
    """The leading summand of F is divisible by some x_j."""


class InducedMapFailure(RuntimeError):
    """The homogenized candidate map failed verification."""

    def __init__(self, msg: str, report: VerificationReport | None = None):
        super().__init__(msg)
        self.report = report


@dataclass
class GradedDecomposition:
    components: dict[int, Poly | LaurentPoly]

    @property
    def top(self) -> int:
        return max(self.components)

    @property
    def bottom(self) -> int:
        return min(self.components)

    @property
    def leading(self):
        return self.components[self.top]

    def total(self):
        parts = [self.components[d] for d in sorted(self.components)]
        acc = parts[0]
        for p in parts[1:]:
            acc = acc + p
        return acc

    def to_json(self) -> dict:
        return {str(d): c.to_json() for d, c in sorted(self.components.items())
                if hasattr(c, "to_json")}


def _weights_for(vars: Sequence[str], q: Sequence[int], xvars: Sequence[str] | None,
                 extra: Mapping[str, int] | None = None) -> list[int]:
    if xvars is None:
        xvars = tuple(f"X{i + 1}" for i in range(len(q)))
    if len(xvars) != len(q):
        raise ValueError(f"weight vector of length {len(q)} for {len(xvars)} x-variables")
    w = dict(zip(xvars, q))
    if extra:
        w.update(extra)
    missing = [x for x in xvars if x not in vars]
    if missing:
        raise ValueError(f"x-variables {missing} are not in {tuple(vars)}")
    return [w.get(v, 0) for v in vars]


def graded_components(a: Poly | LaurentPoly, q: Sequence[int],
                      xvars: Sequence[str] | None = None,
                      weights: Mapping[str, int] | None = None) -> GradedDecomposition:
    """Split ``a`` by q-weighted degree (every non-x variable has weight 0 unless in ``weights``)."""
    wv = _weights_for(a.vars, q, xvars, weights)
    buckets: dict[int, dict] = {}
    for exps, c in a.terms().items():
        d = sum(w * e for w, e in zip(wv, exps))
        buckets.setdefault(d, {})[exps] = c
    if isinstance(a, LaurentPoly):
        comps = {d: LaurentPoly(a.field, a.vars, a.invertible, t) for d, t in buckets.items()}
    else:
        comps = {d: Poly(a.field, a.vars, t) for d, t in buckets.items()}
    return GradedDecomposition(comps)


def _top_degree_F(pres: Presentation, q: Sequence[int]) -> int:
    return graded_components(pres.F, q, pres.xvars).top


def y_degree_weight(pres: Presentation, q: Sequence[int]) -> int:
    """b = u_F - sum q_i r_i."""
    return _top_degree_F(pres, q) - sum(qi * ri for qi, ri in zip(q, pres.r))


def _elem_weights(pres: Presentation, q: Sequence[int],
                  extra: Mapping[str, int] | None = None) -> list[int]:
    w = dict(zip(pres.xvars, q))
    w["Y"] = y_degree_weight(pres, q)
    if extra:
        w.update(extra)
    return [w.get(v, 0) for v in pres.vars]


def _monomial_degrees(pres, poly: Poly, q, extra=None) -> dict[tuple, int]:
    wv = _elem_weights(pres, q, extra)
    return {e: sum(w * x for w, x in zip(wv, e)) for e in poly.terms()}


def filtration_degree(a: AElem, q: Sequence[int], extra: Mapping[str, int] | None = None) -> int:
    """n with a in A_n minus A_(n-1)."""
    if len(q) != a.ring.m:
        raise ValueError("weight vector length differs from m")
    if a.is_zero():
        raise ValueError("the zero element has no filtration degree")
    return max(_monomial_degrees(a.ring, a.poly, q, extra).values())


def associated_graded(pres: Presentation, q: Sequence[int]) -> Presentation:
    """gr(A) for the q-filtration: the same presentation with F replaced by its top summand."""
    if len(q) != pres.m:
        raise ValueError("weight vector length differs from m")
    lead = graded_components(pres.F, q, pres.xvars).leading
    for x in pres.xvars:
        if not lead.subs({x: 0}):
            raise GradedDegenerationError(f"leading summand {lead} is divisible by {x}")
    return pres.with_F(lead)


def leading_form(a: AElem, q: Sequence[int], gr: Presentation | None = None) -> AElem:
    """Top filtration layer of ``a`` as an element of the graded presentation."""
    if a.is_zero():
        raise ValueError("the zero element has no leading form")
    pres = a.ring
    gr = associated_graded(pres, q) if gr is None else gr
    degs = _monomial_degrees(pres, a.poly, q)
    top = max(degs.values())
    terms = {e: c for e, c in a.poly.terms().items() if degs[e] == top}
    # normal-form monomials depend only on r, so this is already a normal form in gr
    return AElem(gr, Poly(gr.field, gr.vars, terms))


def is_homogeneous(pres: Presentation, poly: Poly, q: Sequence[int], degree: int,
                   extra: Mapping[str, int] | None = None) -> bool:
    return all(d == degree for d in _monomial_degrees(pres, poly, q, extra).values())


def _u_coefficients(phi: ExpMap, g: str) -> dict[int, Poly]:
    """phi(g) = sum_i c_i U^i with c_i in the base ring (U dropped from the variables)."""
    ring = phi.ring
    out = {}
    for i, c in phi.images[g].univariate_coeffs(phi.u).items():
        out[i] = Poly(ring.field, ring.vars, {e[:-1]: v for e, v in c.terms().items()})
    return out


def induce_homogeneous(phi: ExpMap, q: Sequence[int]) -> ExpMap:
    """Homogenize ``phi`` with respect to the q-filtration.

    With w = max over generators g and i >= 1 of (deg c_{g,i} - deg g) / i,
    U receives degree -w, every image stays within filtration degree deg g, and
    the induced map keeps exactly the summands attaining that bound.  Rational
    w is cleared by scaling q.  The result is verified before being returned.
    """
    pres = phi.ring
    if not isinstance(pres, Presentation):
        raise TypeError("homogenization is defined for presentations")
    q = tuple(int(x) for x in q)
    gr = associated_graded(pres, q)
    coeffs = {g: _u_coefficients(phi, g) for g in pres.gens}
    gdeg = {g: filtration_degree(pres.gen(g), q) for g in pres.gens}
    ratios = {}
    for g, cs in coeffs.items():
        for i, c in cs.items():
            if i >= 1:
                ratios[(g, i)] = Fraction(filtration_degree(AElem(pres, c), q) - gdeg[g], i)
    if not ratios:
        ident = ExpMap(gr, {}, phi.u)
        rep = verify_exponential(ident)
        return dataclasses.replace(ident, status="verified" if rep.ok else "failed",
                                   report=rep, grading=(q, 0))
    w = max(ratios.values())
    scale = w.denominator
    qs = tuple(scale * x for x in q)
    u_deg = int(-w * scale)
    grU = gr.adjoin(phi.u)
    Upoly = Poly.gen(gr.field, grU.vars, phi.u)
    images = {}
    for g in pres.gens:
        img = Poly.gen(gr.field, grU.vars, g)
        for i, c in coeffs[g].items():
            if i >= 1 and ratios[(g, i)] == w:
                lf = leading_form(AElem(pres, c), qs, gr)
                img = img + lf.poly.embed(grU.vars) * Upoly ** i
        images[g] = img
    induced = ExpMap(gr, images, phi.u)
    rep = verify_exponential(induced)
    grade = {phi.u: u_deg}
    for g in gr.gens:
        d = filtration_degree(gr.gen(g), qs)
        ok = is_homogeneous(gr.adjoin(phi.u), induced.images[g], qs, d, grade)
        rep.checks.append(Check("homogeneous", g, ok, "" if ok else str(induced.images[g]), ""))
    if not rep.ok:
        raise InducedMapFailure(
            f"homogenized map for weights {q} fails: "
            + "; ".join(f"{c.name}[{c.subject}]" for c in rep.failures()), rep)
    if not induced.is_nontrivial():
        raise InducedMapFailure("homogenized map is trivial", rep)
    return dataclasses.replace(induced, status="verified", report=rep, grading=(qs, u_deg))
