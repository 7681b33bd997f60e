"""Exact algebra for Asanuma-type varieties over finite fields.

Sparse polynomials over F_(p^e), the quotient ring A = k[X, Y, Z, T]/(x^r Y - F),
exponential maps and their verification, weight filtrations, plane-line
certificates and the explicit isomorphism A[W] = k^[m+3].
"""
from .polyring import (
    GF, Poly, LaurentPoly, PolyRing, RingHom, ContextMismatchError, NotDivisibleError,
    NotPolynomialError, exact_div, substitute, delta_quotient, localize, delocalize,
)
from .asanuma import (
    Presentation, AElem, HypothesisError, NotADomainError, new_presentation, normal_form,
    to_localization, in_B,
)
from .expmap import (
    ExpMap, VerificationReport, InvariantReport, NotApplicableError, verify_exponential,
    make_phi1, make_phi2, make_translation, is_invariant, dk_lowerbound, induce_on_fiber,
)
from .grading import (
    GradedDegenerationError, InducedMapFailure, graded_components, filtration_degree,
    y_degree_weight, associated_graded, leading_form, induce_homogeneous,
)
from .lines import (
    LineCertificate, CoordinateEvidence, make_nagata_certificate, nagata_line,
    verify_line_certificate, coordinate_reduction_evidence, replay_moves,
)
from .stableiso import StableIsoCertificate, StableIsoError, build_stable_iso, verify_stable_iso

__version__ = "0.1.0"
