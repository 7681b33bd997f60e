"""
Weight filtrations and homogenized maps
=======================================

The chain (-1, 0) then (-1, -1) strips every x-dependence from F.
"""
from noncancel import (
    GF, Poly, Presentation, associated_graded, filtration_degree, induce_homogeneous,
    leading_form, make_phi1, nagata_line,
)

F3 = GF(3)
v = ("X1", "X2", "Z", "T")
F = nagata_line(3, 2).embed(v) + Poly.parse("X1*X2*Z + X2^2*T", F3, v)
A = Presentation(F3, (2, 2), F)

g1 = associated_graded(A, (-1, 0))
g2 = associated_graded(g1, (-1, -1))
print(A, "\n ->", g1, "\n ->", g2)

print("deg y under (-1, 0):", filtration_degree(A.gen("Y"), (-1, 0)))
print("leading form of z + x1 z^2:", leading_form(A.element("Z + X1*Z^2"), (-1, 0)))

phi = make_phi1(A)
for q in ((-1, 0), (-1, -1)):
    phi = induce_homogeneous(phi, q)
    print(f"weights {q}: U has degree {phi.grading[1]}; t -> {phi.images['T']}")
