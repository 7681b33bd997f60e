"""
The ring A = k[X, Y, Z, T]/(X^r Y - F)
======================================

Normal forms, arithmetic and the localization oracle.
"""
from noncancel import GF, new_presentation, normal_form
import random

A = new_presentation(GF(2), 1, (2,), "Z^4 + T + T^6")
print(A)

x, y = A.gen("X1"), A.gen("Y")
print("x^2 y   =", x * x * y)                  # the relation
print("x^3 y^2 =", A.element("X1^3*Y^2"))     # x y f(z, t)
print("in B?", (x * x * y).in_B(), (x * y).in_B())

# every element embeds in B[1/x] by y -> F / x^2
print("x y^2 in B[1/x]:", (x * y * y).to_localization())

# reduction order does not matter
raw = A.element("X1^5*Y^3*Z").poly
print(all(normal_form(A, raw, rng=random.Random(s)) == A.element(raw) for s in range(20)))
