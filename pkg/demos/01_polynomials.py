"""
Sparse polynomials over finite fields
=====================================

Exact arithmetic over F_p and F_(p^e), substitution and exact division.
"""
from noncancel import GF, Poly, RingHom, delta_quotient, exact_div

F2 = GF(2)
Z, T = Poly.gens(F2, ("Z", "T"))

# the Frobenius map is additive in characteristic p
print((Z + T) ** 2)            # Z^2 + T^2
print((Z + T) ** 6)

# exact division, with failure as a normal outcome
f = Z**4 + T + T**6
print(exact_div(f * (Z + T**3), f))

# the parametrization S -> (S + S^6, S^4) lies on f = 0
h = RingHom(("Z", "T"), ("S",), {"Z": "S + S^6", "T": "S^4"}, F2)
print("f(S + S^6, S^4) =", h(f))

# (P(U) - P(V)) / (U - V) termwise
print(delta_quotient(Poly.parse("S + S^6", F2, ("S",))))

# F_4 = F_2[w]/(w^2 + w + 1)
F4 = GF(2, [1, 1, 1])
w = F4.gen()
print("w^3 =", F4.pow(w, 3), " w^-1 =", F4.inv(w))
print(Poly.parse("(w*Z + T)^2", F4, ("Z", "T")))
