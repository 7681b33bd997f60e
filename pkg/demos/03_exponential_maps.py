"""
Exponential maps and Derksen lower bounds
=========================================
"""
from noncancel import (
    GF, PolyRing, Presentation, dk_lowerbound, induce_on_fiber, is_invariant,
    make_phi1, make_phi2, make_translation, nagata_line,
)

f = nagata_line(3, 2)
A = Presentation(GF(3), (2, 3), f.embed(("X1", "X2", "Z", "T")))
phi1, phi2 = make_phi1(A), make_phi2(A)
for name, phi in (("phi1", phi1), ("phi2", phi2)):
    print(name, phi.status)
    for g in A.gens:
        print(f"   {g} -> {phi.images[g]}")
    print("   invariant generators:", [g for g in A.gens if is_invariant(phi, A.gen(g))])

rep = dk_lowerbound(A, [phi1, phi2])
print("DK(A) contains k[x1, x2, z, t]:", rep.covers_B)

# on a polynomial ring translations already give everything
R = PolyRing(GF(3), ("A", "B", "C"))
print("DK(k^[3]) lower bound:", dk_lowerbound(R, [make_translation(R, i) for i in range(3)]).invariant_gens)

# specializing x2 = 2 keeps a non-trivial map
fib, _ = induce_on_fiber(phi1, 2, 2)
print("fiber:", fib.ring, fib.status, "nontrivial:", fib.is_nontrivial())
