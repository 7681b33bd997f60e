"""
Nagata lines and coordinate evidence
====================================
"""
from noncancel import (
    GF, Poly, coordinate_reduction_evidence, make_nagata_certificate, replay_moves,
    verify_line_certificate,
)

for p, q in ((2, 3), (3, 2), (5, 3)):
    c = make_nagata_certificate(p, q)
    rep = verify_line_certificate(c)
    print(f"({p},{q}) f = {c.f}")
    print(f"      h = {c.h}, P = {c.P}, Q = {c.Q}")
    print("      ", [(ch.name, ch.ok) for ch in rep.checks])

# a bounded search for a degree-lowering automorphism
c = make_nagata_certificate(2, 3)
print(coordinate_reduction_evidence(c.f, 12).to_json())

g = Poly.parse("T + (Z + T)^3", GF(2), ("Z", "T"))
ev = coordinate_reduction_evidence(g, 5)
print(ev.verdict, "->", replay_moves(g, ev.moves))
