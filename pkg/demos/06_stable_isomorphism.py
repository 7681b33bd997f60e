"""
A[W] is a polynomial ring
=========================

Explicit mutually inverse substitutions for A[W] = k[X1, X2, Z1, T1, W1].
"""
from noncancel import Presentation, build_stable_iso, make_nagata_certificate

cert = make_nagata_certificate(2, 3)
A = Presentation(cert.field, (2, 3), cert.f.embed(("X1", "X2", "Z", "T")))
sc = build_stable_iso(A, cert)

print("forward (free ring -> A[W])")
for v in sc.forward.domain_vars:
    print(f"   {v} -> {sc.forward.images[v]}")
print("backward (A[W] -> free ring)")
for v in sc.backward.domain_vars:
    print(f"   {v} -> {sc.backward.images[v]}")
print("roundtrips:", sc.roundtrip_verified)
