"""The standard t-structure on K^b(proj kA2) read as a cotorsion pair.

We recover the heart, its cohomological functor, and the localization of
C/K at regular morphisms.
"""
from htcpkit import gzloc
from htcpkit.cli import World, load
from htcpkit.heart import PreabQuotient

w = World(load("heart_a2_tstructure"), seed=0)
hd = w.pair("H")["hd"]
mem = hd.members()
print("W =", mem["W"], " heart =", mem["H"])
print("heart classes:", hd.heart_classes())

for n in ("P1[0]", "S1[0]", "P1[1]", "S1[-1]"):
    X = w.universe[n]
    print(f"coh({n}) is zero: {hd.coh_is_zero(X)}")

tri = hd.canonical_triangles(rotations=1)
print("cohomological on", len(tri), "triangles:", hd.cohomological_check(tri)["ok"])

pq = PreabQuotient(hd)
f = w.cat.hom(w.universe["P2[0]"], w.universe["P1[0]"]).basis[0]
print("P2 -> P1 in C/K: mono", pq.is_mono(f), " epi", pq.is_epi(f))

FC = gzloc.FractionCategory(pq, seed=0)
print("fraction category hom dims match the heart:", FC.hom_dim_check()["ok"])
print("localization agrees with coh objectwise:", FC.coh_agreement()["ok"])
