"""Modules over the path algebra of 1 -> 2, exact Ext groups and a mapping cone."""
from htcpkit.addcat import isomorphic
from htcpkit.quivrep import ModuleCategory, QuiverPresentation
from htcpkit.tricplx import ComplexCategory

A = QuiverPresentation(["1", "2"], [("a", "1", "2")], []).algebra()
M = ModuleCategory(A)
P1, P2, S1 = M.projective("1"), M.projective("2"), M.simple("1")

print("dim A =", A.dim)
print("dim vectors: P1", P1.dim_vector(), " P2", P2.dim_vector(), " S1", S1.dim_vector())
print("P1 is also the injective at 2:", isomorphic(M, P1, M.injective("2")) is not None)

# one non-split extension, realized as a short exact sequence
print("Ext^1(S1, P2) =", M.ext_dim(1, S1, P2))
ses = M.realize_ext1(S1, P2, [1])
print("its middle term has dimension vector", ses.middle.dim_vector())

# the same extension seen in the homotopy category, as a morphism S1 -> P2[1]
K = ComplexCategory(M, window=(-4, 4))
R = K.projective_resolution(S1)
print("Hom_K(S1, P2[1]) =", K.hom(R, K.shift(K.stalk("2"), 1)).dim)
f = K.hom(K.stalk("2"), K.stalk("1")).basis[0]
print("cone(P2 -> P1) has homology", K.homology_dims(K.cone(f).g.target))
