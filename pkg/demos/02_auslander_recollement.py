"""The Auslander algebra of kA3: a twin cotorsion pair from a recollement.

The subcategory Z/I turns out equivalent to mod kA3, even though the
extension structure collapses.
"""
from htcpkit.cli import STEPS, World, load

w = World(load("auslander_a3"), seed=0)
print("universe:", ", ".join(w.universe.names))
print("modules killed by e = 1+2+3:", w.E.members(w.subcats["N"]))
print("injectives inside that Serre subcategory:", w.E.members(w.subcats["V"]))
print("Ext^2 vanishing:", STEPS["ext2"](w, ["N", "V"])["all_zero"])

G = w.pair("P")["G"]
print("I =", G.names(G.I))
print("Z =", G.names(G.Z))
print("gHTCP validation passed:", STEPS["validate"](w, ["P"])["ok"])

eq = STEPS["equivalence"](w, ["P"])
print(f"Z/I -> mod kA3: equivalence on {eq['pairs']} hom pairs:", eq["ok"])
for target, source in sorted(eq["density"].items()):
    print(f"   interval {target:7} <- {source}")
probe = STEPS["non_exactness"](w, ["P"])
print("the equivalence is exact:", probe["exact"], " witness:", probe["witness"])
