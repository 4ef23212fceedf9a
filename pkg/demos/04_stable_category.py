"""mod kA2 modulo projectives, viewed as a localization at split sections."""
from htcpkit.cli import STEPS, World, load

w = World(load("stable_quotient_a2"), seed=0)
r = STEPS["stable_quotient"](w, ["D"])
print("sections with projective cokernel:", r["sections"], " all inverted:", r["sections_inverted"])
print("nonzero indecomposables left:", r["nonzero_indecomposables"])
for name, v in sorted(r["functors"].items()):
    print(f"   {name:20} inverts sections: {v['inverts_sections']!s:5}  factors: {v['factors']}")
