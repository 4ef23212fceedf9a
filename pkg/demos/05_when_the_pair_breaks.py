"""Two near misses: a pair failing (Hov2), and a gHTCP that is not an HTCP."""
from htcpkit.cli import STEPS, World, load

w = World(load("broken_a2"), seed=0)
v = STEPS["validate"](w, ["B"])
print("((C,C),(C,add P)) passes:", v["ok"], " (Hov2) witness:", v["hov2"]["witness"])
ta = STEPS["theorem_a"](w, ["B"])
print("the four equivalent conditions:", {c: ta[c]["ok"] for c in ("i", "ii", "iii", "iv")})

w = World(load("htcp_separating_a2"), seed=0)
h = STEPS["htcp"](w, ["G"])
print("((D,C),(C,D)) with D = add(S1 + S2): gHTCP", h["ghtcp"], " HTCP", h["htcp"])
print("(Hov3) witness:", h["hov3"]["witness"])
