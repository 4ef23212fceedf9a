import random

from hypothesis import given, settings
from hypothesis import strategies as st

from htcpkit.quivrep import ModuleCategory, QuiverPresentation
from htcpkit.tricplx import ComplexCategory

A2 = QuiverPresentation(["1", "2"], [("a", "1", "2")], []).algebra()
M = ModuleCategory(A2)
K = ComplexCategory(M, window=(-5, 5))
P1, P2 = K.stalk("1"), K.stalk("2")
S1 = K.projective_resolution(M.simple("1"))


def test_resolution_homology():
    assert K.homology_dims(S1) == {0: (1, 0)}
    assert K.homology_dims(K.shift(S1, -2)) == {2: (1, 0)}


def test_shift_hom_is_ext():
    # Hom(S1, P2[1]) = Ext^1(S1, P2)
    assert K.hom(S1, K.shift(P2, 1)).dim == 1
    assert K.hom(P1, K.shift(P2, 1)).dim == 0


def test_cone_triangle_composites_vanish():
    f = K.hom(P2, P1).basis[0]
    t = K.cone(f)
    assert K.hom(P2, t.g.target).is_zero(t.g @ f)
    assert K.hom(P1, t.h.target).is_zero(t.h @ t.g)
    assert K.homology_dims(t.g.target) == {0: (1, 0)}


def test_rotation_is_triangle():
    f = K.hom(P2, P1).basis[0]
    r = K.rotate(K.cone(f))
    assert K.hom(r.f.source, r.g.target).is_zero(r.g @ r.f)


def _objects():
    return [K.shift(X, n) for X in (P1, P2, S1) for n in (-1, 0, 1)]


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.integers(0, 10_000))
def test_octahedron_commutes(seed):
    rng = random.Random(seed)
    objs = _objects()
    X, Y, Z = (rng.choice(objs) for _ in range(3))
    f = K.hom(X, Y).random_element(rng)
    g = K.hom(Y, Z).random_element(rng)
    r = K.octahedron(f, g)
    assert all(r["checks"].values()), r["checks"]


def test_cocone_of_projective_cover():
    g = K.hom(P1, S1).basis[0]
    t = K.cocone(g)
    assert t.g == g
    assert K.hom(t.f.source, S1).is_zero(g @ t.f)
