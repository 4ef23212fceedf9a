import random

import pytest

from htcpkit.extri import Conflation, NotAConflation


@pytest.mark.parametrize("name", ["auslander_a3", "heart_a2_tstructure"])
def test_class_round_trip(world, name):
    w = world(name)
    E, F = w.E, w.E.field
    rng = random.Random(3)
    checked = 0
    for _, Z in w.universe:
        for _, X in w.universe:
            d = E.e_dim(Z, X)
            if not d:
                continue
            v = [F(rng.randint(-2, 2)) for _ in range(d)]
            if not any(v):
                v[0] = F.one
            c = E.realize(Z, X, v)
            assert E.is_conflation(c)
            assert list(E.class_of(c)) == v
            checked += 1
    assert checked > 0


def test_split_conflation_has_zero_class(world):
    w = world("stable_quotient_a2")
    E = w.E
    S1, P2 = w.universe["S1"], w.universe["P2"]
    c = E.realize(S1, P2, [E.field.zero])
    assert E.class_of(c) == [0]


def test_triangulated_non_triangle_rejected(world):
    w = world("heart_a2_tstructure")
    K = w.cat
    P1, P2 = w.universe["P1[0]"], w.universe["P2[0]"]
    f = K.hom(P2, P1).basis[0]
    t = K.cone(f)
    E = w.E
    with pytest.raises(NotAConflation):
        E.class_of(Conflation(f, K.zero_map(P1, t.g.target)))


def test_subcategory_membership(world):
    w = world("heart_a2_tstructure")
    S = w.subcats["S"]
    assert "P1[1]" in w.E.members(S)
    assert "P1[0]" not in w.E.members(S)
