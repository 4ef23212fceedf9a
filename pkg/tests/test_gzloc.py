import pytest

from htcpkit import gzloc
from htcpkit.cli import STEPS
from htcpkit.cotorsion import HypothesisError
from htcpkit.heart import PreabQuotient


@pytest.fixture(scope="module")
def pq(world):
    return PreabQuotient(world("heart_a2_tstructure").pair("H")["hd"])


def test_rf_for_regular_morphisms(pq):
    r = gzloc.verify_rf(gzloc.regular_family(pq), pq, seed=2, budget=10)
    assert r["ok"]


def test_rf_for_isomorphisms(pq):
    assert gzloc.verify_rf(gzloc.isomorphisms(pq.cat), pq, seed=2, budget=10)["ok"]


def test_fraction_laws_and_dims(pq):
    FC = gzloc.FractionCategory(pq, seed=1)
    assert FC.law_checks(5)["ok"]
    X = pq.hd.heart_representatives()[0]
    assert FC.hom_dim(X, X) == pq.hd.quot.hom(X, X).dim


def test_coh_factor_rejects_non_killing_functor(world):
    w = world("heart_a2_tstructure")
    hd = w.pair("H")["hd"]
    K = w.cat
    P = K.direct_sum([w.universe["P1[0]"], w.universe["P2[0]"]]).obj
    assert gzloc.universal_coh_factor(hd, gzloc.hom_functor(K, P))["ok"]
    with pytest.raises(HypothesisError) as e:
        gzloc.universal_coh_factor(hd, gzloc.hom_functor(K, K.shift(P, 1)))
    assert e.value.witness is not None


def test_stable_quotient_universality(world):
    r = STEPS["stable_quotient"](world("stable_quotient_a2"), ["D"])
    assert r["ok"] and r["sections_inverted"]
    assert r["nonzero_indecomposables"] == 1
    assert r["functors"]["Hom(P1,-)"]["inverts_sections"] is False
    assert all(v["factors"] for k, v in r["functors"].items() if v["inverts_sections"])


def test_auslander_equivalence_and_probe(world):
    w = world("auslander_a3")
    eq = STEPS["equivalence"](w, ["P"])
    assert eq["ok"] and eq["pairs"] == 36
    pr = STEPS["non_exactness"](w, ["P"])
    assert pr["exact"] is False
    assert pr["witness"]["target_E"] == 0


def test_equivalence_detects_a_non_equivalence(world):
    # the zero functor into mod kA3 is not faithful
    w = world("auslander_a3")
    p = w.pair("P")
    R = p["R"]
    from htcpkit.cli import _interval_universe
    TU = _interval_universe(R)
    zero = R.corner_cat.zero_object()
    F = gzloc.category_functor("zero", R.corner_cat, lambda X: zero,
                               lambda f: R.corner_cat.zero_map(zero, zero))
    G = p["G"]
    items = [(n, w.universe[n]) for n in G.names(G.Z) if G.quot.hom(w.universe[n], w.universe[n]).dim]
    wit = gzloc.equivalence_check(F, G.quot, items, R.corner_cat, TU)
    assert not wit.ok and wit.failure
