import random

import pytest

from htcpkit import cotorsion as ct


def test_auslander_ghtcp(world):
    w = world("auslander_a3")
    G = w.pair("P")["G"]
    rep = ct.validate_ghtcp(G)
    assert rep["passed"]
    assert G.names(G.I) == ["5/6", "4", "4/5"]
    assert len(G.names(G.Z)) == 9


def test_auslander_hypotheses(world):
    hyp = world("auslander_a3").pair("P")["hyp"]
    assert hyp["enough_projectives"] and hyp["cotorsion_in_N"] and hyp["ext2_vanishing"]


def test_degenerate_choice_reports_hypotheses(world):
    w = world("auslander_a3")
    from htcpkit.quivrep import RecollementData
    R = RecollementData(w.modules, ["1", "2", "3"])
    N = w._members(w.subcats["N"])
    try:
        _, hyp = ct.abelian_recollement_ghtcp(w.E, R, N, [])
        assert hyp["cotorsion_in_N"] is False
    except ct.HypothesisError as e:
        assert e.witness is not None


def test_theorem_a_consistent(world):
    for name, pair, expect in [("auslander_a3", "P", True), ("stable_quotient_a2", "Q", True),
                               ("htcp_separating_a2", "G", True), ("broken_a2", "B", False)]:
        r = ct.theorem_a_check(world(name).pair(pair)["G"])
        vals = {r[c]["ok"] for c in ("i", "ii", "iii", "iv")}
        assert vals == {expect}, name


def test_broken_pair_fails_hov2_with_witness(world):
    rep = ct.validate_ghtcp(world("broken_a2").pair("B")["G"])
    assert not rep["passed"]
    assert rep["hov2"]["witness"]["object"] == "S1"


def test_htcp_separates(world):
    r = ct.htcp_validate(world("htcp_separating_a2").pair("G")["G"])
    assert r["ghtcp"] and not r["htcp"]
    assert r["hov3"]["witness"]["not_extension_closed"] == "D"


def test_heart_pair_is_cotorsion(world):
    w = world("heart_a2_tstructure")
    assert ct.cotorsion_pair_check(w.E, w.subcats["S"], w.subcats["V"])["ok"]


def test_roof_round_trip(world):
    w = world("auslander_a3")
    G = w.pair("P")["G"]
    rng = random.Random(11)
    names = list(w.universe.names)
    for _ in range(20):
        X, Y = w.universe[rng.choice(names)], w.universe[rng.choice(names)]
        fb = w.cat.hom(G.QLR(X), G.QLR(Y)).random_element(rng)
        assert ct.roof_decompose(G, X, Y, fb)["roundtrip"]


def test_misc1_and_w_sweep(world):
    G = world("auslander_a3").pair("P")["G"]
    r = ct.misc1_sweeps(G)
    assert r["hypotheses"] and r["ok"] and r["R_wfib"]["tested"] > 0
    assert ct.w_sweep(G)["ok"]


def test_w_sweep_gated_off_heart(world):
    G = world("heart_a2_tstructure").pair("H")["G"]
    r = ct.w_sweep(G)
    assert r["hypotheses"] is False and r["tested"] == 0


def test_classify_canonical_maps(world):
    w = world("auslander_a3")
    G = w.pair("P")["G"]
    for _, X in w.universe:
        tags = ct.classify_morphism(G, G.p(X))
        assert tags["wfib"] and tags["udef"]


def test_wic_report_runs(world):
    r = ct.wic_report(world("stable_quotient_a2").E, random.Random(0), 10)
    assert "ok" in r


@pytest.mark.parametrize("name", ["auslander_a3", "heart_a2_tstructure"])
def test_approximation_halves(world, name):
    w = world(name)
    G = w.pair(w.sc.pairs[0][0])["G"]
    assert G.left.validate()["ok"] and G.right.validate()["ok"]
