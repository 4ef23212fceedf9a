import pytest

from htcpkit.cli import fixture_names, fixture_text
from htcpkit.scenario import ScenarioError, parse_scenario

MIN = "[field]\nQQ\n[quiver]\nvertices 1 2\narrow a 1 2\n"


def test_minimal_parses():
    sc = parse_scenario(MIN)
    assert sc.vertices == ["1", "2"] and sc.arrows == [("a", "1", "2")]


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_parse(name):
    sc = parse_scenario(fixture_text(name), name)
    assert sc.pipeline and sc.expects


def test_undefined_subcategory_named():
    with pytest.raises(ScenarioError, match="'Nope'") as e:
        parse_scenario(MIN + "[subcat]\nA = perp1(Nope)\n")
    assert e.value.line == 7


def test_undefined_object_named():
    with pytest.raises(ScenarioError, match="'Q9'"):
        parse_scenario(MIN + "[objects]\nX = P(1) + Q9\n")


def test_non_prime_modulus():
    with pytest.raises(ScenarioError, match="not prime"):
        parse_scenario("[field]\nGF(9)\n[quiver]\nvertices 1\n")


def test_duplicate_step_id():
    with pytest.raises(ScenarioError, match="duplicate step"):
        parse_scenario(MIN + "[pipeline]\nuniverse\nuniverse\n")


def test_expectation_must_reference_step():
    with pytest.raises(ScenarioError, match="undefined step"):
        parse_scenario(MIN + "[pipeline]\nuniverse\n[expect]\nfoo.ok = true\n")


def test_unknown_section_and_missing_quiver():
    with pytest.raises(ScenarioError, match="unknown section"):
        parse_scenario("[nope]\n")
    with pytest.raises(ScenarioError, match="missing \\[quiver\\]"):
        parse_scenario("[field]\nQQ\n")


def test_pair_arity():
    with pytest.raises(ScenarioError, match="expects 4"):
        parse_scenario(MIN + "[subcat]\nC = all\n[pair]\nP = ghtcp C C\n")


def test_expectation_values():
    sc = parse_scenario(MIN + "[pipeline]\nuniverse as u\n[expect]\nu.size >= 2\nu.names = [\"a\"]\nu.ok == true\n")
    assert sc.expects[0][:3] == ("u.size", ">=", 2)
    assert sc.expects[1][2] == ["a"]
    assert sc.expects[2][1:3] == ("=", True)
