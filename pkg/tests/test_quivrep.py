import pytest

from htcpkit.quivrep import ModuleCategory, QuiverPresentation, RecollementData, Rep

A2 = QuiverPresentation(["1", "2"], [("a", "1", "2")], []).algebra()
A3 = QuiverPresentation(["1", "2", "3"], [("x", "1", "2"), ("y", "2", "3")], []).algebra()


def test_path_algebra_dimensions():
    assert A2.dim == 3
    assert A3.dim == 6


def test_projectives_injectives_simples_a2():
    M = ModuleCategory(A2)
    assert M.projective("1").dim_vector() == (1, 1)
    assert M.projective("2").dim_vector() == (0, 1)
    assert M.injective("1").dim_vector() == (1, 0)
    assert M.is_projective(M.projective("1"))
    assert not M.is_projective(M.simple("1"))


def test_ext_groups_a2():
    M = ModuleCategory(A2)
    S1, S2 = M.simple("1"), M.simple("2")
    assert M.ext_dim(1, S1, S2) == 1
    assert M.ext_dim(1, S2, S1) == 0
    assert M.ext_dim(2, S1, S2) == 0
    assert M.projective_dimension(S1) == 1


def test_realized_extension_is_nonsplit():
    M = ModuleCategory(A2)
    S1, S2 = M.simple("1"), M.simple("2")
    ses = M.realize_ext1(S1, S2, [1])
    assert M.is_short_exact(ses)
    assert ses.middle.dim_vector() == (1, 1)
    assert M.ext_class(ses) == [1]


def test_relations_enforced(world):
    w = world("auslander_a3")
    B = w.algebra
    with pytest.raises(ValueError):
        Rep(B, {"1": 1, "2": 1, "4": 1}, {"a": [[1]], "c": [[1]]}, check=True)
    assert B.dim == sum(w.modules.projective(v).dim for v in B.vertices)


def test_corner_algebra_is_a3(world):
    w = world("auslander_a3")
    R = RecollementData(w.modules, ["1", "2", "3"])
    assert R.corner.dim == 6
    kernel = [n for n, X in w.universe if R.in_kernel(X)]
    assert sorted(kernel) == sorted(["5/6", "4", "6", "5", "4/5"])


def test_kernel_cokernel_pushout():
    M = ModuleCategory(A2)
    P1 = M.projective("1")
    f = M.projective_cover(M.simple("1"))
    k = M.kernel(f)
    assert k.source.dim_vector() == (0, 1)
    assert M.is_mono(k) and M.is_epi(f)
    assert M.cokernel(k).target.dim_vector() == (1, 0)
    assert P1.dim == 2
