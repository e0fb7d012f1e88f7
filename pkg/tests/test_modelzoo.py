from fractions import Fraction

import pytest

from ambikit.birational import verify_inverse
from ambikit.documents import bundled
from ambikit.fraction import RationalFunction
from ambikit.implicitize import ParameterSampler
from ambikit.modelzoo import (
    GraphSpec,
    LyapunovSpec,
    MalformedSpec,
    StagedTreeSpec,
    build_concentration,
    build_lyapunov,
    build_sem,
    build_staged_tree,
    kron_system,
    parse_constraints,
    recovery_system,
    sym_matrix,
)
from ambikit.polyring import VarTable

# symbolic round trip is cheap up to four Gaussian nodes and 16 leaves
DESK = ["colored_dag", "complete3", "cycle4", "dag3_complete", "dag4_minus_14", "error_intervention",
        "monotone_intervention", "mtp2_path3", "path3", "staged_7a", "staged_7b", "staged_7c",
        "staged_trivial", "verma", "lyapunov"]


@pytest.mark.parametrize("name", DESK)
def test_inverse_is_exact(name):
    m = bundled(name).build()
    assert m.iso.full
    assert verify_inverse(m.iso, both=True).ok


@pytest.mark.parametrize("name", ["rcon", "dag6"])
def test_inverse_at_sample_points(name):
    m = bundled(name).build()
    for theta in ParameterSampler(m, seed=3).take(5):
        assert m.iso.beta(m.iso.alpha(theta)) == theta


def test_concentration_monoids():
    m = build_concentration(GraphSpec(3, (("undirected", 1, 2), ("undirected", 2, 3))))
    S, K = m.model_vars, m.param_vars
    assert sym_matrix(S, "s", 3).det() in list(m.iso.S)
    assert sym_matrix(K, "k", 3).det() in list(m.iso.Sbar)
    assert m.eq_gens == (K.var("k_1_3"),)


def test_concentration_rejects_directed_edges():
    with pytest.raises(MalformedSpec):
        build_concentration(GraphSpec(2, (("directed", 1, 2),)))


def test_sem_parameters_and_ties():
    m = bundled("colored_dag").build()
    P = m.param_vars
    assert P.parse("l_1_2 - l_1_3") in m.eq_gens or P.parse("l_1_3 - l_1_2") in m.eq_gens
    assert all(g.total_degree() == 1 for g in m.eq_gens)
    with pytest.raises(MalformedSpec):
        build_sem(GraphSpec(2, (("directed", 2, 1),)))


def test_sem_forward_map_is_trek_rule():
    m = bundled("dag3_complete").build()
    P = m.param_vars
    got = m.iso.alpha["s_1_2"]
    assert got == RationalFunction.from_poly(P.parse("w_1_1*l_1_2"))
    assert m.iso.beta["l_1_2"] == RationalFunction(m.model_vars.parse("s_1_2"), m.model_vars.parse("s_1_1"))


def test_interventions_share_unchanged_mechanisms():
    m = bundled("monotone_intervention").build()
    P = m.param_vars
    assert P.parse("w_1_1_i1 - w_1_1") in m.eq_gens
    assert P.parse("w_2_2_i1 - w_2_2") in m.ineq_gens


def test_staged_tree_trivial():
    m = bundled("staged_trivial").build()
    assert m.param_vars.names == ("tau", "t_0")
    assert m.model_vars.names == ("p_0", "p_1")
    tau, t0 = m.param_vars.gens()
    assert m.iso.alpha["p_0"] == RationalFunction.from_poly(tau * t0)
    assert m.iso.alpha["p_1"] == RationalFunction.from_poly(tau * (1 - t0))


def test_staged_tree_mass_and_stage_equations():
    m = bundled("staged_7c").build()
    assert len(m.param_vars) == len(m.model_vars) == 16
    total = sum((c for c in m.iso.alpha.components), RationalFunction.from_poly(m.param_vars.zero()))
    assert total == RationalFunction.from_poly(m.param_vars.var("tau"))
    # total mass one, then k - 1 ties per stage of k nodes
    assert m.eq_gens[0] == m.param_vars.parse("tau - 1")
    assert len(m.eq_gens) == 1 + (1 + 1 + 3)


def test_staged_tree_relabelling():
    t = StagedTreeSpec.binary(2, levels=["B", "A"], coordinates=["A", "B"])
    assert t.leaf_label("01") == "10"
    m = build_staged_tree(t)
    assert m.model_vars.names == ("p_00", "p_01", "p_10", "p_11")
    with pytest.raises(MalformedSpec):
        StagedTreeSpec({"r": ("a", "b")}, leaf_labels={"a": "x", "b": "x"})
    with pytest.raises(MalformedSpec):
        StagedTreeSpec({"r": ("a",)})
    with pytest.raises(MalformedSpec):
        StagedTreeSpec.binary(2, stages=[("0", "00")])


def test_lyapunov_variance_pullback():
    m = build_lyapunov(LyapunovSpec(3))
    P = m.param_vars
    assert P.names == ("m_1_1", "m_2_1", "m_3_1", "m_2_2", "m_3_2", "m_3_3")
    assert m.iso.alpha["s_1_1"] == RationalFunction(P.one(), -2 * P.var("m_1_1"))


def test_lyapunov_determinants():
    spec = LyapunovSpec(3)
    m = build_lyapunov(spec)
    P, S = m.param_vars, m.model_vars
    MS = sym_matrix(S, "s", 3)
    lead = [MS.minor([0], [0]), MS.minor([0, 1], [0, 1]), MS.det()]
    assert recovery_system(S, spec).det() == 8 * lead[0] * lead[1] * lead[2]
    m11, m22, m33 = (P.var(f"m_{i}_{i}") for i in (1, 2, 3))
    want = -8 * m11 * m22 * m33 * ((m11 + m22) * (m11 + m33) * (m22 + m33)) ** 2
    # kron_system already carries the minus sign
    assert kron_system(P, spec).det() == want


def test_lyapunov_validation():
    with pytest.raises(MalformedSpec):
        build_lyapunov(LyapunovSpec(3, support=((1, 1), (2, 2), (3, 3))))
    with pytest.raises(MalformedSpec):
        build_lyapunov(LyapunovSpec(2, C=((1, 2), (2, 1))))
    with pytest.raises(MalformedSpec):
        LyapunovSpec(2, C=((1, 0), (1, 1)))


def test_parse_constraints():
    V = VarTable(["a", "b"])
    e, i, n = parse_constraints(V, ["a == b", "a <= 1", "b > 0", ("a", "!=")])
    assert e == [V.parse("a - b")]
    assert i == [V.parse("1 - a"), V.parse("b")]
    assert n == [V.parse("b"), V.parse("a")]
    with pytest.raises(MalformedSpec):
        parse_constraints(V, ["a ~ b"])


def test_graph_validation():
    with pytest.raises(MalformedSpec):
        GraphSpec(2, (("undirected", 1, 1),))
    with pytest.raises(MalformedSpec):
        GraphSpec(2, (("undirected", 1, 2), ("undirected", 2, 1)))
    with pytest.raises(MalformedSpec):
        GraphSpec(2, interventions=((3,),))


def test_sample_points_are_interior():
    m = bundled("cycle4").build()
    for theta in ParameterSampler(m, seed=1).take(10):
        assert all(g.evaluate(theta) == 0 for g in m.eq_gens)
        assert all(g.evaluate(theta) > 0 for g in m.iso.Sbar)
        assert all(isinstance(v, (int, Fraction)) for v in theta.values())
