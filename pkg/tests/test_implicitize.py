import json
from dataclasses import replace
from fractions import Fraction

import pytest

from ambikit.documents import ModelDocument, bundled
from ambikit.groebner import IdealGens, buchberger, ideal_equal, normal_form
from ambikit.implicitize import (
    EmptyParameterSpaceSuspected,
    MarkovProperty,
    NonLinearEquations,
    ParameterSampler,
    RegionSamplingExhausted,
    check_point,
    markov_property,
    model_equiv,
    sz_vanishes,
    vanishing_ideal,
    vanishing_ideal_by_elimination,
)
from ambikit.modelzoo import sym_matrix
from ambikit.polyring import minor


def doc(**kw):
    return ModelDocument.from_json(kw).build()


def test_sampler_is_seeded_and_interior():
    m = bundled("cycle4").build()
    a = ParameterSampler(m, seed=7).take(3)
    b = ParameterSampler(m, seed=7).take(3)
    assert a == b
    for theta in a:
        assert all(g.evaluate(theta) == 0 for g in m.eq_gens)
        assert all(g.evaluate(theta) >= 0 for g in m.ineq_gens)


def test_sampler_failures():
    with pytest.raises(EmptyParameterSpaceSuspected):
        markov_property(doc(family="concentration", n=2, edges=[[1, 2]],
                            constraints=["k_1_2 == 0", "k_1_2 == 1"]))
    m = doc(family="concentration", n=2, edges=[[1, 2]], constraints=["k_1_1 < 0"])
    with pytest.raises(RegionSamplingExhausted):
        ParameterSampler(m, budget=50).sample()
    with pytest.raises(EmptyParameterSpaceSuspected):
        markov_property(m, budget=50)
    nl = doc(family="concentration", n=2, edges=[[1, 2]], constraints=["k_1_2*k_1_1 == 1"])
    with pytest.raises(NonLinearEquations):
        ParameterSampler(nl)
    with pytest.raises(NonLinearEquations):
        vanishing_ideal(nl)


def test_markov_cycle_equations_are_cofactors():
    m = bundled("cycle4").build()
    mp = markov_property(m)
    MS = sym_matrix(m.model_vars, "s", 4)
    want = {
        minor(MS, [0, 1, 3], [1, 2, 3]),  # kappa_13
        minor(MS, [0, 2, 3], [0, 1, 2]),  # kappa_24
    }
    got = set(mp.equations)
    assert {p.normalize() for p in got} == {p.normalize() for p in want}
    assert len(mp.positivities) == len(m.iso.S)


def test_markov_complete_dag_has_no_equations():
    mp = markov_property(bundled("dag3_complete").build())
    assert mp.equations == ()
    assert mp.positivities


def test_markov_trivial_tree():
    mp = markov_property(bundled("staged_trivial").build())
    assert [str(p) for p in mp.equations] == ["p_0 + p_1 - 1"]


def test_markov_monotone_intervention_has_inequality():
    mp = markov_property(bundled("monotone_intervention").build())
    assert len(mp.inequalities) == 1
    assert any(p == "ineq: -w_2_2 + w_2_2_i1" for p in mp.provenance)


def test_markov_json_round_trip():
    m = bundled("verma").build()
    mp = markov_property(m)
    back = MarkovProperty.from_json(m.model_vars, json.loads(json.dumps(mp.to_json())))
    assert back == mp
    assert str(back).splitlines()[0].endswith("= 0")


def test_check_point_sample_and_perturbation():
    m = bundled("path3").build()
    mp = markov_property(m)
    theta = ParameterSampler(m, seed=2).sample()
    x = m.iso.alpha(theta)
    assert all(r.holds for r in check_point(mp, x))
    x["s_1_3"] += Fraction(1, 7)
    bad = [r for r in check_point(mp, x) if not r.holds]
    assert bad and bad[0].kind == "equation"


def test_sz_vanishes():
    m = bundled("verma").build()
    F = markov_property(m).equations[0]
    res = sz_vanishes(F, m, trials=5)
    assert res.probably_zero and 0 < res.bound < 1
    miss = sz_vanishes(m.model_vars.var("s_1_2"), m, trials=5)
    assert not miss.probably_zero and miss.value != 0
    with pytest.raises(ValueError):
        sz_vanishes(F, m, trials=0)


def test_vanishing_ideal_examples():
    m = bundled("path3").build()
    S = m.model_vars
    assert ideal_equal(vanishing_ideal(m), IdealGens([S.parse("s_1_2*s_2_3 - s_1_3*s_2_2")], S))
    assert vanishing_ideal(bundled("complete3").build()).is_zero()


@pytest.mark.parametrize("name", ["path3", "colored_dag", "staged_trivial", "dag4_minus_14"])
def test_saturation_agrees_with_elimination(name):
    m = bundled(name).build()
    assert ideal_equal(vanishing_ideal(m), vanishing_ideal_by_elimination(m))


def test_equivalence_is_reflexive():
    m = bundled("cycle4").build()
    assert model_equiv(m, m).result == "equivalent"


def test_equivalence_tree_pair_is_symmetric():
    b, c = bundled("staged_7b").build(), bundled("staged_7c").build()
    v1, v2 = model_equiv(b, c), model_equiv(c, b)
    assert v1.result == v2.result == "inequivalent"
    assert v1.certificates and v2.certificates


def _recheck(cert, first, second):
    inside = second if cert["source"] == "first" else first
    F = inside.model_vars.parse(cert["constraint"])
    if "residual" in cert:
        r = inside.iso.phi(F)
        gb = buchberger(IdealGens(inside.eq_gens, inside.param_vars))
        return bool(normal_form(r.num, gb))
    point = {k: Fraction(v) for k, v in cert["point"].items()}
    x = inside.iso.alpha(point)
    v = F.evaluate(x)
    return {"equation": v != 0, "inequality": v < 0, "inequation": v == 0, "positivity": v <= 0}[cert["kind"]]


def test_certificates_re_verify():
    b, c = bundled("staged_7b").build(), bundled("staged_7c").build()
    v = model_equiv(b, c)
    assert v.certificates
    for cert in v.certificates:
        assert _recheck(cert, b, c)


def test_equivalence_detects_sign_difference():
    plain = bundled("path3").build()
    mtp2 = bundled("mtp2_path3").build()
    v = model_equiv(plain, mtp2)
    assert v.result == "inequivalent"
    assert all(_recheck(c, plain, mtp2) for c in v.certificates)
    # without inequalities the two share their Zariski closure
    assert model_equiv(plain, mtp2, mode="zariski").result == "equivalent"


def test_equivalence_rejects_bad_mode():
    m = bundled("path3").build()
    with pytest.raises(ValueError):
        model_equiv(m, m, mode="fuzzy")


def test_box_override_narrows_sampling():
    m = bundled("path3").build()
    tight = replace(m, sample_box={**m.sample_box, "k_1_1": (4, 4, 1)})
    assert ParameterSampler(tight).sample()["k_1_1"] == 4
