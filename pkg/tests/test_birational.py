import json
from fractions import Fraction

import pytest

from ambikit.birational import (
    BirationalIso,
    IsoNotFull,
    NonTerminating,
    RationalMap,
    extend_to_full,
    iso_from_json,
    iso_to_json,
    transfer,
    transfer_back,
    verify_inverse,
)
from ambikit.fraction import DenominatorOutsideMonoid, MonoidGens, RationalFunction
from ambikit.modelzoo import GraphSpec, build_concentration, sym_matrix, sym_table
from ambikit.polyring import VarTable

P = VarTable(["a", "b"])
M = VarTable(["x", "y"])
a, b = P.gens()
x, y = M.gens()


def toy_iso():
    # x = a, y = a*b ; inverse a = x, b = y/x
    alpha = RationalMap(P, M, (a, a * b))
    beta = RationalMap(M, P, (x, RationalFunction(y, x)))
    return BirationalIso(alpha, beta, MonoidGens(), MonoidGens())


@pytest.fixture(scope="module")
def inversion():
    return build_concentration(GraphSpec(n=3, edges=tuple(("undirected", i, j) for i, j in
                                                          [(1, 2), (1, 3), (2, 3)]))).iso


def test_verify_inverse_toy():
    iso = toy_iso()
    assert verify_inverse(iso, both=True).ok
    broken = BirationalIso(iso.alpha, RationalMap(M, P, (x, RationalFunction(y, x * x))),
                           MonoidGens(), MonoidGens())
    rep = verify_inverse(broken)
    assert not rep.ok and rep.failures[0][0] == "b"


def test_extend_toy_reaches_fixed_point():
    full = extend_to_full(toy_iso())
    assert full.full
    assert list(full.S) == [x] and list(full.Sbar) == [a]
    again = extend_to_full(full)
    assert again.S == full.S and again.Sbar == full.Sbar


def test_extend_round_bound():
    with pytest.raises(NonTerminating):
        extend_to_full(toy_iso(), max_rounds=0)


def test_transfer_needs_full_iso():
    with pytest.raises(IsoNotFull):
        transfer(toy_iso(), [b])
    assert transfer(toy_iso(), [a], allow_partial=True).numerators == (x,)
    with pytest.raises(DenominatorOutsideMonoid):
        transfer(toy_iso(), [b], allow_partial=True)


def test_inversion_roundtrip(inversion):
    assert inversion.full
    rep = verify_inverse(inversion, both=True)
    assert rep.ok and rep.checked == ("beta(alpha)", "alpha(beta)")


def test_inversion_extension_is_idempotent(inversion):
    again = extend_to_full(inversion)
    assert again.S == inversion.S and again.Sbar == inversion.Sbar


def test_transfer_off_diagonal_concentration(inversion):
    K = inversion.param_vars
    S = inversion.model_vars
    rep = transfer(inversion, [K.var("k_1_3")])
    num = rep.numerators[0]
    want = S.parse("s_1_2*s_2_3 - s_1_3*s_2_2")
    assert num == want or num == -want
    assert rep.denominators[0].exponents[0] == 1


def test_transfer_sign_matches_evaluation(inversion):
    K = inversion.param_vars
    g = K.var("k_1_2")
    n, d = transfer(inversion, [g]).numerators[0], transfer(inversion, [g]).denominators[0]
    pt = {"s_1_1": 3, "s_2_2": 2, "s_3_3": 5, "s_1_2": Fraction(1, 2), "s_1_3": 1, "s_2_3": Fraction(-1, 3)}
    theta = inversion.beta(pt)
    assert (g.evaluate(theta) > 0) == (n.evaluate(pt) > 0)
    assert d.unit > 0


def test_transfer_back_principal_minor(inversion):
    S = inversion.model_vars
    K = inversion.param_vars
    detS = sym_matrix(S, "s", 3).det()
    rep = transfer_back(inversion, [detS])
    assert rep.numerators[0] == K.one()


def test_json_round_trip(inversion):
    doc = json.loads(json.dumps(iso_to_json(inversion)))
    back = iso_from_json(doc)
    assert back.alpha == inversion.alpha and back.beta == inversion.beta
    assert back.S == inversion.S and back.Sbar == inversion.Sbar and back.full


def test_rational_map_validation():
    with pytest.raises(ValueError):
        RationalMap(P, M, (a,))
    m = RationalMap(P, M, (a, a * b))
    assert m["y"] == RationalFunction.from_poly(a * b)
    assert m({"a": 2, "b": 3}) == {"x": 2, "y": 6}
    assert RationalMap.from_json(m.to_json()) == m
    T = sym_table("s", 2)
    assert str(sym_matrix(T, "s", 2).det()) == "s_1_1*s_2_2 - s_1_2^2"
