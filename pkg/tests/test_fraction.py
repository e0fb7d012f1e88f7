import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ambikit.fraction import (
    DenominatorOutsideMonoid,
    MonoidGens,
    RationalFunction,
    arith,
    factor_denominator,
    reduce,
    substitute,
)
from ambikit.modelzoo import sym_matrix, sym_table
from ambikit.polyring import VarTable

from conftest import random_poly

V = VarTable(["x", "y", "z", "t"])
x, y, z, t = V.gens()
R = RationalFunction.from_poly


def test_reduce_examples():
    assert reduce(x**2 - y**2, x - y) == R(x + y)
    r = reduce(x, -y)
    assert r.num == -x and r.den == y
    assert reduce(V.zero(), x + 1).den == V.one()
    with pytest.raises(ZeroDivisionError):
        reduce(x, V.zero())


def test_arith_examples():
    inv = RationalFunction(V.one(), x)
    assert arith(inv, inv, "+") == RationalFunction(2 * V.one(), x)
    assert arith(RationalFunction(x, y), RationalFunction(y, x), "*") == R(V.one())
    assert arith(inv, RationalFunction(V.one(), x**2), "/") == R(x)
    with pytest.raises(ZeroDivisionError):
        arith(inv, R(V.zero()), "/")


def test_text_form():
    r = RationalFunction(x - y, x * z)
    assert str(r) == "(x - y) / x*z"
    assert RationalFunction.parse(V, str(r)) == r
    assert str(R(x)) == "x"


def test_factor_denominator_examples():
    S3 = sym_table("s", 3)
    det = sym_matrix(S3, "s", 3).det()
    num = S3.parse("s_1_2*s_2_3 - s_1_3*s_2_2")
    n, f = factor_denominator(RationalFunction(num, det), MonoidGens([det]))
    assert n == num and f.exponents == (1,) and f.unit == 1
    n, f = factor_denominator(R(x + y), MonoidGens([x]))
    assert n == x + y and f.exponents == (0,)
    with pytest.raises(DenominatorOutsideMonoid) as info:
        factor_denominator(RationalFunction(V.one(), x * z), MonoidGens([x]))
    assert info.value.cofactor == z


def test_numerator_sign_survives_negative_generator():
    # generators keep their sign; -x is positive where x < 0
    S = MonoidGens([-x])
    n, f = factor_denominator(RationalFunction(y, x), S)
    assert f.unit > 0
    assert n == -y


def test_substitute_examples():
    S3 = sym_table("s", 3)
    M = sym_matrix(S3, "s", 3)
    det = M.det()
    adj = M.adjugate()
    K = sym_table("k", 3)
    assignment = []
    for name in K.names:
        _, i, j = name.split("_")
        assignment.append(RationalFunction(adj[int(i) - 1, int(j) - 1], det))
    got = substitute(K.var("k_1_2"), assignment, S3)
    assert got == RationalFunction(S3.parse("s_1_3*s_2_3 - s_1_2*s_3_3"), det)
    W = VarTable(["x"])
    assert substitute(W.var("x"), [R(W.var("x"))], W) == R(W.var("x"))
    inv_t = RationalFunction(V.one(), t)
    assert substitute(x + y, [inv_t, inv_t, R(z), R(t)], V) == RationalFunction(2 * V.one(), t)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reduce_is_idempotent_and_recovers_numerators(seed):
    rng = random.Random(seed)
    p, k = random_poly(V, rng), random_poly(V, rng, terms=2, degree=1)
    if not k or not p:
        return
    S = MonoidGens([x, y + 1])
    s = x**2 * (y + 1)
    r = reduce(p * k, s * k)
    assert reduce(r.num, r.den) == r
    n, f = factor_denominator(r, S)
    assert f.unit > 0
    # n / monoid part is still p / s
    assert n * s == p * f.as_polynomial(S)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_sign_preservation(seed):
    rng = random.Random(seed)
    p = random_poly(V, rng)
    S = MonoidGens([x, y + z * z + 1])
    den = x**2 * (y + z * z + 1)
    r = reduce(p, den)
    n, _ = factor_denominator(r, S)
    pt = {"x": Fraction(rng.randint(1, 9), 3), "y": Fraction(rng.randint(0, 9), 2),
          "z": rng.randint(-3, 3), "t": rng.randint(-3, 3)}
    v, w = r.evaluate(pt), n.evaluate(pt)
    assert (v > 0) == (w > 0) and (v == 0) == (w == 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_substitute_respects_ring_structure(seed):
    rng = random.Random(seed)
    W = VarTable(["a", "b"])
    p, q = random_poly(W, rng, degree=2), random_poly(W, rng, degree=2)
    assignment = [RationalFunction(x + 1, y**2 + 1), RationalFunction(z, x + 1)]
    sp, sq = substitute(p, assignment, V), substitute(q, assignment, V)
    assert substitute(p + q, assignment, V) == sp + sq
    assert substitute(p * q, assignment, V) == sp * sq
    pt = {"x": Fraction(1, 3), "y": 2, "z": -1, "t": 0}
    img = {"a": assignment[0].evaluate(pt), "b": assignment[1].evaluate(pt)}
    assert sp.evaluate(pt) == p.evaluate(img)
