from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from ambikit.polyring import Polynomial, VarTable

FIXTURES = Path(__file__).parent / "fixtures"


def to_sympy(p: Polynomial):
    """Independent representation of a polynomial for oracle comparisons."""
    syms = sympy.symbols(p.vars.names)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return sympy.Poly(expr, *syms, domain="QQ")


def random_poly(vars: VarTable, rng: random.Random, terms: int = 4, degree: int = 3,
                coeff: int = 5) -> Polynomial:
    out = {}
    for _ in range(terms):
        e = [0] * len(vars)
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(len(vars))] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            out[tuple(e)] = out.get(tuple(e), 0) + c
    return Polynomial(vars, {k: v for k, v in out.items() if v})


@pytest.fixture
def xyz() -> VarTable:
    return VarTable(["x", "y", "z"])


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20241016)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
