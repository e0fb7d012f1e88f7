"""Ideals, Groebner bases, saturation and elimination over ``Polynomial``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from ..fraction import MonoidGens
from ..polyring import Polynomial, VarTable, VarTableMismatch
from .engine import Deadline, DeadlineExceeded, Engine
from .order import MonomialCodec, TermOrder

__all__ = [
    "IdealGens",
    "GroebnerBasis",
    "normal_form",
    "buchberger",
    "saturate",
    "saturate_monoid",
    "eliminate",
    "ideal_equal",
    "ideal_quotient",
    "intersect",
    "is_homogeneous",
]

DEFAULT_STRATEGY = "sugar"


@dataclass(frozen=True)
class IdealGens:
    """Generators of an ideal together with the term order used for it."""

    gens: tuple
    order: TermOrder
    vars: VarTable

    def __init__(self, gens: Iterable[Polynomial], vars: VarTable | None = None,
                 order: TermOrder | None = None):
        gens = [g for g in gens]
        if vars is None:
            if not gens:
                raise ValueError("an empty generator list needs an explicit VarTable")
            vars = gens[0].vars
        for g in gens:
            if g.vars != vars:
                raise VarTableMismatch("generator over a different table")
        order = order or TermOrder.grevlex(len(vars))
        if order.nvars != len(vars):
            raise ValueError("order size does not match the table")
        object.__setattr__(self, "gens", tuple(g for g in gens if g))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "vars", vars)

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def strings(self) -> list[str]:
        return [str(g) for g in self.gens]

    def to_json(self) -> dict:
        return {"vars": list(self.vars.names), "order": self.order.describe(), "gens": self.strings()}

    @classmethod
    def from_json(cls, doc: dict | str) -> "IdealGens":
        if isinstance(doc, str):
            doc = json.loads(doc)
        vars = VarTable(doc["vars"])
        order = TermOrder.from_description(doc["order"]) if "order" in doc else None
        return cls([vars.parse(s) for s in doc["gens"]], vars, order)

    def __str__(self) -> str:
        if not self.gens:
            return "<0>"
        return "<" + ", ".join(self.strings()) + ">"


@dataclass(frozen=True)
class GroebnerBasis:
    """A Groebner basis; when ``reduced`` it is the unique monic inter-reduced one."""

    basis: tuple
    order: TermOrder
    vars: VarTable
    reduced: bool = True

    def ideal(self) -> IdealGens:
        return IdealGens(self.basis, self.vars, self.order)

    def normalized(self) -> tuple:
        """Basis elements made primitive over the integers (same ideal)."""
        return tuple(g.normalize() for g in self.basis)

    def leading_monomials(self) -> list[tuple]:
        codec = _codec(self.order)
        out = []
        for g in self.basis:
            out.append(max(g.terms, key=codec.encode))
        return out

    def contains(self, f: Polynomial) -> bool:
        return not normal_form(f, self)

    def dimension(self) -> int:
        """Krull dimension from the leading-term ideal (maximal independent set)."""
        n = len(self.vars)
        if not self.basis:
            return n
        lms = [frozenset(i for i, x in enumerate(e) if x) for e in self.leading_monomials()]
        if any(not s for s in lms):
            return -1
        best = 0

        def grow(chosen: frozenset, start: int):
            nonlocal best
            best = max(best, len(chosen))
            if len(chosen) + (n - start) <= best:
                return
            for v in range(start, n):
                c2 = chosen | {v}
                if all(not s <= c2 for s in lms):
                    grow(c2, v + 1)

        grow(frozenset(), 0)
        return best

    def to_json(self) -> dict:
        return {"vars": list(self.vars.names), "order": self.order.describe(),
                "gens": [str(g) for g in self.normalized()]}


_CODECS: dict = {}


def _codec(order: TermOrder) -> MonomialCodec:
    c = _CODECS.get(order)
    if c is None:
        if len(_CODECS) > 64:
            _CODECS.clear()
        c = _CODECS[order] = MonomialCodec(order)
    return c


def _to_packed(p: Polynomial, codec: MonomialCodec):
    items = sorted(((codec.encode(e), c) for e, c in p.terms.items()), reverse=True)
    keys = [k for k, _ in items]
    coeffs = [mpq(c) if type(c) is int else mpq(c.numerator, c.denominator) for _, c in items]
    return keys, coeffs


def _from_packed(keys, coeffs, codec: MonomialCodec, vars: VarTable) -> Polynomial:
    terms = {}
    for k, c in zip(keys, coeffs):
        q = Fraction(int(c.numerator), int(c.denominator))
        terms[codec.decode(k)] = q.numerator if q.denominator == 1 else q
    return Polynomial(vars, terms, _trusted=True)


_GB_CACHE: dict = {}
_GB_CACHE_LIMIT = 256


def buchberger(I: IdealGens, deadline: Deadline | None = None,
               strategy: str | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` under ``I.order``."""
    strategy = strategy or DEFAULT_STRATEGY
    key = (I.vars, I.order, frozenset(I.gens), strategy)
    hit = _GB_CACHE.get(key)
    if hit is not None:
        return hit
    codec = _codec(I.order)
    eng = Engine(codec, deadline, strategy)
    active = eng.run([_to_packed(g, codec) for g in I.gens])
    red = eng.reduced_basis(active)
    basis = tuple(_from_packed(k, c, codec, I.vars) for k, c in red)
    gb = GroebnerBasis(basis, I.order, I.vars, True)
    if len(_GB_CACHE) >= _GB_CACHE_LIMIT:
        _GB_CACHE.clear()
    _GB_CACHE[key] = gb
    return gb


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by ``G`` (fully reduced)."""
    if f.vars != G.vars:
        raise VarTableMismatch("polynomial and basis over different tables")
    if not f or not G.basis:
        return f
    codec = _codec(G.order)
    eng = Engine(codec)
    for g in G.basis:
        keys, coeffs = _to_packed(g, codec)
        inv = 1 / coeffs[0]
        coeffs = [c * inv for c in coeffs]
        eng.basis.append((keys[0], codec.expmask(keys[0]), keys[1:], coeffs[1:]))
        eng.leads.append(codec.expmask(keys[0]))
    keys, coeffs = eng.reduce(*_to_packed(f, codec), True)
    return _from_packed(keys, coeffs, codec, f.vars)


def is_homogeneous(p: Polynomial, weights: Sequence[int] | None = None) -> bool:
    if not p:
        return True
    w = weights or (1,) * len(p.vars)
    degs = {sum(x * y for x, y in zip(e, w)) for e in p.terms}
    return len(degs) == 1


def _fresh_name(vars: VarTable, base: str) -> str:
    name = base
    k = 0
    while name in vars.index:
        k += 1
        name = f"{base}{k}"
    return name


def _normalized_ideal(gb: GroebnerBasis, vars: VarTable, order: TermOrder | None = None) -> IdealGens:
    return IdealGens([g.normalize() for g in gb.basis], vars, order or gb.order)


def saturate(I: IdealGens, f: Polynomial, deadline: Deadline | None = None,
             method: str = "auto", strategy: str | None = None) -> IdealGens:
    """Generators of ``I : f^oo`` (a reduced grevlex Groebner basis, made primitive).

    ``rabinowitsch`` adjoins ``t`` with ``1 - t*f`` and eliminates ``t``
    under a block order.  ``homogeneous`` (used by ``auto`` when ``I`` and
    ``f`` are homogeneous) adjoins ``d`` of weight ``deg f`` with
    ``d - f``, computes a weighted grevlex basis with ``d`` last, divides
    out powers of ``d`` and substitutes ``d = f``.
    """
    if f.vars != I.vars:
        raise VarTableMismatch("saturating polynomial over a different table")
    if not f:
        raise ValueError("cannot saturate at the zero polynomial")
    vars = I.vars
    out_order = TermOrder.grevlex(len(vars))
    if I.is_zero():
        return IdealGens([], vars, out_order)
    if f.is_constant():
        return _normalized_ideal(buchberger(IdealGens(I.gens, vars, out_order), deadline, strategy), vars)
    if method == "auto":
        method = "homogeneous" if all(is_homogeneous(g) for g in I.gens) and is_homogeneous(f) else "rabinowitsch"
    if method == "rabinowitsch":
        t = _fresh_name(vars, "t")
        big = VarTable((t,) + vars.names)
        order = TermOrder.elimination(1, len(big))
        tv = big.var(t)
        gens = [g.embed(big) for g in I.gens] + [1 - tv * f.embed(big)]
        gb = buchberger(IdealGens(gens, big, order), deadline, strategy)
        keep = [g.embed(vars) for g in gb.basis if g.degree_in(0) <= 0]
        if not keep:
            return IdealGens([], vars, out_order)
        return _normalized_ideal(buchberger(IdealGens(keep, vars, out_order), deadline, strategy), vars)
    if method == "homogeneous":
        d = _fresh_name(vars, "d")
        big = VarTable(vars.names + (d,))
        deg = f.total_degree()
        order = TermOrder.grevlex(len(big), (1,) * len(vars) + (deg,))
        dv = big.var(d)
        gens = [g.embed(big) for g in I.gens] + [dv - f.embed(big)]
        gb = buchberger(IdealGens(gens, big, order), deadline, strategy)
        n = len(vars)
        fbig = f.embed(big)
        out = []
        for g in gb.basis:
            low = min(e[n] for e in g.terms)
            if low:
                g = Polynomial(big, {e[:n] + (e[n] - low,): c for e, c in g.terms.items()}, _trusted=True)
            if g.degree_in(n) > 0:
                g = _substitute_last(g, fbig)
            out.append(g.embed(vars))
        return _normalized_ideal(buchberger(IdealGens(out, vars, out_order), deadline, strategy), vars)
    raise ValueError(f"unknown saturation method {method!r}")


def _substitute_last(g: Polynomial, f: Polynomial) -> Polynomial:
    n = len(g.vars) - 1
    parts = g.coefficients_in(n)
    res = g.vars.zero()
    fp = g.vars.one()
    for k in range(max(parts) + 1):
        if k in parts:
            res = res + parts[k] * fp
        fp = fp * f
    return res


def saturate_monoid(I: IdealGens, S: MonoidGens | Sequence[Polynomial],
                    deadline: Deadline | None = None, method: str = "auto",
                    strategy: str | None = None) -> IdealGens:
    """``I : S^oo`` as a left fold of :func:`saturate`, re-folded to a fixed point."""
    gens = list(S.gens if isinstance(S, MonoidGens) else S)
    cur = IdealGens([g.normalize() for g in buchberger(
        IdealGens(I.gens, I.vars, TermOrder.grevlex(len(I.vars))), deadline, strategy).basis], I.vars)
    if cur.is_zero():
        return cur
    while True:
        start = frozenset(cur.gens)
        for s in gens:
            s = s.embed(I.vars) if s.vars != I.vars else s
            cur = saturate(cur, s, deadline, method, strategy)
        if frozenset(cur.gens) == start:
            return cur


def eliminate(I: IdealGens, drop: Iterable[str], deadline: Deadline | None = None,
              strategy: str | None = None) -> IdealGens:
    """Generators of ``I`` intersected with the ring without the ``drop`` variables.

    The result lives over the table of kept variables (in their original order).
    """
    vars = I.vars
    drop = [v for v in vars.names if v in set(drop)]
    keep = [v for v in vars.names if v not in set(drop)]
    kvars = VarTable(keep)
    korder = TermOrder.grevlex(len(kvars))
    if not drop:
        return _normalized_ideal(buchberger(IdealGens(I.gens, vars, TermOrder.grevlex(len(vars))), deadline, strategy), vars)
    if not keep:
        raise ValueError("cannot eliminate every variable")
    if I.is_zero():
        return IdealGens([], kvars, korder)
    big = VarTable(drop + keep)
    order = TermOrder.elimination(len(drop), len(big))
    gb = buchberger(IdealGens([g.embed(big) for g in I.gens], big, order), deadline, strategy)
    nd = len(drop)
    out = [g.embed(kvars) for g in gb.basis if all(not any(e[:nd]) for e in g.terms)]
    return IdealGens([g.normalize() for g in out], kvars, korder)


def ideal_equal(I: IdealGens, J: IdealGens, deadline: Deadline | None = None) -> bool:
    """True iff the reduced grevlex bases of ``I`` and ``J`` coincide."""
    if I.vars != J.vars:
        raise VarTableMismatch("ideals over different tables")
    order = TermOrder.grevlex(len(I.vars))
    a = buchberger(IdealGens(I.gens, I.vars, order), deadline)
    b = buchberger(IdealGens(J.gens, J.vars, order), deadline)
    return set(a.basis) == set(b.basis)


def intersect(I: IdealGens, J: IdealGens, deadline: Deadline | None = None) -> IdealGens:
    """``I`` intersected with ``J`` via ``t*I + (1 - t)*J`` and elimination of ``t``."""
    vars = I.vars
    t = _fresh_name(vars, "u")
    big = VarTable((t,) + vars.names)
    tv = big.var(t)
    gens = [tv * g.embed(big) for g in I.gens] + [(1 - tv) * g.embed(big) for g in J.gens]
    res = eliminate(IdealGens(gens, big), [t], deadline)
    return IdealGens([g.embed(vars) for g in res.gens], vars)


def ideal_quotient(I: IdealGens, f: Polynomial, deadline: Deadline | None = None) -> IdealGens:
    """``I : f`` computed as ``(I intersected with <f>) / f``."""
    vars = I.vars
    if I.is_zero():
        return IdealGens([], vars)
    inter = intersect(I, IdealGens([f], vars), deadline)
    return IdealGens([g.divexact(f).normalize() for g in inter.gens], vars)


__all__ += ["Deadline", "DeadlineExceeded", "TermOrder"]
