"""Sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from dense exponent tuples to
nonzero coefficients (``int`` where integral, ``fractions.Fraction``
otherwise), tied to a :class:`VarTable`.  The canonical text form sorts
terms by graded reverse lexicographic order, writes powers with ``^`` and
products with ``*``, e.g. ``s_1_1*s_2_2 - s_1_2^2``.
"""

from __future__ import annotations

import heapq
import random
import re
from fractions import Fraction
from math import gcd as _igcd
from operator import add as _add
from typing import Iterable, Iterator, Mapping, Sequence, Union

Coeff = Union[int, Fraction]
Exps = tuple

__all__ = [
    "VarTable",
    "Polynomial",
    "PolyMatrix",
    "VarTableMismatch",
    "NotDivisible",
    "add",
    "mul",
    "gcd",
    "substitute",
    "evaluate",
    "determinant",
    "minor",
    "grevlex_key",
    "format_coeff",
    "parse_rational",
]


class VarTableMismatch(ValueError):
    """Operands live over different variable tables."""


class NotDivisible(ArithmeticError):
    """Exact division was requested but a remainder is left."""


def _norm(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _qdiv(a: Coeff, b: Coeff) -> Coeff:
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if not r:
            return q
    return _norm(Fraction(a) / b)


def grevlex_key(e: Exps) -> tuple:
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(e), tuple([-x for x in reversed(e)]))


def format_coeff(c: Coeff) -> str:
    if type(c) is int:
        return str(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(text: str | int | Fraction) -> Coeff:
    """Parse ``a``, ``-a``, ``a/b`` into an exact rational."""
    if isinstance(text, (int, Fraction)):
        return _norm(Fraction(text))
    return _norm(Fraction(str(text).strip()))


class VarTable:
    """Ordered, duplicate-free list of variable names."""

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise ValueError("duplicate variable names")
        for n in names:
            if not _IDENT.fullmatch(n):
                raise ValueError(f"invalid variable name {n!r}")
        self.names = names
        self.index = index
        self._hash = hash(names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, VarTable) and self.names == other.names)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)!r})"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Coeff) -> "Polynomial":
        c = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
        if not c:
            return self.zero()
        return Polynomial(self, {(0,) * len(self.names): c}, _trusted=True)

    def var(self, name: str) -> "Polynomial":
        e = [0] * len(self.names)
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): 1}, _trusted=True)

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(n) for n in self.names)

    def monomial(self, exps: Sequence[int], c: Coeff = 1) -> "Polynomial":
        if len(exps) != len(self.names):
            raise ValueError("exponent vector length mismatch")
        if not c:
            return self.zero()
        return Polynomial(self, {tuple(exps): _norm(c)}, _trusted=True)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def extend(self, extra: Iterable[str]) -> "VarTable":
        return VarTable(self.names + tuple(extra))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_lead", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[Exps, Coeff], *, _trusted: bool = False):
        self.vars = vars
        if _trusted:
            self.terms = terms
        else:
            n = len(vars)
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent vector length mismatch")
                if c:
                    clean[e] = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
            self.terms = clean
        self._lead = None
        self._hash = None

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and not any(next(iter(t))))

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values())) if self.terms else 0

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: Union[int, str]) -> int:
        i = self.vars.index[var] if isinstance(var, str) else var
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> set[int]:
        """Indices of variables that actually occur."""
        n = len(self.vars)
        out = set()
        for e in self.terms:
            for i in range(n):
                if e[i]:
                    out.add(i)
        return out

    def variables(self) -> list[str]:
        return [self.vars.names[i] for i in sorted(self.support())]

    def _leading(self):
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            e = max(self.terms, key=grevlex_key)
            self._lead = (e, self.terms[e])
        return self._lead

    def leading_monomial(self) -> Exps:
        return self._leading()[0]

    def leading_coeff(self) -> Coeff:
        return self._leading()[1]

    def sorted_terms(self) -> list[tuple[Exps, Coeff]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    # -- equality / hashing --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars is not self.vars and other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars!r} vs {other.vars!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.vars.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        try:
            q = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.terms, q.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Polynomial(self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __pos__(self) -> "Polynomial":
        return self

    def __sub__(self, other) -> "Polynomial":
        try:
            q = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in q.terms.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Polynomial(self.vars, out, _trusted=True)

    def __rsub__(self, other) -> "Polynomial":
        return (-self).__add__(other)

    def scale(self, c: Coeff) -> "Polynomial":
        if not c:
            return self.vars.zero()
        if c == 1:
            return self
        return Polynomial(self.vars, {e: _norm(v * c) for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(_norm(Fraction(other)) if type(other) is not int else other)
        try:
            q = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.terms, q.terms
        if not a or not b:
            return self.vars.zero()
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        if len(b) == 1:
            (eb, cb), = b.items()
            for ea, ca in a.items():
                out[tuple(map(_add, ea, eb))] = ca * cb
        else:
            for eb, cb in b.items():
                for ea, ca in a.items():
                    e = tuple(map(_add, ea, eb))
                    out[e] = get(e, 0) + ca * cb
            out = {e: c for e, c in out.items() if c}
        if any(type(c) is Fraction for c in out.values()):
            out = {e: _norm(c) for e, c in out.items()}
        return Polynomial(self.vars, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if k == 0:
            return self.vars.one()
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return Polynomial(self.vars, {tuple(x * k for x in e): c**k}, _trusted=True)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __truediv__(self, other) -> "Polynomial":
        """Division by a nonzero scalar or exact division by a polynomial."""
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(_norm(Fraction(1) / other))
        if isinstance(other, Polynomial):
            return self.divexact(other)
        return NotImplemented

    def divexact(self, other: "Polynomial") -> "Polynomial":
        """Quotient ``self / other``; raises :class:`NotDivisible` otherwise."""
        q = self.try_divide(other)
        if q is None:
            raise NotDivisible(f"{other} does not divide {self}")
        return q

    def try_divide(self, other: "Polynomial") -> "Polynomial | None":
        """Exact quotient, or ``None`` when ``other`` does not divide ``self``."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                d = tuple(x - y for x, y in zip(e, eb))
                if min(d) < 0:
                    return None
                out[d] = _qdiv(c, cb)
            return Polynomial(self.vars, out, _trusted=True)
        lm_b, lc_b = other._leading()
        if sum(lm_b) > self.total_degree():
            return None
        rest = [(e, c) for e, c in other.terms.items() if e != lm_b]
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(reversed(e)), e) for e in rem]
        heapq.heapify(heap)
        queued = set(rem)
        quot = {}
        while heap:
            _, _, e = heapq.heappop(heap)
            queued.discard(e)
            c = rem.get(e)
            if c is None:
                continue
            d = tuple(x - y for x, y in zip(e, lm_b))
            if min(d) < 0:
                return None
            qc = _qdiv(c, lc_b)
            quot[d] = qc
            del rem[e]
            for eb, cb in rest:
                t = tuple(map(_add, d, eb))
                v = rem.get(t, 0) - qc * cb
                if v:
                    rem[t] = _norm(v)
                    if t not in queued:
                        queued.add(t)
                        heapq.heappush(heap, (-sum(t), tuple(reversed(t)), t))
                else:
                    rem.pop(t, None)
        return Polynomial(self.vars, quot, _trusted=True)

    def divides(self, other: "Polynomial") -> bool:
        """True iff ``self`` divides ``other`` exactly."""
        return other.try_divide(self) is not None

    # -- content / normalization ---------------------------------------
    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive over the integers."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            if type(c) is int:
                num = _igcd(num, c)
            else:
                num = _igcd(num, c.numerator)
                den = den * c.denominator // _igcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Integer-primitive associate with the sign unchanged."""
        if not self.terms:
            return self
        c = self.content()
        if c == 1:
            return self
        if c.denominator == 1:
            k = c.numerator
            if all(type(v) is int for v in self.terms.values()):
                return Polynomial(self.vars, {e: v // k for e, v in self.terms.items()}, _trusted=True)
        inv = 1 / c
        return Polynomial(self.vars, {e: _norm(v * inv) for e, v in self.terms.items()}, _trusted=True)

    def normalize(self) -> "Polynomial":
        """Primitive over the integers with positive grevlex leading coefficient."""
        p = self.primitive()
        if p.terms and p.leading_coeff() < 0:
            return -p
        return p

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    # -- evaluation / renaming -----------------------------------------
    def evaluate(self, point) -> Coeff:
        return evaluate(self, point)

    def embed(self, target: VarTable) -> "Polynomial":
        """Same polynomial over ``target``; variables are matched by name."""
        if target == self.vars:
            return self if target is self.vars else Polynomial(target, self.terms, _trusted=True)
        idx = []
        for i in sorted(self.support()):
            name = self.vars.names[i]
            if name not in target.index:
                raise VarTableMismatch(f"variable {name} missing from target table")
            idx.append((i, target.index[name]))
        m = len(target)
        out = {}
        for e, c in self.terms.items():
            t = [0] * m
            for i, j in idx:
                t[j] = e[i]
            out[tuple(t)] = c
        return Polynomial(target, out, _trusted=True)

    def coefficients_in(self, i: int) -> dict[int, "Polynomial"]:
        """View as a univariate polynomial in variable ``i``."""
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e = e[:i] + (0,) + e[i + 1:]
            buckets.setdefault(k, {})[e] = c
        return {k: Polynomial(self.vars, d, _trusted=True) for k, d in buckets.items()}

    # -- text ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.vars.names
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(
                names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(e) if x
            )
            if not mono:
                body = format_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_coeff(a)}*{mono}"
            if k == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


# ---------------------------------------------------------------------------
# parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, vars: VarTable, text: str):
        self.vars = vars
        self.text = text
        self.toks: list[tuple[str, str]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"unexpected character at {pos} in {text!r}")
            num, ident, op = m.groups()
            if num is not None:
                self.toks.append(("num", num))
            elif ident is not None:
                self.toks.append(("id", ident))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ValueError("empty polynomial text")
        p = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ValueError("division only by nonzero constants")
                p = p / Fraction(q.constant_value())
        return p

    def factor(self) -> Polynomial:
        kind, val = self.peek()
        if (kind, val) in (("op", "-"), ("op", "+")):
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer literal")
            base = base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return self.vars.const(int(val))
        if kind == "id":
            if val not in self.vars.index:
                raise ValueError(f"unknown variable {val!r}")
            return self.vars.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return p
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")


# ---------------------------------------------------------------------------
# module-level operations


def _check_same(p: Polynomial, q: Polynomial) -> None:
    if p.vars != q.vars:
        raise VarTableMismatch(f"{p.vars!r} vs {q.vars!r}")


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p * q


def evaluate(p: Polynomial, point) -> Coeff:
    """Exact value of ``p`` at a point (mapping by name or sequence by position)."""
    names = p.vars.names
    if isinstance(point, Mapping):
        vals = []
        for i in sorted(p.support()):
            if names[i] not in point:
                raise KeyError(f"no value for {names[i]}")
        vals = [point.get(n, 0) for n in names]
    else:
        vals = list(point)
        if len(vals) != len(names):
            raise ValueError("point length mismatch")
    vals = [v if isinstance(v, (int, Fraction)) else parse_rational(v) for v in vals]
    cache: dict[tuple[int, int], Coeff] = {}
    total: Coeff = 0
    for e, c in p.terms.items():
        t = c
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                v = cache.get(key)
                if v is None:
                    v = cache[key] = vals[i] ** k
                t = t * v
        total += t
    return _norm(Fraction(total)) if type(total) is not int else total


# -- gcd ------------------------------------------------------------------


def _monomial_content(p: Polynomial) -> Exps:
    it = iter(p.terms)
    m = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < m[i]:
                m[i] = x
    return tuple(m)


def _strip_monomial(p: Polynomial, m: Exps) -> Polynomial:
    if not any(m):
        return p
    return Polynomial(
        p.vars, {tuple(x - y for x, y in zip(e, m)): c for e, c in p.terms.items()}, _trusted=True
    )


def _content_in(p: Polynomial, i: int) -> Polynomial:
    coeffs = sorted(p.coefficients_in(i).values(), key=len)
    g = coeffs[0].normalize()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd_primitive(g, c.normalize())
    return g


def _lead_in(u: dict[int, Polynomial]) -> Polynomial:
    return u[max(u)]


def _prem_univ(a: dict, b: dict) -> dict:
    """Pseudo-remainder of ``a`` by ``b`` as dicts degree -> coefficient."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    k = max(r) - db + 1 if r else 0
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new = {d: c * lb for d, c in r.items() if d != dr}
        for d, c in b.items():
            if d == db:
                continue
            t = d + shift
            v = new.get(t)
            v = -(lr * c) if v is None else v - lr * c
            if v:
                new[t] = v
            else:
                new.pop(t, None)
        r = {d: c for d, c in new.items() if c}
        k -= 1
    if k > 0 and r:
        f = lb**k
        r = {d: c * f for d, c in r.items()}
    return r


def _from_univ(u: dict[int, Polynomial], i: int, vars: VarTable) -> Polynomial:
    out = {}
    for d, c in u.items():
        for e, v in c.terms.items():
            out[e[:i] + (e[i] + d,) + e[i + 1:]] = v
    return Polynomial(vars, out, _trusted=True)


def _subresultant_gcd(a: Polynomial, b: Polynomial, i: int) -> Polynomial:
    """GCD of two polynomials primitive in variable ``i`` (result primitive in ``i``)."""
    vars = a.vars
    A = a.coefficients_in(i)
    B = b.coefficients_in(i)
    if max(A) < max(B):
        A, B = B, A
    g = h = vars.one()
    while True:
        delta = max(A) - max(B)
        R = _prem_univ(A, B)
        if not R:
            break
        if max(R) == 0:
            return vars.one()
        A = B
        div = g * h**delta
        B = {d: c.divexact(div) for d, c in R.items()}
        g = _lead_in(A)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).divexact(h ** (delta - 1))
    res = _from_univ(B, i, vars)
    return res.divexact(_content_in(res, i)).normalize()


def _gcd_primitive(p: Polynomial, q: Polynomial) -> Polynomial:
    """GCD of two nonzero integer-primitive polynomials, normalized."""
    vars = p.vars
    if p.is_constant() or q.is_constant():
        return vars.one()
    if p == q:
        return p.normalize()
    mp, mq = _monomial_content(p), _monomial_content(q)
    mg = tuple(min(x, y) for x, y in zip(mp, mq))
    p, q = _strip_monomial(p, mp), _strip_monomial(q, mq)
    core = _gcd_core(p, q)
    if any(mg):
        core = Polynomial(
            vars, {tuple(x + y for x, y in zip(e, mg)): c for e, c in core.terms.items()}, _trusted=True
        )
    return core.normalize()


_PRIME = (1 << 61) - 1
_RNG = random.Random(0x5EED)


def _univariate_image(p: Polynomial, i: int, point: list[int]) -> list[int]:
    """Coefficients (low to high) of ``p`` in variable ``i`` with the rest fixed mod a prime."""
    d = p.degree_in(i)
    out = [0] * (d + 1)
    P = _PRIME
    for e, c in p.terms.items():
        v = c.numerator * pow(c.denominator, -1, P) if type(c) is Fraction else c
        for j, k in enumerate(e):
            if k and j != i:
                v = v * pow(point[j], k, P) % P
        out[e[i]] = (out[e[i]] + v) % P
    return out


def _univariate_gcd_degree(a: list[int], b: list[int]) -> int:
    P = _PRIME
    a, b = a[:], b[:]
    while b:
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], -1, P)
        while len(a) >= len(b):
            f = a[-1] * inv % P
            s = len(a) - len(b)
            for k in range(len(b)):
                a[s + k] = (a[s + k] - f * b[k]) % P
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _certainly_coprime(p: Polynomial, q: Polynomial, common: set[int]) -> bool:
    """Sound coprimality test via univariate images modulo a large prime.

    An image gcd can only be larger than the true gcd when leading
    coefficients are preserved, so degree 0 in every shared variable proves
    the gcd is constant.
    """
    n = len(p.vars)
    for i in sorted(common):
        for _ in range(3):
            pt = [_RNG.randrange(1, _PRIME) for _ in range(n)]
            a = _univariate_image(p, i, pt)
            b = _univariate_image(q, i, pt)
            if a[-1] and b[-1]:
                break
        else:
            return False
        if _univariate_gcd_degree(a, b) > 0:
            return False
    return True


def _gcd_core(p: Polynomial, q: Polynomial) -> Polynomial:
    vars = p.vars
    if p.is_constant() or q.is_constant():
        return vars.one()
    if len(p) == 1 or len(q) == 1:
        return vars.one()  # monomial content already stripped
    sp, sq = p.support(), q.support()
    if not sp & sq or _certainly_coprime(p, q, sp & sq):
        return vars.one()
    only_p = sp - sq
    if only_p:
        i = min(only_p, key=lambda j: p.degree_in(j))
        return _gcd_primitive(_content_in(p, i), q)
    only_q = sq - sp
    if only_q:
        i = min(only_q, key=lambda j: q.degree_in(j))
        return _gcd_primitive(p, _content_in(q, i))
    # main variable: shared, smallest combined degree
    i = min(sp, key=lambda j: (min(p.degree_in(j), q.degree_in(j)), p.degree_in(j) + q.degree_in(j), j))
    cp, cq = _content_in(p, i), _content_in(q, i)
    c = _gcd_primitive(cp, cq) if not (cp.is_constant() and cq.is_constant()) else vars.one()
    pp = p.divexact(cp) if not cp.is_constant() else p
    qq = q.divexact(cq) if not cq.is_constant() else q
    if pp.degree_in(i) == 0 or qq.degree_in(i) == 0:
        return c
    # cheap divisibility shortcuts before the remainder sequence
    if len(pp) <= len(qq):
        small, big = pp, qq
    else:
        small, big = qq, pp
    if small.normalize().divides(big):
        g = small
    else:
        g = _subresultant_gcd(pp.primitive(), qq.primitive(), i)
    return (c * g).normalize()


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, primitive over the integers, positive leading coefficient."""
    _check_same(p, q)
    if p.is_zero():
        return q.normalize()
    if q.is_zero():
        return p.normalize()
    return _gcd_primitive(p.primitive(), q.primitive())


# -- substitution -----------------------------------------------------------


def substitute(p: Polynomial, assignment):
    """Compose ``p`` with rational functions, one per variable of ``p``."""
    from .fraction import substitute as _sub

    return _sub(p, assignment)


# -- matrices -----------------------------------------------------------------


class PolyMatrix:
    """Dense rectangular matrix of polynomials over one variable table."""

    __slots__ = ("vars", "rows", "cols", "entries")

    def __init__(self, vars: VarTable, entries: Sequence[Sequence]):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must have positive dimensions")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        conv = []
        for r in rows:
            out = []
            for x in r:
                if isinstance(x, Polynomial):
                    if x.vars != vars:
                        raise VarTableMismatch("matrix entry over a different table")
                    out.append(x)
                elif isinstance(x, str):
                    out.append(vars.parse(x))
                else:
                    out.append(vars.const(x))
            conv.append(tuple(out))
        self.vars = vars
        self.rows = len(conv)
        self.cols = cols
        self.entries = tuple(conv)

    @classmethod
    def identity(cls, vars: VarTable, n: int) -> "PolyMatrix":
        return cls(vars, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def symmetric(cls, vars: VarTable, n: int, prefix: str = "s") -> "PolyMatrix":
        """Generic symmetric matrix with entries ``{prefix}_i_j`` (1-based, i <= j)."""
        def v(i, j):
            i, j = min(i, j), max(i, j)
            return vars.var(f"{prefix}_{i + 1}_{j + 1}")
        return cls(vars, [[v(i, j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __repr__(self) -> str:
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries) + "])"

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.vars, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.vars, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.vars, [[-a for a in r] for r in self.entries])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        z = self.vars.zero()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.vars, out)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.vars, [[a * c for a in r] for r in self.entries])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.vars, [[self.entries[i][j] for j in cols] for i in rows])

    def det(self) -> Polynomial:
        return determinant(self)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        return minor(self, rows, cols)

    def adjugate(self) -> "PolyMatrix":
        n = self.rows
        if not self.is_square():
            raise ValueError("adjugate of a non-square matrix")
        if n == 1:
            return PolyMatrix(self.vars, [[1]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rs = [r for r in range(n) if r != j]
                cs = [c for c in range(n) if c != i]
                m = minor(self, rs, cs)
                out[i][j] = -m if (i + j) % 2 else m
        return PolyMatrix(self.vars, out)


def _det_cofactor(rows: list[list[Polynomial]], zero: Polynomial) -> Polynomial:
    n = len(rows)
    if n == 0:
        return zero + 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # expand along the sparsest row or column
    best_r = max(range(n), key=lambda i: sum(1 for x in rows[i] if not x))
    best_c = max(range(n), key=lambda j: sum(1 for i in range(n) if not rows[i][j]))
    zr = sum(1 for x in rows[best_r] if not x)
    zc = sum(1 for i in range(n) if not rows[i][best_c])
    if zc > zr:
        rows = [list(c) for c in zip(*rows)]
        best_r = best_c
    total = zero
    r = best_r
    for j in range(n):
        a = rows[r][j]
        if not a:
            continue
        sub = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != r]
        term = a * _det_cofactor(sub, zero)
        total = total - term if (r + j) % 2 else total + term
    return total


def _det_bareiss(rows: list[list[Polynomial]], zero: Polynomial) -> Polynomial:
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return zero
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        akk = m[k][k]
        for i in range(k + 1, n):
            aik = m[i][k]
            for j in range(k + 1, n):
                v = akk * m[i][j]
                if aik and m[k][j]:
                    v = v - aik * m[k][j]
                if prev is not None and v:
                    v = v.divexact(prev)
                m[i][j] = v
            m[i][k] = zero
        prev = akk
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def determinant(m: PolyMatrix, method: str = "auto") -> Polynomial:
    """Exact determinant.

    ``auto`` uses cofactor expansion up to size 4 and fraction-free
    (Bareiss) elimination beyond; ``cofactor`` and ``bareiss`` force one.
    """
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in m.entries]
    zero = m.vars.zero()
    if method == "cofactor" or (method == "auto" and m.rows <= 4):
        return _det_cofactor(rows, zero)
    if method in ("bareiss", "auto"):
        return _det_bareiss(rows, zero)
    raise ValueError(f"unknown determinant method {method!r}")


def minor(m: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    """Determinant of the submatrix with the given row and column order."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ValueError("row and column index sets differ in size")
    for i in rows:
        if not 0 <= i < m.rows:
            raise IndexError(f"row index {i} out of range")
    for j in cols:
        if not 0 <= j < m.cols:
            raise IndexError(f"column index {j} out of range")
    if not rows:
        return m.vars.one()
    return determinant(m.submatrix(rows, cols))
