"""Reduced rational functions and monoid-factored denominators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .polyring import Coeff, Polynomial, VarTable, VarTableMismatch, format_coeff, gcd

__all__ = [
    "RationalFunction",
    "MonoidGens",
    "FactoredDenominator",
    "DenominatorOutsideMonoid",
    "reduce",
    "arith",
    "factor_denominator",
    "substitute",
]


class DenominatorOutsideMonoid(ArithmeticError):
    """A denominator does not factor over the given monoid generators."""

    def __init__(self, cofactor: Polynomial, message: str | None = None):
        self.cofactor = cofactor
        super().__init__(message or f"denominator cofactor {cofactor} is not in the monoid")


def _canon(num: Polynomial, den: Polynomial) -> "RationalFunction":
    """Make ``den`` primitive with positive leading coefficient (no gcd step)."""
    if not num:
        return RationalFunction(num, num.vars.one(), _raw=True)
    if den.is_constant():
        c = den.constant_value()
        return RationalFunction(num.scale(Fraction(1) / c) if c != 1 else num, den.vars.one(), _raw=True)
    c = den.content()
    if den.leading_coeff() < 0:
        c = -c
    if c != 1:
        den = den.scale(1 / c)
        num = num.scale(1 / c)
    return RationalFunction(num, den, _raw=True)


class RationalFunction:
    """``num / den`` in lowest terms; ``den`` is integer-primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _raw: bool = False):
        if _raw:
            self.num, self.den = num, den
            return
        if den is None:
            den = num.vars.one()
        r = reduce(num, den)
        self.num, self.den = r.num, r.den

    @property
    def vars(self) -> VarTable:
        return self.num.vars

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, p.vars.one(), _raw=True)

    @classmethod
    def parse(cls, vars: VarTable, text: str) -> "RationalFunction":
        """Parse ``N`` or ``N / D`` (the separator is a slash surrounded by spaces)."""
        if " / " in text:
            n, d = text.split(" / ", 1)
            return reduce(vars.parse(_unwrap(n)), vars.parse(_unwrap(d)))
        return cls.from_poly(vars.parse(text))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Polynomial):
            return self.den.is_constant() and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"{_wrap(self.num)} / {_wrap(self.den)}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise VarTableMismatch("fractions over different tables")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.from_poly(self.vars.const(other))
        raise TypeError(type(other).__name__)

    def __add__(self, other):
        return arith(self, self._coerce(other), "+")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, self._coerce(other), "-")

    def __rsub__(self, other):
        return arith(self._coerce(other), self, "-")

    def __mul__(self, other):
        return arith(self, self._coerce(other), "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return arith(self, self._coerce(other), "/")

    def __rtruediv__(self, other):
        return arith(self._coerce(other), self, "/")

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _raw=True)

    def __pow__(self, k: int):
        if k < 0:
            return (RationalFunction.from_poly(self.vars.one()) / self) ** (-k)
        return RationalFunction(self.num**k, self.den**k, _raw=True)

    def evaluate(self, point) -> Coeff:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        v = Fraction(self.num.evaluate(point)) / d
        return v.numerator if v.denominator == 1 else v

    def embed(self, target: VarTable) -> "RationalFunction":
        return RationalFunction(self.num.embed(target), self.den.embed(target), _raw=True)


def _wrap(p: Polynomial) -> str:
    s = str(p)
    return f"({s})" if len(p) > 1 else s


def _unwrap(s: str) -> str:
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        depth = 0
        for k, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and k < len(s) - 1:
                return s
        return s[1:-1]
    return s


def reduce(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Cancel the gcd and normalize the sign of the denominator."""
    if num.vars != den.vars:
        raise VarTableMismatch("numerator and denominator over different tables")
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return RationalFunction(num, num.vars.one(), _raw=True)
    if not den.is_constant():
        g = gcd(num, den)
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
    return _canon(num, den)


def arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Exact ``a op b`` for op in ``+ - * /``, reduced."""
    if op in ("+", "-"):
        bn = b.num if op == "+" else -b.num
        if a.den == b.den:
            return reduce(a.num + bn, a.den)
        if a.den.is_constant():
            return _canon(a.num * b.den + bn, b.den)
        if b.den.is_constant():
            return _canon(a.num + bn * a.den, a.den)
        g = gcd(a.den, b.den)
        if g.is_constant():
            return _canon(a.num * b.den + bn * a.den, a.den * b.den)
        ad, bd = a.den.divexact(g), b.den.divexact(g)
        t = a.num * bd + bn * ad
        d = ad * b.den
        g2 = gcd(t, g)
        if not g2.is_constant():
            t, d = t.divexact(g2), d.divexact(g2)
        return _canon(t, d)
    if op == "*":
        return _mul(a.num, a.den, b.num, b.den)
    if op == "/":
        if not b.num:
            raise ZeroDivisionError("division by the zero fraction")
        return _mul(a.num, a.den, b.den, b.num)
    raise ValueError(f"unknown operator {op!r}")


def _mul(an: Polynomial, ad: Polynomial, bn: Polynomial, bd: Polynomial) -> RationalFunction:
    if not an or not bn:
        return RationalFunction(an.vars.zero(), an.vars.one(), _raw=True)
    if not bd.is_constant():
        g1 = gcd(an, bd)
        if not g1.is_constant():
            an, bd = an.divexact(g1), bd.divexact(g1)
    if not ad.is_constant():
        g2 = gcd(bn, ad)
        if not g2.is_constant():
            bn, ad = bn.divexact(g2), ad.divexact(g2)
    return _canon(an * bn, ad * bd)


# -- monoids --------------------------------------------------------------


class MonoidGens:
    """Finite generator list of a multiplicative monoid.

    Generators are stored primitive over the integers with their sign as
    supplied (the orientation that is positive on the model); associates
    are detected through :meth:`Polynomial.normalize` and dropped.
    """

    __slots__ = ("gens", "_keys")

    def __init__(self, gens: Iterable[Polynomial] = ()):
        out: list[Polynomial] = []
        keys: set[Polynomial] = set()
        for g in gens:
            if not g:
                raise ValueError("monoid generator must be nonzero")
            if g.is_constant():
                continue
            k = g.normalize()
            if k in keys:
                continue
            keys.add(k)
            out.append(g.primitive())
        self.gens = tuple(out)
        self._keys = keys

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, i: int) -> Polynomial:
        return self.gens[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, MonoidGens) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    def __repr__(self) -> str:
        return "MonoidGens([" + ", ".join(str(g) for g in self.gens) + "])"

    def contains_associate(self, p: Polynomial) -> bool:
        return p.normalize() in self._keys

    def appended(self, extra: Iterable[Polynomial]) -> "MonoidGens":
        return MonoidGens(list(self.gens) + list(extra))

    def key_set(self) -> frozenset:
        return frozenset(self._keys)


@dataclass(frozen=True)
class FactoredDenominator:
    """``unit * prod(gens[i] ** exponents[i])`` with a positive rational unit."""

    exponents: tuple[int, ...]
    unit: Fraction

    def as_polynomial(self, S: MonoidGens) -> Polynomial:
        if not S.gens:
            raise ValueError("empty monoid cannot rebuild a polynomial")
        p = S.gens[0].vars.const(self.unit)
        for g, e in zip(S.gens, self.exponents):
            if e:
                p = p * g**e
        return p

    def describe(self, S: MonoidGens) -> str:
        parts = []
        if self.unit != 1:
            parts.append(format_coeff(self.unit))
        for g, e in zip(S.gens, self.exponents):
            if e:
                base = f"({g})" if len(g) > 1 else str(g)
                parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts) if parts else "1"


def _strip_powers(den: Polynomial, S: MonoidGens) -> tuple[Polynomial, list[int]]:
    exps = [0] * len(S.gens)
    changed = True
    while changed and not den.is_constant():
        changed = False
        for k, g in enumerate(S.gens):
            while not den.is_constant():
                q = den.try_divide(g)
                if q is None:
                    break
                den = q
                exps[k] += 1
                changed = True
    return den, exps


def factor_denominator(r: RationalFunction, S: MonoidGens) -> tuple[Polynomial, FactoredDenominator]:
    """Split ``r`` as ``N / (unit * prod gens^e)`` with ``unit > 0``.

    ``N`` is made primitive over the integers without changing its sign, so
    its sign at any point where all generators are positive equals the sign
    of ``r``.
    """
    den, exps = _strip_powers(r.den, S)
    if not den.is_constant():
        raise DenominatorOutsideMonoid(den.normalize())
    c = Fraction(den.constant_value())
    num = r.num
    if not num:
        return num, FactoredDenominator(tuple(exps), Fraction(1))
    k = num.content()
    num = num.scale(1 / k) if k != 1 else num
    unit = c / k
    if unit < 0:
        num, unit = -num, -unit
    return num, FactoredDenominator(tuple(exps), unit)


def cofactor_outside(p: Polynomial, S: MonoidGens) -> tuple[Polynomial, tuple[int, ...]]:
    """Divide all powers of the generators out of ``p``; return the cofactor and exponents."""
    rest, exps = _strip_powers(p, S)
    return rest, tuple(exps)


# -- substitution -------------------------------------------------------------


def _as_fraction(v, target: VarTable | None) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction.from_poly(v)
    if target is not None and isinstance(v, (int, Fraction)):
        return RationalFunction.from_poly(target.const(v))
    if target is not None and isinstance(v, str):
        return RationalFunction.parse(target, v)
    raise TypeError(f"cannot use {type(v).__name__} as an assignment")


def substitute(p: Polynomial, assignment, target: VarTable | None = None) -> RationalFunction:
    """Compose ``p`` with one rational function per variable.

    ``assignment`` is a mapping from variable name to value or a sequence in
    variable order.  Values are :class:`RationalFunction`, :class:`Polynomial`
    or (with ``target``) rationals and strings.
    """
    names = p.vars.names
    support = sorted(p.support())
    if isinstance(assignment, Mapping):
        try:
            vals = {i: assignment[names[i]] for i in support}
        except KeyError as exc:
            raise KeyError(f"variable {exc.args[0]} is not assigned") from None
    else:
        seq = list(assignment)
        if len(seq) != len(names):
            raise ValueError("assignment length mismatch")
        vals = {i: seq[i] for i in support}
    if target is None:
        for v in vals.values():
            if isinstance(v, (RationalFunction, Polynomial)):
                target = v.vars
                break
    vals = {i: _as_fraction(v, target) for i, v in vals.items()}
    if target is None:
        if p.is_constant():
            raise ValueError("constant polynomial needs an explicit target table")
        raise ValueError("cannot infer target table")
    for v in vals.values():
        if v.vars != target:
            raise VarTableMismatch("assignments over different target tables")
    if not support:
        return RationalFunction.from_poly(target.const(p.constant_value()) if p else target.zero())

    # group variables by (identical) denominator
    groups: list[Polynomial] = []
    gidx: dict[int, int] = {}
    for i in support:
        d = vals[i].den
        if d.is_constant():
            gidx[i] = -1
            continue
        for k, g in enumerate(groups):
            if g == d:
                gidx[i] = k
                break
        else:
            gidx[i] = len(groups)
            groups.append(d)
    top = [0] * len(groups)
    for e in p.terms:
        acc = [0] * len(groups)
        for i in support:
            if e[i] and gidx[i] >= 0:
                acc[gidx[i]] += e[i]
        for k, a in enumerate(acc):
            if a > top[k]:
                top[k] = a

    npow: dict[tuple[int, int], Polynomial] = {}
    dpow: dict[tuple[int, int], Polynomial] = {}

    def num_power(i: int, k: int) -> Polynomial:
        key = (i, k)
        r = npow.get(key)
        if r is None:
            r = vals[i].num if k == 1 else num_power(i, k - 1) * vals[i].num
            npow[key] = r
        return r

    def den_power(g: int, k: int) -> Polynomial:
        key = (g, k)
        r = dpow.get(key)
        if r is None:
            r = target.one() if k == 0 else (groups[g] if k == 1 else den_power(g, k - 1) * groups[g])
            dpow[key] = r
        return r

    total: dict = {}
    for e, c in p.terms.items():
        term = None
        acc = [0] * len(groups)
        for i in support:
            k = e[i]
            if k:
                f = num_power(i, k)
                term = f if term is None else term * f
                if gidx[i] >= 0:
                    acc[gidx[i]] += k
        for g, a in enumerate(acc):
            if top[g] > a:
                f = den_power(g, top[g] - a)
                term = f if term is None else term * f
        if term is None:
            term = target.one()
        for m, v in term.terms.items():
            total[m] = total.get(m, 0) + c * v
    num = Polynomial(target, total)

    # denominator as a factor list; cancel base by base
    factors = [[groups[g], top[g]] for g in range(len(groups)) if top[g]]
    if not num:
        return RationalFunction(num, target.one(), _raw=True)
    k = 0
    while k < len(factors):
        base, e = factors[k]
        while e:
            q = num.try_divide(base)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            g = gcd(num, base)
            if not g.is_constant():
                num = num.divexact(g)
                rest = base.divexact(g)
                factors[k] = [base, e - 1]
                if not rest.is_constant():
                    factors.append([rest, 1])
                continue
        factors[k][1] = e
        k += 1
    den = target.one()
    for base, e in factors:
        if e:
            den = den * base**e
    return _canon(num, den)
