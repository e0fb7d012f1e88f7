"""Birational isomorphisms between localized polynomial rings.

``alpha`` maps parameters to model coordinates and ``beta`` is its
inverse.  Pulling a model polynomial back along ``alpha`` is ``phi``;
pulling a parameter polynomial back along ``beta`` is ``psi``.  The
monoid ``S`` lives on the model side and ``Sbar`` on the parameter side.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .fraction import (
    MonoidGens,
    RationalFunction,
    cofactor_outside,
    factor_denominator,
    substitute,
)
from .polyring import Polynomial, VarTable, VarTableMismatch

__all__ = [
    "RationalMap",
    "BirationalIso",
    "TransferReport",
    "VerificationReport",
    "NonTerminating",
    "IsoNotFull",
    "verify_inverse",
    "extend_to_full",
    "transfer",
]

MAX_ROUNDS = 10


class NonTerminating(RuntimeError):
    """Monoid extension did not reach a fixed point within the round bound."""


class IsoNotFull(ValueError):
    """Transfer needs a full isomorphism (run :func:`extend_to_full` first)."""


@dataclass(frozen=True)
class RationalMap:
    """One reduced rational function in ``domain`` per variable of ``codomain``."""

    domain: VarTable
    codomain: VarTable
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != len(self.codomain):
            raise ValueError("one component per codomain variable is required")
        fixed = []
        for c in comps:
            if isinstance(c, Polynomial):
                c = RationalFunction.from_poly(c)
            if c.vars != self.domain:
                raise VarTableMismatch("component over the wrong table")
            fixed.append(c)
        object.__setattr__(self, "components", tuple(fixed))

    def __getitem__(self, name: str) -> RationalFunction:
        return self.components[self.codomain.index[name]]

    def pullback(self, p: Polynomial) -> RationalFunction:
        """``p`` (over the codomain) composed with this map."""
        if p.vars != self.codomain:
            raise VarTableMismatch("polynomial is not over the codomain")
        if p.is_constant():
            return RationalFunction.from_poly(self.domain.const(p.constant_value()) if p else self.domain.zero())
        return substitute(p, self.components, self.domain)

    def pullback_fraction(self, r: RationalFunction) -> RationalFunction:
        return self.pullback(r.num) / self.pullback(r.den)

    def __call__(self, point) -> dict:
        """Image of a point (mapping by name) as a name -> value dict."""
        return {n: c.evaluate(point) for n, c in zip(self.codomain.names, self.components)}

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain.names),
            "codomain": list(self.codomain.names),
            "components": [str(c) for c in self.components],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RationalMap":
        dom = VarTable(doc["domain"])
        cod = VarTable(doc["codomain"])
        return cls(dom, cod, tuple(RationalFunction.parse(dom, s) for s in doc["components"]))


@dataclass(frozen=True)
class BirationalIso:
    """``alpha``/``beta`` with localizing monoids ``S`` (model) and ``Sbar`` (parameters).

    ``psi_hints``/``phi_hints`` optionally carry closed-form pullbacks of
    specific polynomials (keyed by the polynomial) that a model builder knows
    from a matrix identity; they are used instead of substitution.
    """

    alpha: RationalMap
    beta: RationalMap
    S: MonoidGens
    Sbar: MonoidGens
    full: bool = False
    warnings: tuple = ()
    psi_hints: Mapping = field(default_factory=dict, compare=False)
    phi_hints: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.alpha.domain != self.beta.codomain or self.alpha.codomain != self.beta.domain:
            raise VarTableMismatch("alpha and beta are not mutually inverse in shape")
        for g in self.S:
            if g.vars != self.model_vars:
                raise VarTableMismatch("S generator not over model variables")
        for g in self.Sbar:
            if g.vars != self.param_vars:
                raise VarTableMismatch("Sbar generator not over parameter variables")

    @property
    def param_vars(self) -> VarTable:
        return self.alpha.domain

    @property
    def model_vars(self) -> VarTable:
        return self.alpha.codomain

    def psi(self, p: Polynomial) -> RationalFunction:
        """Pull a parameter polynomial back to the model side."""
        hit = self.psi_hints.get(p)
        if hit is not None:
            return hit
        return self.beta.pullback(p)

    def phi(self, p: Polynomial) -> RationalFunction:
        """Pull a model polynomial back to the parameter side."""
        hit = self.phi_hints.get(p)
        if hit is not None:
            return hit
        return self.alpha.pullback(p)


@dataclass(frozen=True)
class TransferReport:
    numerators: tuple
    denominators: tuple
    warnings: tuple = ()

    def to_json(self, S: MonoidGens | None = None) -> dict:
        out = {"numerators": [str(n) for n in self.numerators], "warnings": list(self.warnings)}
        out["denominators"] = [
            {"exponents": list(d.exponents), "unit": str(d.unit)} for d in self.denominators
        ]
        return out


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failures: tuple = ()
    checked: tuple = ()

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": list(self.checked),
            "failures": [{"variable": v, "direction": d, "residual": r} for v, d, r in self.failures],
        }


def verify_inverse(iso: BirationalIso, both: bool = False) -> VerificationReport:
    """Exact symbolic check that beta after alpha is the identity (and optionally the reverse)."""
    failures = []
    checked = ["beta(alpha)"]
    pv = iso.param_vars
    for name, comp in zip(pv.names, iso.beta.components):
        got = iso.alpha.pullback_fraction(comp)
        want = RationalFunction.from_poly(pv.var(name))
        if got != want:
            failures.append((name, "beta(alpha)", str(got - want)))
    if both:
        checked.append("alpha(beta)")
        mv = iso.model_vars
        for name, comp in zip(mv.names, iso.alpha.components):
            got = iso.beta.pullback_fraction(comp)
            want = RationalFunction.from_poly(mv.var(name))
            if got != want:
                failures.append((name, "alpha(beta)", str(got - want)))
    return VerificationReport(not failures, tuple(failures), tuple(checked))


def _grow(src, dst: MonoidGens, image, back_image, back_cache: dict, warnings: list, side: str):
    """Append to ``dst`` the non-unit cofactors of the images of ``src``.

    For a cofactor ``c`` of ``num image(g)`` the back image follows from
    ``back(image(g)) = g`` without substitution:
    ``num = c1 * c * prod d^a`` and ``den = c2 * prod d^b`` over ``dst``
    give ``back(c) = g * c2 * prod back(d)^b / (c1 * prod back(d)^a)``.
    """
    added: list = []
    start = dst
    for g in src:
        r = image(g)
        num_rest, a = cofactor_outside(r.num, dst)
        den_rest, b = cofactor_outside(r.den, dst)
        found = []
        if not den_rest.is_constant():
            found.append((den_rest.primitive(), None))
        if not num_rest.is_constant():
            c = num_rest.primitive()
            c1 = Fraction(num_rest.content())
            hint = None
            if den_rest.is_constant():
                c2 = Fraction(den_rest.constant_value())
                if c2 < 0:
                    c, c1 = -c, -c1
            if back_image is not None and den_rest.is_constant():
                hint = RationalFunction.from_poly(g) * c2 / c1
                for d, e in zip(dst, b):
                    if e:
                        hint = hint * back_image(d) ** e
                for d, e in zip(dst, a):
                    if e:
                        hint = hint / back_image(d) ** e
            found.append((c, hint))
        for c, hint in found:
            if dst.contains_associate(c):
                continue
            if c.total_degree() > 1:
                warnings.append(
                    f"appended {side} generator of degree {c.total_degree()} "
                    f"without an irreducibility check: {c}"
                )
            if hint is not None:
                back_cache[c] = hint
            added.append(c)
            # later cofactors in this pass are taken relative to c as well
            dst = dst.appended([c])
    return dst, dst != start


def extend_to_full(iso: BirationalIso, max_rounds: int = MAX_ROUNDS) -> BirationalIso:
    """Grow ``S`` and ``Sbar`` until each generator's image is a unit times a monoid element."""
    warnings = list(iso.warnings)
    psi_cache = dict(iso.psi_hints)
    phi_cache = dict(iso.phi_hints)

    def psi(p):
        r = psi_cache.get(p)
        if r is None:
            r = psi_cache[p] = iso.beta.pullback(p)
        return r

    def phi(p):
        r = phi_cache.get(p)
        if r is None:
            r = phi_cache[p] = iso.alpha.pullback(p)
        return r

    S, Sbar = iso.S, iso.Sbar
    # component denominators must factor over the opposite monoid
    ident = RationalFunction.from_poly
    S, _ = _grow([c.den for c in iso.beta.components], S, ident, None, {}, warnings, "model")
    Sbar, _ = _grow([c.den for c in iso.alpha.components], Sbar, ident, None, {}, warnings, "parameter")
    for _ in range(max_rounds):
        S, ch1 = _grow(Sbar, S, psi, phi, phi_cache, warnings, "model")
        Sbar, ch2 = _grow(S, Sbar, phi, psi, psi_cache, warnings, "parameter")
        if not (ch1 or ch2):
            return replace(
                iso, S=S, Sbar=Sbar, full=True, warnings=tuple(warnings),
                psi_hints=psi_cache, phi_hints=phi_cache,
            )
    raise NonTerminating(f"monoid extension did not stabilize within {max_rounds} rounds")


def transfer(iso: BirationalIso, gens: Sequence[Polynomial], allow_partial: bool = False) -> TransferReport:
    """Numerators of the pullbacks of parameter-side polynomials along ``beta``."""
    if not iso.full and not allow_partial:
        raise IsoNotFull("transfer requires a full isomorphism")
    nums, dens, warns = [], [], []
    for g in gens:
        if g.vars != iso.param_vars:
            raise VarTableMismatch("generator not over parameter variables")
        r = iso.psi(g)
        n, d = factor_denominator(r, iso.S)
        nums.append(n)
        dens.append(d)
    return TransferReport(tuple(nums), tuple(dens), tuple(warns))


def transfer_back(iso: BirationalIso, gens: Sequence[Polynomial]) -> TransferReport:
    """Numerators of the pullbacks of model-side polynomials along ``alpha``."""
    nums, dens = [], []
    for g in gens:
        r = iso.phi(g)
        n, d = factor_denominator(r, iso.Sbar)
        nums.append(n)
        dens.append(d)
    return TransferReport(tuple(nums), tuple(dens), ())


def iso_to_json(iso: BirationalIso) -> dict:
    return {
        "alpha": iso.alpha.to_json(),
        "beta": iso.beta.to_json(),
        "S": [str(g) for g in iso.S],
        "Sbar": [str(g) for g in iso.Sbar],
        "full": iso.full,
        "warnings": list(iso.warnings),
    }


def iso_from_json(doc: dict) -> BirationalIso:
    alpha = RationalMap.from_json(doc["alpha"])
    beta = RationalMap.from_json(doc["beta"])
    S = MonoidGens(alpha.codomain.parse(s) for s in doc["S"])
    Sbar = MonoidGens(alpha.domain.parse(s) for s in doc["Sbar"])
    return BirationalIso(alpha, beta, S, Sbar, bool(doc.get("full", False)), tuple(doc.get("warnings", ())))


__all__ += ["transfer_back", "iso_to_json", "iso_from_json"]
