"""Markov properties, vanishing ideals, point checks and model equivalence."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .birational import transfer
from .fraction import MonoidGens, cofactor_outside, substitute
from .groebner import (
    Deadline,
    IdealGens,
    buchberger,
    eliminate,
    normal_form,
    saturate_monoid,
)
from .modelzoo.specs import ModelSpec
from .polyring import Polynomial, VarTable

__all__ = [
    "EmptyParameterSpaceSuspected",
    "RegionSamplingExhausted",
    "NonLinearEquations",
    "MarkovProperty",
    "EquivalenceVerdict",
    "SZResult",
    "ParameterSampler",
    "markov_property",
    "vanishing_ideal",
    "vanishing_ideal_by_elimination",
    "check_point",
    "model_equiv",
    "sz_vanishes",
]

SAMPLE_BUDGET = 5000


class EmptyParameterSpaceSuspected(RuntimeError):
    """No interior parameter point was found within the sampling budget."""


class RegionSamplingExhausted(RuntimeError):
    """Rejection sampling found no point of the parameter region."""


class NonLinearEquations(ValueError):
    """The parameter equations are not linear and primality was not asserted."""


# -- sampling ---------------------------------------------------------------


class ParameterSampler:
    """Exact rational points of a model's parameter space.

    Linear equations are solved once (reduced row echelon form); the free
    coordinates are drawn from the per-variable box and the pivots follow.
    Points are then rejected unless every ``Sbar`` generator is positive,
    every inequality non-negative and every inequation nonzero.
    """

    def __init__(self, m: ModelSpec, seed: int = 0, budget: int = SAMPLE_BUDGET):
        if not m.linear_eqs:
            raise NonLinearEquations("sampling needs linear parameter equations")
        self.model = m
        self.rng = random.Random(seed)
        self.budget = budget
        self.names = m.param_vars.names
        self.pivots, self.free = _rref(m.eq_gens, m.param_vars)
        self.region = list(m.iso.Sbar)
        self.ineqs = list(m.ineq_gens)
        self.noneqs = list(m.noneq_gens)

    def _draw(self) -> dict:
        pt = {}
        for name in self.free:
            lo, hi, den = self.model.box_for(name)
            pt[name] = Fraction(self.rng.randint(lo, hi), den)
        for name, (const, coeffs) in self.pivots.items():
            v = const
            for other, c in coeffs.items():
                v += c * pt[other]
            pt[name] = v
        return pt

    def accepts(self, pt: Mapping) -> bool:
        return (
            all(g.evaluate(pt) > 0 for g in self.region)
            and all(g.evaluate(pt) >= 0 for g in self.ineqs)
            and all(g.evaluate(pt) != 0 for g in self.noneqs)
        )

    def sample(self) -> dict:
        for _ in range(self.budget):
            pt = self._draw()
            if self.accepts(pt):
                return {n: pt[n] for n in self.names}
        raise RegionSamplingExhausted(
            f"no point of the parameter region in {self.budget} draws for {self.model.label!r}"
        )

    def __iter__(self) -> Iterator[dict]:
        while True:
            yield self.sample()

    def take(self, count: int) -> list[dict]:
        return [self.sample() for _ in range(count)]

    @property
    def box_size(self) -> int:
        """Fewest candidate values of any free coordinate."""
        sizes = [hi - lo + 1 for lo, hi, _ in (self.model.box_for(n) for n in self.free)]
        return min(sizes) if sizes else 1


def _rref(eqs: Sequence[Polynomial], vars: VarTable):
    """Solve linear equations: ``{pivot: (const, {free: coeff})}`` and the free names."""
    n = len(vars)
    rows = []
    for g in eqs:
        row = [Fraction(0)] * (n + 1)
        for e, c in g.terms.items():
            k = next((i for i, x in enumerate(e) if x), None)
            row[n if k is None else k] += Fraction(c)
        rows.append(row)
    pivots = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if row[n]:
            raise EmptyParameterSpaceSuspected("the parameter equations are inconsistent")
    names = vars.names
    pset = set(pivots)
    free = [names[i] for i in range(n) if i not in pset]
    solved = {}
    for i, col in enumerate(pivots):
        row = rows[i]
        solved[names[col]] = (-row[n], {names[j]: -row[j] for j in range(n) if j not in pset and row[j]})
    return solved, free


# -- Markov property --------------------------------------------------------


@dataclass(frozen=True)
class MarkovProperty:
    """Model-side description: equations, inequalities, inequations, positivities.

    ``provenance`` holds one string per constraint, in the order
    equations, inequalities, inequations, positivities.
    """

    equations: tuple
    inequalities: tuple
    inequations: tuple
    positivities: tuple
    provenance: tuple = ()
    label: str = ""

    def constraints(self) -> list[tuple[str, Polynomial, str]]:
        kinds = (
            ["equation"] * len(self.equations)
            + ["inequality"] * len(self.inequalities)
            + ["inequation"] * len(self.inequations)
            + ["positivity"] * len(self.positivities)
        )
        polys = list(self.equations + self.inequalities + self.inequations + self.positivities)
        prov = list(self.provenance) or [""] * len(polys)
        return list(zip(kinds, polys, prov))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "equations": [str(p) for p in self.equations],
            "inequalities": [str(p) for p in self.inequalities],
            "inequations": [str(p) for p in self.inequations],
            "positivities": [str(p) for p in self.positivities],
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_json(cls, vars: VarTable, doc: Mapping) -> "MarkovProperty":
        get = lambda k: tuple(vars.parse(s) for s in doc.get(k, ()))
        return cls(
            get("equations"), get("inequalities"), get("inequations"), get("positivities"),
            tuple(doc.get("provenance", ())), doc.get("label", ""),
        )

    def __str__(self) -> str:
        out = []
        for kind, p, _ in self.constraints():
            rel = {"equation": "= 0", "inequality": ">= 0", "inequation": "!= 0", "positivity": "> 0"}[kind]
            out.append(f"{p} {rel}")
        return "\n".join(out)


def interior_point(m: ModelSpec, seed: int = 0, budget: int = SAMPLE_BUDGET) -> dict:
    """One exact parameter point certifying that the parameter space is nonempty."""
    try:
        return ParameterSampler(m, seed, budget).sample()
    except RegionSamplingExhausted as exc:
        raise EmptyParameterSpaceSuspected(str(exc)) from exc


def markov_property(m: ModelSpec, seed: int = 0, budget: int = SAMPLE_BUDGET) -> MarkovProperty:
    """Transfer every parameter constraint to the model side through the inverse map."""
    if m.linear_eqs:
        interior_point(m, seed, budget)
    iso = m.iso
    eqs = transfer(iso, m.eq_gens).numerators
    ineqs = transfer(iso, m.ineq_gens).numerators
    noneqs = transfer(iso, m.noneq_gens).numerators
    prov = (
        [f"eq: {g}" for g in m.eq_gens]
        + [f"ineq: {g}" for g in m.ineq_gens]
        + [f"noneq: {g}" for g in m.noneq_gens]
        + ["localizing"] * len(iso.S)
    )
    return MarkovProperty(tuple(eqs), tuple(ineqs), tuple(noneqs), tuple(iso.S), tuple(prov), m.label)


# -- vanishing ideal ---------------------------------------------------------


def _require_prime(m: ModelSpec, assume_prime: bool) -> None:
    if not m.linear_eqs and not assume_prime:
        raise NonLinearEquations(
            "primality of non-linear parameter equations must be asserted (assume_prime=True)"
        )


def vanishing_ideal(m: ModelSpec, deadline: Deadline | None = None, assume_prime: bool = False,
                    method: str = "auto") -> IdealGens:
    """Saturation of the transferred equation ideal at the model-side monoid."""
    _require_prime(m, assume_prime)
    nums = [p for p in transfer(m.iso, m.eq_gens).numerators if p]
    mv = m.model_vars
    if any(p.is_constant() for p in nums):
        return IdealGens([mv.one()], mv)
    return saturate_monoid(IdealGens(nums, mv), m.iso.S, deadline, method)


def vanishing_ideal_by_elimination(m: ModelSpec, deadline: Deadline | None = None,
                                   assume_prime: bool = False) -> IdealGens:
    """Closure of the image by eliminating parameters from the graph of the parametrization.

    Linear parameter equations are solved first, so only the free
    coordinates (and one auxiliary variable inverting the denominators)
    are eliminated.
    """
    _require_prime(m, assume_prime)
    pv, mv = m.param_vars, m.model_vars
    pivots, free = _rref(m.eq_gens, pv)
    aux = "_u"
    big = VarTable([aux] + free + list(mv.names))
    fv = {n: big.var(n) for n in free}
    subst = []
    for name in pv.names:
        if name in pivots:
            const, coeffs = pivots[name]
            p = big.const(const)
            for other, c in coeffs.items():
                p = p + fv[other].scale(c)
            subst.append(p)
        else:
            subst.append(fv[name])

    gens = []
    dens = big.one()
    seen = set()
    for name, comp in zip(mv.names, m.iso.alpha.components):
        num = substitute(comp.num, subst, big)
        den = substitute(comp.den, subst, big)
        r = num / den
        gens.append(r.den * big.var(name) - r.num)
        key = r.den.normalize()
        if not r.den.is_constant() and key not in seen:
            seen.add(key)
            dens = dens * r.den
    if dens.is_constant():
        drop = free
    else:
        gens.append(1 - big.var(aux) * dens)
        drop = [aux] + free
    res = eliminate(IdealGens(gens, big), drop or [aux], deadline)
    return IdealGens([g.embed(mv) for g in res.gens], mv)


# -- point checks -------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintCheck:
    kind: str
    polynomial: str
    provenance: str
    value: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "polynomial": self.polynomial,
            "provenance": self.provenance,
            "value": str(self.value),
            "holds": self.holds,
        }


_HOLDS = {
    "equation": lambda v: v == 0,
    "inequality": lambda v: v >= 0,
    "inequation": lambda v: v != 0,
    "positivity": lambda v: v > 0,
}


def check_point(mp: MarkovProperty, x: Mapping) -> list[ConstraintCheck]:
    """Exact evaluation of every constraint at a model point."""
    out = []
    for kind, p, prov in mp.constraints():
        v = Fraction(p.evaluate(x))
        out.append(ConstraintCheck(kind, str(p), prov, v, _HOLDS[kind](v)))
    return out


# -- Schwartz-Zippel --------------------------------------------------------


@dataclass(frozen=True)
class SZResult:
    probably_zero: bool
    bound: Fraction
    trials: int
    witness: Mapping | None = None
    value: Fraction | None = None

    def to_json(self) -> dict:
        out = {"probably_zero": self.probably_zero, "bound_per_trial": str(self.bound), "trials": self.trials}
        if self.witness is not None:
            out["witness"] = {k: str(v) for k, v in self.witness.items()}
            out["value"] = str(self.value)
        return out


def sz_vanishes(F: Polynomial, m: ModelSpec, trials: int = 20, seed: int = 0,
                budget: int = SAMPLE_BUDGET) -> SZResult:
    """Randomized test whether ``F`` vanishes on the model.

    Evaluates the pullback of ``F`` at sampled parameter points.  When every
    value is zero the per-trial error bound is the numerator degree over the
    number of candidate values per coordinate.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    r = m.iso.phi(F)
    sampler = ParameterSampler(m, seed, budget)
    for _ in range(trials):
        theta = sampler.sample()
        v = Fraction(r.evaluate(theta))
        if v:
            return SZResult(False, Fraction(0), trials, theta, v)
    deg = r.num.total_degree() + r.den.total_degree()
    return SZResult(True, Fraction(deg, sampler.box_size), trials)


# -- model equivalence ------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceVerdict:
    """``equivalent``, ``inequivalent`` or ``undecided``, with certificates.

    Each certificate names a constraint of one model that fails on the
    other, either with a nonzero normal form (``residual``) or with an
    exact parameter point of the other model where it is violated.
    """

    result: str
    certificates: tuple = ()
    sampling_backed: bool = False
    checked: int = 0
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "result": self.result,
            "sampling_backed": self.sampling_backed,
            "checked": self.checked,
            "certificates": [dict(c) for c in self.certificates],
            "notes": list(self.notes),
        }


class _Side:
    """Everything needed to test constraints on one model."""

    def __init__(self, m: ModelSpec, seed: int, samples: int):
        self.m = m
        self.gb = buchberger(IdealGens(m.eq_gens, m.param_vars)) if m.eq_gens else None
        self.seed = seed
        self.samples = samples
        self._points = None
        # coordinates whose pullback is a positive multiple of Sbar products
        Sbar = m.iso.Sbar
        self.positive_coords = {
            name for name, c in zip(m.model_vars.names, m.iso.alpha.components)
            if _positive_over(c.num, Sbar) and _positive_over(c.den, Sbar)
        }
        # sign-preserving primitive forms of constraints known to hold
        pos = [g.primitive() for g in m.iso.S]
        self.implied = {
            "equation": set(),
            "positivity": set(pos),
            "inequality": set(pos),
            "inequation": set(pos),
        }

    def assume(self, mp: MarkovProperty) -> None:
        """Record this model's own Markov property as proven facts."""
        ineq = {g.primitive() for g in mp.inequalities}
        noneq = {g.primitive() for g in mp.inequations}
        pos = {g.primitive() for g in mp.positivities} | (ineq & noneq)
        self.implied["inequality"] |= ineq | pos
        self.implied["inequation"] |= noneq | pos | {-g for g in noneq}
        self.implied["positivity"] |= pos

    def points(self) -> list[dict]:
        if self._points is None:
            self._points = ParameterSampler(self.m, self.seed).take(self.samples)
        return self._points

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.gb) if self.gb is not None else p

    def pullback_numerator(self, F: Polynomial) -> Polynomial:
        r = self.m.iso.phi(F)
        return r.num


def _positive_over(r: Polynomial, Sbar: MonoidGens) -> bool:
    """``r`` is a positive constant times a product of ``Sbar`` generators."""
    if not r:
        return False
    rest, _ = cofactor_outside(r, Sbar)
    return rest.is_constant() and rest.constant_value() > 0


def _positive_combination(F: Polynomial, coords: set) -> bool:
    """Positive coefficients over coordinates known to be positive, so ``F > 0``."""
    if not F or any(c <= 0 for c in F.terms.values()):
        return False
    return all(F.vars.names[i] in coords for i in F.support())


def _test_constraint(kind: str, F: Polynomial, other: _Side, mode: str, mp_other: MarkovProperty):
    """Return ``(status, certificate)``; status in proven / refuted / sampled."""
    num = other.pullback_numerator(F)
    red = other.reduce(num)
    if kind == "equation":
        if red:
            return "refuted", {"kind": kind, "constraint": str(F), "residual": str(red)}
        return "proven", None
    if not red:
        # identically zero on the other model
        if kind == "inequality":
            return "proven", None
        return "refuted", {"kind": kind, "constraint": str(F), "residual": "0"}
    if mode == "zariski":
        # only generic non-vanishing matters
        return "proven", None
    if F.primitive() in other.implied[kind]:
        return "proven", None
    # sign of the pullback equals the sign of its numerator: denominators factor over Sbar
    if _positive_over(red, other.m.iso.Sbar):
        return "proven", None
    if _positive_combination(F, other.positive_coords):
        return "proven", None
    iso = other.m.iso
    for theta in other.points():
        x = iso.alpha(theta)
        v = Fraction(F.evaluate(x))
        if not _HOLDS[kind](v):
            return "refuted", {
                "kind": kind,
                "constraint": str(F),
                "point": {k: str(val) for k, val in theta.items()},
                "value": str(v),
            }
    return "sampled", None


def model_equiv(m1: ModelSpec, m2: ModelSpec, mode: str = "exact", seed: int = 0,
                samples: int = 50) -> EquivalenceVerdict:
    """Decide whether two models over the same coordinates coincide.

    Every constraint of each model's Markov property is pulled back to the
    other model's parameters.  Equations are decided by normal forms
    against the other model's parameter equations.  In ``exact`` mode the
    sign conditions are proven when the reduced numerator is a positive
    multiple of localizing generators, and are otherwise sampled.
    ``zariski`` mode compares the Zariski closures only.
    """
    if mode not in ("exact", "zariski"):
        raise ValueError("mode must be 'exact' or 'zariski'")
    if m1.model_vars != m2.model_vars:
        raise ValueError("models over different coordinates")
    mp1, mp2 = markov_property(m1, seed), markov_property(m2, seed)
    s1, s2 = _Side(m1, seed, samples), _Side(m2, seed, samples)
    s1.assume(mp1)
    s2.assume(mp2)
    certs, notes = [], []
    sampled = False
    checked = 0
    for tag, mp, other, mp_other in (("first", mp1, s2, mp2), ("second", mp2, s1, mp1)):
        for kind, F, prov in mp.constraints():
            if mode == "zariski" and kind in ("inequality",):
                continue
            checked += 1
            status, cert = _test_constraint(kind, F, other, mode, mp_other)
            if status == "refuted":
                cert = dict(cert, source=tag, provenance=prov)
                certs.append(cert)
            elif status == "sampled":
                sampled = True
                notes.append(f"{tag}: {kind} {F} checked on {samples} samples only")
    if certs:
        result = "inequivalent"
    elif sampled:
        result = "undecided"
    else:
        result = "equivalent"
    return EquivalenceVerdict(result, tuple(certs), sampled, checked, tuple(notes))
