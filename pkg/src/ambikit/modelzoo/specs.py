"""Model specifications handed to the implicitization layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..birational import BirationalIso
from ..polyring import VarTable

__all__ = [
    "MalformedSpec",
    "ModelSpec",
    "GraphSpec",
    "StagedTreeSpec",
    "LyapunovSpec",
    "DEFAULT_BOX",
    "parse_constraints",
]

# integers in [-10, 10] over denominator 4
DEFAULT_BOX = (-10, 10, 4)

_OPS = ("==", ">=", ">", "!=")


class MalformedSpec(ValueError):
    """The model description is inconsistent or outside the supported families."""


@dataclass(frozen=True)
class ModelSpec:
    """Parameter-side description of a model together with its isomorphism.

    ``eq_gens`` vanish, ``ineq_gens`` are non-negative and ``noneq_gens``
    are nonzero on the parameter space; the ``Sbar`` generators of the iso
    are strictly positive there.  ``sample_box`` maps a parameter name to
    ``(lo, hi, den)``: candidate values ``k/den`` for ``lo <= k <= hi``.
    """

    iso: BirationalIso
    eq_gens: tuple = ()
    ineq_gens: tuple = ()
    noneq_gens: tuple = ()
    label: str = ""
    family: str = ""
    sample_box: Mapping = field(default_factory=dict, compare=False)
    linear_eqs: bool = True

    def __post_init__(self):
        pv = self.iso.param_vars
        for lst in (self.eq_gens, self.ineq_gens, self.noneq_gens):
            for g in lst:
                if g.vars != pv:
                    raise MalformedSpec("constraint not over the parameter variables")
        object.__setattr__(
            self, "linear_eqs", all(g.total_degree() <= 1 for g in self.eq_gens)
        )

    @property
    def param_vars(self) -> VarTable:
        return self.iso.param_vars

    @property
    def model_vars(self) -> VarTable:
        return self.iso.model_vars

    def box_for(self, name: str) -> tuple[int, int, int]:
        return tuple(self.sample_box.get(name, DEFAULT_BOX))


def parse_constraints(vars: VarTable, items) -> tuple[list, list, list]:
    """Split ``(expr, op)`` pairs into equations, inequalities and inequations.

    ``a > 0`` contributes to both inequalities and inequations.
    """
    eqs, ineqs, noneqs = [], [], []
    for item in items:
        if isinstance(item, str):
            item = _split_relation(item)
        expr, op = item
        p = vars.parse(expr) if isinstance(expr, str) else expr
        if op == "==":
            eqs.append(p)
        elif op == ">=":
            ineqs.append(p)
        elif op == ">":
            ineqs.append(p)
            noneqs.append(p)
        elif op == "!=":
            noneqs.append(p)
        else:
            raise MalformedSpec(f"unknown relation {op!r}")
    return eqs, ineqs, noneqs


def _split_relation(text: str) -> tuple[str, str]:
    for op in ("==", ">=", "<=", "!=", ">", "<", "="):
        if op in text:
            lhs, rhs = text.split(op, 1)
            expr = f"({lhs}) - ({rhs})"
            if op in ("<=", "<"):
                expr = f"({rhs}) - ({lhs})"
            return expr, {"=": "==", "<=": ">=", "<": ">"}.get(op, op)
    raise MalformedSpec(f"no relation in {text!r}")


@dataclass(frozen=True)
class GraphSpec:
    """Graph with optional colorings, interventions and extra constraints.

    Nodes are ``1..n``.  ``edges`` holds ``(kind, i, j)`` with kind one of
    ``undirected``, ``directed`` or ``bidirected``.  Colors map a node or an
    ``(i, j)`` edge to a label; equal labels tie the parameters.
    ``constraints`` are relations over parameter names such as
    ``"k_1_2 <= 0"``.
    """

    n: int
    edges: tuple = ()
    vertex_colors: Mapping = field(default_factory=dict)
    edge_colors: Mapping = field(default_factory=dict)
    interventions: tuple = ()
    intervention_kind: str = "general"
    monotone: bool = False
    mtp2: bool = False
    constraints: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise MalformedSpec("graph needs at least one node")
        seen = set()
        for e in self.edges:
            kind, i, j = e
            if kind not in ("undirected", "directed", "bidirected"):
                raise MalformedSpec(f"unknown edge kind {kind!r}")
            if not (1 <= i <= self.n and 1 <= j <= self.n) or i == j:
                raise MalformedSpec(f"bad edge {e}")
            key = (kind, i, j) if kind == "directed" else (kind, min(i, j), max(i, j))
            if key in seen:
                raise MalformedSpec(f"duplicate edge {e}")
            seen.add(key)
        if self.intervention_kind not in ("general", "error_variance"):
            raise MalformedSpec(f"unknown intervention kind {self.intervention_kind!r}")
        for t in self.interventions:
            if any(not 1 <= v <= self.n for v in t):
                raise MalformedSpec("intervention target outside the node set")

    def kinds(self) -> set:
        return {e[0] for e in self.edges}

    def pairs(self, kind: str) -> set:
        out = set()
        for k, i, j in self.edges:
            if k == kind:
                out.add((i, j) if kind == "directed" else (min(i, j), max(i, j)))
        return out


@dataclass(frozen=True)
class StagedTreeSpec:
    """Rooted tree given by ordered child lists, plus a stage partition.

    Children correspond position by position across a stage, so the k-th
    outgoing edge of every stage member carries the same probability.
    Node ids become variable suffixes (``p_<leaf>``, ``t_<node>``).
    ``leaf_labels`` optionally renames leaves on the model side, so trees
    that visit the variables in different orders share coordinates.
    """

    children: Mapping
    root: str = "r"
    stages: tuple = ()
    constraints: tuple = ()
    label: str = ""
    leaf_labels: Mapping = field(default_factory=dict)

    def __post_init__(self):
        kids = {k: tuple(v) for k, v in self.children.items() if v}
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "stages", tuple(tuple(s) for s in self.stages))
        if self.root not in kids and kids:
            raise MalformedSpec("root has no children")
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            cs = kids.get(v, ())
            if len(cs) == 1:
                raise MalformedSpec(f"node {v} has exactly one child")
            for c in cs:
                if c in seen:
                    raise MalformedSpec(f"node {c} reached twice")
                seen.add(c)
                stack.append(c)
        if set(kids) - seen:
            raise MalformedSpec("children listed for unreachable nodes")
        staged = set()
        for st in self.stages:
            deg = {len(kids.get(v, ())) for v in st}
            if any(v not in seen for v in st):
                raise MalformedSpec(f"stage {st} names unknown nodes")
            if len(deg) != 1 or 0 in deg:
                raise MalformedSpec(f"stage {st} mixes out-degrees or contains leaves")
            if staged & set(st):
                raise MalformedSpec("stages overlap")
            staged |= set(st)
        leaves = [v for v in seen if v not in kids]
        if self.leaf_labels:
            names = [self.leaf_labels.get(v) for v in leaves]
            if None in names or len(set(names)) != len(names):
                raise MalformedSpec("leaf_labels must rename every leaf to a distinct label")

    def leaf_label(self, leaf: str) -> str:
        return self.leaf_labels.get(leaf, leaf)

    @classmethod
    def binary(cls, depth: int, stages=(), label: str = "", levels=None,
               coordinates=None) -> "StagedTreeSpec":
        """Complete binary tree whose nodes are 0/1 words (root ``r``).

        ``levels`` names the variable decided at each depth and
        ``coordinates`` the order of letters in the model-side leaf labels.
        """
        children = {"r": ("0", "1")}
        level = ["0", "1"]
        for _ in range(depth - 1):
            nxt = []
            for w in level:
                children[w] = (w + "0", w + "1")
                nxt += [w + "0", w + "1"]
            level = nxt
        labels = {}
        if levels is not None or coordinates is not None:
            levels = list(levels or coordinates)
            coordinates = list(coordinates or levels)
            if sorted(levels) != sorted(coordinates) or len(levels) != depth:
                raise MalformedSpec("levels and coordinates must list the same variables once per depth")
            where = [levels.index(v) for v in coordinates]
            labels = {w: "".join(w[k] for k in where) for w in level}
        return cls(children, "r", tuple(tuple(s) for s in stages), (), label, labels)

    def nodes(self) -> list:
        out, queue = [], [self.root]
        while queue:
            v = queue.pop(0)
            out.append(v)
            queue.extend(self.children.get(v, ()))
        return out

    def leaves(self) -> list:
        return [v for v in self.nodes() if v not in self.children]

    def paths(self) -> dict:
        """Leaf -> list of nodes from the first child of the root down to the leaf."""
        out = {}
        stack = [(self.root, [])]
        while stack:
            v, path = stack.pop()
            cs = self.children.get(v)
            if not cs:
                out[v] = path
                continue
            for c in cs:
                stack.append((c, path + [c]))
        return out


@dataclass(frozen=True)
class LyapunovSpec:
    """Drift support, fixed covariance of the driving noise, extra relations.

    ``support`` lists ``(row, col)`` entries of the drift matrix (1-based);
    entry ``(j, i)`` is the edge ``i -> j``.  Entries are kept column by
    column, which fixes the parameter order ``m_1_1, m_2_1, m_3_1, m_2_2, ...``.
    ``C`` defaults to the identity.
    """

    n: int = 3
    support: tuple = ()
    C: tuple = ()
    constraints: tuple = ()
    label: str = ""

    def __post_init__(self):
        sup = tuple(tuple(e) for e in self.support) or tuple(
            (i, j) for i in range(1, self.n + 1) for j in range(1, i + 1)
        )
        object.__setattr__(self, "support", tuple(sorted(sup, key=lambda e: (e[1], e[0]))))
        C = self.C or tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))
        C = tuple(tuple(Fraction(x) for x in r) for r in C)
        if len(C) != self.n or any(len(r) != self.n for r in C):
            raise MalformedSpec("C has the wrong shape")
        if any(C[i][j] != C[j][i] for i in range(self.n) for j in range(self.n)):
            raise MalformedSpec("C must be symmetric")
        object.__setattr__(self, "C", C)
