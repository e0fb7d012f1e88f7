"""Staged tree models over leaf probabilities."""

from __future__ import annotations

from ..birational import BirationalIso, RationalMap, extend_to_full
from ..fraction import MonoidGens, RationalFunction
from ..polyring import VarTable
from .specs import ModelSpec, StagedTreeSpec, parse_constraints

__all__ = ["build_staged_tree", "MASS"]

# total probability mass; one extra coordinate makes the map birational
MASS = "tau"


def build_staged_tree(t: StagedTreeSpec) -> ModelSpec:
    """Tree parametrization with stage equalities as linear parameter constraints.

    Every inner node keeps one free edge probability per child except the
    last, whose probability is one minus its siblings'.  Together with the
    mass coordinate this gives as many parameters as leaves.
    """
    kids = t.children
    nodes = t.nodes()
    leaves = t.leaves()
    if not kids:
        raise ValueError("a tree with a single node has no model")
    free = [c for v in nodes for c in kids.get(v, ())[:-1]]
    P = VarTable([MASS] + [f"t_{c}" for c in free])
    pname = {leaf: f"p_{t.leaf_label(leaf)}" for leaf in leaves}
    M = VarTable(sorted(pname.values()))
    parent = {c: v for v, cs in kids.items() for c in cs}

    def edge_prob(c):
        siblings = kids[parent[c]]
        if c != siblings[-1]:
            return P.var(f"t_{c}")
        acc = P.one()
        for s in siblings[:-1]:
            acc = acc - P.var(f"t_{s}")
        return acc

    # leaf marginals as linear forms; p[v] for every node
    below: dict = {}
    for v in reversed(nodes):
        if v in kids:
            acc = M.zero()
            for c in kids[v]:
                acc = acc + below[c]
            below[v] = acc
        else:
            below[v] = M.var(pname[v])

    paths = t.paths()
    alpha = []
    by_name = {n: leaf for leaf, n in pname.items()}
    for name in M.names:
        leaf = by_name[name]
        prod = P.var(MASS)
        for c in paths[leaf]:
            prod = prod * edge_prob(c)
        alpha.append(RationalFunction.from_poly(prod))
    beta = [RationalFunction.from_poly(below[t.root])]
    for c in free:
        beta.append(RationalFunction(below[c], below[parent[c]]))

    # marginal of a node pulls back to the product along its path
    node_path: dict = {t.root: []}
    for v in nodes:
        for c in kids.get(v, ()):
            node_path[c] = node_path[v] + [c]
    hints = {}
    for v in nodes:
        prod = P.var(MASS)
        for c in node_path[v]:
            prod = prod * edge_prob(c)
        hints[below[v]] = RationalFunction.from_poly(prod)

    S = [below[v] for v in nodes]
    Sbar = [P.var(MASS)] + [edge_prob(c) for v in nodes for c in kids.get(v, ())]
    iso = BirationalIso(
        RationalMap(P, M, tuple(alpha)), RationalMap(M, P, tuple(beta)),
        MonoidGens(S), MonoidGens(Sbar), phi_hints=hints,
    )
    iso = extend_to_full(iso)

    eqs = [P.var(MASS) - 1]
    for stage in t.stages:
        first = stage[0]
        for other in stage[1:]:
            for a, b in zip(kids[first][:-1], kids[other][:-1]):
                eqs.append(edge_prob(a) - edge_prob(b))
    e2, i2, n2 = parse_constraints(P, t.constraints)
    box = {name: (1, 15, 16) for name in P.names}
    return ModelSpec(
        iso, tuple(eqs + e2), tuple(i2), tuple(n2), t.label or "staged-tree", "staged_tree", box,
    )
