"""Gaussian families: linear concentration models and structural equation models."""

from __future__ import annotations

from itertools import combinations

from ..birational import BirationalIso, RationalMap, extend_to_full
from ..fraction import MonoidGens, RationalFunction
from ..polyring import PolyMatrix, Polynomial, VarTable, minor
from .specs import GraphSpec, MalformedSpec, ModelSpec, parse_constraints

__all__ = [
    "sym_names",
    "sym_table",
    "sym_matrix",
    "cond_minor",
    "build_concentration",
    "build_sem",
]


def sym_names(prefix: str, n: int, suffix: str = "") -> list[str]:
    """Diagonal entries first, then the upper triangle row by row."""
    diag = [f"{prefix}_{i}_{i}{suffix}" for i in range(1, n + 1)]
    off = [f"{prefix}_{i}_{j}{suffix}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return diag + off


def sym_table(prefix: str, n: int) -> VarTable:
    return VarTable(sym_names(prefix, n))


def sym_matrix(vars: VarTable, prefix: str, n: int, suffix: str = "") -> PolyMatrix:
    def v(i, j):
        i, j = min(i, j), max(i, j)
        return vars.var(f"{prefix}_{i + 1}_{j + 1}{suffix}")
    return PolyMatrix(vars, [[v(i, j) for j in range(n)] for i in range(n)])


def cond_minor(m: PolyMatrix, i: int, j: int, cond) -> Polynomial:
    """``|M_{ij|C}|``: rows ``i`` then ``C``, columns ``j`` then ``C`` (1-based, C sorted)."""
    c = sorted(cond)
    return minor(m, [i - 1] + [k - 1 for k in c], [j - 1] + [k - 1 for k in c])


def lead_minor(m: PolyMatrix, k: int) -> Polynomial:
    return minor(m, range(k), range(k))


def _ties(classes: dict, var) -> list[Polynomial]:
    groups: dict = {}
    for key, color in sorted(classes.items(), key=lambda kv: str(kv[0])):
        groups.setdefault(str(color), []).append(key)
    out = []
    for members in groups.values():
        members = sorted(members)
        for a, b in zip(members, members[1:]):
            out.append(var(a) - var(b))
    return out


def _edge_key(e) -> tuple[int, int]:
    if isinstance(e, str):
        a, b = e.replace("-", " ").replace(",", " ").split()
        e = (int(a), int(b))
    i, j = e
    return (min(i, j), max(i, j))


def _vertex_key(v) -> int:
    return int(v)


# -- concentration models ---------------------------------------------------


def _inversion_map(src: PolyMatrix, dom: VarTable, cod: VarTable, n: int) -> RationalMap:
    adj = src.adjugate()
    d = src.det()
    comps = []
    for name in cod.names:
        _, i, j = name.split("_")
        comps.append(RationalFunction(adj[int(i) - 1, int(j) - 1], d))
    return RationalMap(dom, cod, tuple(comps))


def _subsets(n: int):
    for k in range(1, n + 1):
        yield from combinations(range(n), k)


def build_concentration(g: GraphSpec) -> ModelSpec:
    """Covariance matrices whose inverse satisfies linear (and sign) constraints."""
    if g.kinds() - {"undirected"}:
        raise MalformedSpec("concentration models take undirected edges only")
    n = g.n
    K, S = sym_table("k", n), sym_table("s", n)
    MK, MS = sym_matrix(K, "k", n), sym_matrix(S, "s", n)
    alpha = _inversion_map(MK, K, S, n)
    beta = _inversion_map(MS, S, K, n)
    detK, detS = MK.det(), MS.det()
    full = tuple(range(n))
    mk = {I: minor(MK, I, I) for I in _subsets(n)}
    ms = {I: minor(MS, I, I) for I in _subsets(n)}
    # principal minors of an inverse: |(X^-1)_I| = |X_{I^c}| / |X|
    psi_hints, phi_hints = {}, {}
    for I in _subsets(n):
        comp = tuple(k for k in full if k not in I)
        psi_hints[mk[I]] = RationalFunction(ms[comp] if comp else S.one(), detS)
        phi_hints[ms[I]] = RationalFunction(mk[comp] if comp else K.one(), detK)
    iso = BirationalIso(
        alpha, beta, MonoidGens([detS]), MonoidGens([detK]),
        psi_hints=psi_hints, phi_hints=phi_hints,
    )
    iso = extend_to_full(iso)

    edges = g.pairs("undirected")
    k = lambda i, j: K.var(f"k_{min(i, j)}_{max(i, j)}")
    eqs = [k(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (i, j) not in edges]
    eqs += _ties({_vertex_key(v): c for v, c in g.vertex_colors.items()}, lambda v: k(v, v))
    eqs += _ties({_edge_key(e): c for e, c in g.edge_colors.items()}, lambda e: k(*e))
    pd = [mk[I] for I in _subsets(n)]
    ineqs = list(pd)
    noneqs = list(pd)
    if g.mtp2:
        ineqs += [-k(i, j) for (i, j) in sorted(edges)]
    e2, i2, n2 = parse_constraints(K, g.constraints)
    box = {f"k_{i}_{i}": (4, 16, 4) for i in range(1, n + 1)}
    box.update({f"k_{i}_{j}": (-4, 4, 8) for i in range(1, n + 1) for j in range(i + 1, n + 1)})
    return ModelSpec(
        iso, tuple(eqs + e2), tuple(ineqs + i2), tuple(noneqs + n2),
        g.label or f"concentration-{n}", "concentration", box,
    )


# -- structural equation models ---------------------------------------------


def _sem_names(n: int, tag: str) -> tuple[list[str], list[str]]:
    params = [f"w_{i}_{i}{tag}" for i in range(1, n + 1)]
    params += [f"l_{i}_{j}{tag}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return params, sym_names("s", n, tag)


def _sem_forward(P: VarTable, n: int, tag: str, omega_off=()) -> PolyMatrix:
    """``(I - L)^-T W (I - L)^-1`` with ``L`` strictly upper triangular."""
    z = P.zero()
    L = PolyMatrix(P, [[P.var(f"l_{i + 1}_{j + 1}{tag}") if i < j and f"l_{i + 1}_{j + 1}{tag}" in P else z
                        for j in range(n)] for i in range(n)])
    W = [[z] * n for _ in range(n)]
    for i in range(n):
        W[i][i] = P.var(f"w_{i + 1}_{i + 1}{tag}")
    for i, j in omega_off:
        W[i - 1][j - 1] = W[j - 1][i - 1] = P.var(f"w_{i}_{j}{tag}")
    W = PolyMatrix(P, W)
    # (I - L)^-1 = I + L + ... + L^(n-1) since L is nilpotent
    N = PolyMatrix.identity(P, n)
    power = PolyMatrix.identity(P, n)
    for _ in range(n - 1):
        power = power @ L
        N = N + power
    return N.transpose() @ W @ N


def _sem_copy(P: VarTable, Mv: VarTable, n: int, tag: str):
    Sig = _sem_forward(P, n, tag)
    MS = sym_matrix(Mv, "s", n, tag)
    alpha = {}
    for i in range(n):
        for j in range(i, n):
            alpha[f"s_{i + 1}_{j + 1}{tag}"] = RationalFunction.from_poly(Sig[i, j])
    lead = [Mv.one()] + [lead_minor(MS, k) for k in range(1, n + 1)]
    beta = {}
    for i in range(1, n + 1):
        beta[f"w_{i}_{i}{tag}"] = RationalFunction(lead[i], lead[i - 1])
    for j in range(1, n + 1):
        for i in range(1, j):
            cond = [c for c in range(1, j) if c != i]
            beta[f"l_{i}_{j}{tag}"] = RationalFunction(cond_minor(MS, i, j, cond), lead[j - 1])
    S = lead[1:]
    Sbar = [P.var(f"w_{i}_{i}{tag}") for i in range(1, n + 1)]
    hints = {}
    prod = P.one()
    for k in range(1, n + 1):
        prod = prod * P.var(f"w_{k}_{k}{tag}")
        hints[lead[k]] = RationalFunction.from_poly(prod)
    return alpha, beta, S, Sbar, hints


def build_sem(g: GraphSpec) -> ModelSpec:
    """Linear SEM on a topologically ordered DAG, optionally colored or intervened on."""
    if g.kinds() - {"directed", "bidirected"}:
        raise MalformedSpec("SEMs take directed and bidirected edges only")
    if g.pairs("bidirected"):
        return _build_confounded(g)
    n = g.n
    edges = g.pairs("directed")
    for i, j in edges:
        if i >= j:
            raise MalformedSpec(f"edge {i}->{j} violates the topological order 1..n")
    tags = [""] + [f"_i{c}" for c in range(1, len(g.interventions) + 1)]
    pnames, mnames = [], []
    for t in tags:
        p, m = _sem_names(n, t)
        pnames += p
        mnames += m
    P, Mv = VarTable(pnames), VarTable(mnames)
    alpha, beta, S, Sbar, hints = {}, {}, [], [], {}
    for t in tags:
        a, b, s, sb, h = _sem_copy(P, Mv, n, t)
        alpha.update(a)
        beta.update(b)
        S += s
        Sbar += sb
        hints.update(h)
    iso = BirationalIso(
        RationalMap(P, Mv, tuple(alpha[x] for x in Mv.names)),
        RationalMap(Mv, P, tuple(beta[x] for x in P.names)),
        MonoidGens(S), MonoidGens(Sbar), phi_hints=hints,
    )
    iso = extend_to_full(iso)

    eqs, ineqs, noneqs = [], [], []
    for t in tags:
        w = lambda v, t=t: P.var(f"w_{v}_{v}{t}")
        lam = lambda e, t=t: P.var(f"l_{e[0]}_{e[1]}{t}")
        eqs += [P.var(f"l_{i}_{j}{t}") for j in range(1, n + 1) for i in range(1, j) if (i, j) not in edges]
        eqs += _ties({_vertex_key(v): c for v, c in g.vertex_colors.items()}, w)
        eqs += _ties({tuple(map(int, _edge_key(e))): c for e, c in g.edge_colors.items()}, lam)
    for c, targets in enumerate(g.interventions, start=1):
        t = tags[c]
        targets = {int(v) for v in targets}
        for v in range(1, n + 1):
            if v not in targets:
                eqs.append(P.var(f"w_{v}_{v}{t}") - P.var(f"w_{v}_{v}"))
            elif g.monotone:
                ineqs.append(P.var(f"w_{v}_{v}{t}") - P.var(f"w_{v}_{v}"))
            if v not in targets or g.intervention_kind == "error_variance":
                for i in range(1, v):
                    if (i, v) in edges:
                        eqs.append(P.var(f"l_{i}_{v}{t}") - P.var(f"l_{i}_{v}"))
    e2, i2, n2 = parse_constraints(P, g.constraints)
    box = {}
    for name in P.names:
        box[name] = (1, 12, 4) if name.startswith("w_") else (-8, 8, 4)
    fam = "sem"
    return ModelSpec(
        iso, tuple(eqs + e2), tuple(ineqs + i2), tuple(noneqs + n2),
        g.label or f"sem-{n}", fam, box,
    )


# -- the confounded four-node instance --------------------------------------

_CONF_DIRECTED = {(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)}


def _build_confounded(g: GraphSpec) -> ModelSpec:
    """Mixed graph on 4 nodes with ``2 <-> 4`` in place of ``2 -> 4``.

    Only this instance ships: its identification formulas are data, not
    derived.
    """
    edges = g.pairs("directed")
    if g.n != 4 or g.pairs("bidirected") != {(2, 4)} or not edges <= _CONF_DIRECTED:
        raise MalformedSpec("only the 4-node graph with bidirected edge 2<->4 has built-in inverse formulas")
    if g.interventions:
        raise MalformedSpec("interventions are not supported on the confounded instance")
    pnames = [f"w_{i}_{i}" for i in range(1, 5)] + ["w_2_4"]
    pnames += [f"l_{i}_{j}" for i, j in sorted(_CONF_DIRECTED)]
    P, Mv = VarTable(pnames), sym_table("s", 4)
    z = P.zero()
    # reuse the generic forward map; l_2_4 is absent from the table
    Sig = _sem_forward(P, 4, "", omega_off=[(2, 4)])
    alpha = RationalMap(P, Mv, tuple(
        RationalFunction.from_poly(Sig[int(x.split("_")[1]) - 1, int(x.split("_")[2]) - 1]) for x in Mv.names
    ))
    MS = sym_matrix(Mv, "s", 4)
    d1, d12, d123, d1234 = (lead_minor(MS, k) for k in range(1, 5))
    m24_13 = cond_minor(MS, 2, 4, [1, 3])
    R = RationalFunction
    comps = {
        "w_1_1": R(d1),
        "w_2_2": R(d12, d1),
        "w_3_3": R(d123, d12),
        "w_4_4": R(d1234, d123) + R(d12 * m24_13 ** 2, d1 * d123 ** 2),
        "w_2_4": R(d12 * m24_13, d1 * d123),
        "l_1_2": R(cond_minor(MS, 1, 2, []), d1),
        "l_1_3": R(cond_minor(MS, 1, 3, [2]), d12),
        "l_1_4": R(cond_minor(MS, 1, 4, [2, 3]), d123) + R(cond_minor(MS, 1, 2, []) * m24_13, d1 * d123),
        "l_2_3": R(cond_minor(MS, 2, 3, [1]), d12),
        "l_3_4": R(cond_minor(MS, 3, 4, [1, 2]), d123),
    }
    beta = RationalMap(Mv, P, tuple(comps[x] for x in P.names))
    w = P.var
    om = [[w("w_1_1"), z, z, z], [z, w("w_2_2"), z, w("w_2_4")],
          [z, z, w("w_3_3"), z], [z, w("w_2_4"), z, w("w_4_4")]]
    Om = PolyMatrix(P, om)
    hints = {lead_minor(MS, k): R(lead_minor(Om, k)) for k in range(1, 5)}
    Sbar = [w("w_1_1"), w("w_2_2"), w("w_3_3"), w("w_2_2") * w("w_4_4") - w("w_2_4") ** 2]
    iso = BirationalIso(alpha, beta, MonoidGens([d1, d12, d123, d1234]), MonoidGens(Sbar), phi_hints=hints)
    iso = extend_to_full(iso)
    eqs = [w(f"l_{i}_{j}") for i, j in sorted(_CONF_DIRECTED) if (i, j) not in edges]
    e2, i2, n2 = parse_constraints(P, g.constraints)
    box = {name: ((1, 12, 4) if name.startswith("w_") and name[2] == name[4] else (-8, 8, 4)) for name in P.names}
    return ModelSpec(iso, tuple(eqs + e2), tuple(i2), tuple(n2), g.label or "confounded-4", "sem", box)
