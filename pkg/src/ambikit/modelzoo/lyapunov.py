"""Lyapunov models: stationary covariances of linear drift processes."""

from __future__ import annotations

from fractions import Fraction

from ..birational import BirationalIso, RationalMap, extend_to_full
from ..fraction import MonoidGens, RationalFunction
from ..polyring import PolyMatrix, Polynomial, VarTable
from ._linsolve import SingularSystem, solve
from .gaussian import lead_minor, sym_matrix, sym_table
from .specs import LyapunovSpec, MalformedSpec, ModelSpec, parse_constraints

__all__ = ["build_lyapunov", "kron_system", "recovery_system"]


def _drift(P: VarTable, spec: LyapunovSpec) -> list[list[Polynomial]]:
    n = spec.n
    z = P.zero()
    M = [[z] * n for _ in range(n)]
    for r, c in spec.support:
        M[r - 1][c - 1] = P.var(f"m_{r}_{c}")
    return M


def kron_system(P: VarTable, spec: LyapunovSpec) -> PolyMatrix:
    """``-(I (x) M + M (x) I)`` acting on ``vec(Sigma)`` (column-major)."""
    n = spec.n
    M = _drift(P, spec)
    z = P.zero()
    idx = [(i, j) for j in range(n) for i in range(n)]
    rows = []
    for k, l in idx:
        row = []
        for a, b in idx:
            v = z
            if b == l:
                v = v + M[k][a]
            if a == k:
                v = v + M[l][b]
            row.append(-v)
        rows.append(row)
    return PolyMatrix(P, rows)


def recovery_system(Mv: VarTable, spec: LyapunovSpec) -> PolyMatrix:
    """Rows ``kl`` (k <= l), columns the drift support, applied to ``vec(M)``."""
    n = spec.n
    S = sym_matrix(Mv, "s", n)
    z = Mv.zero()
    rows = []
    for k in range(n):
        for l in range(k, n):
            row = []
            for r, c in spec.support:
                a, b = r - 1, c - 1
                v = z
                if a == k:
                    v = v + S[b, l]
                if a == l:
                    v = v + S[k, b]
                row.append(v)
            rows.append(row)
    return PolyMatrix(Mv, rows)


def _is_lower_triangular(spec: LyapunovSpec) -> bool:
    n = spec.n
    full = {(i, j) for i in range(1, n + 1) for j in range(1, i + 1)}
    return set(spec.support) == full


def build_lyapunov(spec: LyapunovSpec) -> ModelSpec:
    """Forward map by solving the vectorized Lyapunov equation, inverse by the recovery subsystem."""
    n = spec.n
    if not _is_lower_triangular(spec):
        raise MalformedSpec("only the full lower-triangular drift support with self-loops is built in")
    for k in range(1, n + 1):
        sub = [[spec.C[i][j] for j in range(k)] for i in range(k)]
        if _fdet(sub) <= 0:
            raise MalformedSpec("C must be positive definite")
    P = VarTable([f"m_{r}_{c}" for r, c in spec.support])
    Mv = sym_table("s", n)
    R = RationalFunction

    # forward: symmetric unknowns, rows kl with k <= l of the Kronecker system
    B = kron_system(P, spec)
    pos = {(i, j): i + n * j for j in range(n) for i in range(n)}
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    rows, rhs = [], []
    for k, l in pairs:
        r = pos[(k, l)]
        row = []
        for a, b in pairs:
            v = B[r, pos[(a, b)]]
            if a != b:
                v = v + B[r, pos[(b, a)]]
            row.append(R(v))
        rows.append(row)
        rhs.append(R(P.const(spec.C[k][l])))
    try:
        sig = solve(rows, rhs)
    except SingularSystem as exc:
        raise MalformedSpec("Kronecker system is singular") from exc
    by_pair = dict(zip(pairs, sig))
    alpha = RationalMap(P, Mv, tuple(by_pair[_pair(x)] for x in Mv.names))

    A = recovery_system(Mv, spec)
    arows = [[R(A[i, j]) for j in range(A.cols)] for i in range(A.rows)]
    arhs = [R(Mv.const(-spec.C[k][l])) for k, l in pairs]
    try:
        ms = solve(arows, arhs)
    except SingularSystem as exc:
        raise MalformedSpec("recovery subsystem is singular") from exc
    beta = RationalMap(Mv, P, tuple(ms))

    m = lambda i: P.var(f"m_{i}_{i}")
    Sbar = [-m(i) for i in range(1, n + 1)]
    Sbar += [-m(i) - m(j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    MS = sym_matrix(Mv, "s", n)
    S = [lead_minor(MS, k) for k in range(1, n + 1)]
    iso = extend_to_full(BirationalIso(alpha, beta, MonoidGens(S), MonoidGens(Sbar)))

    e2, i2, n2 = parse_constraints(P, spec.constraints)
    box = {name: ((-10, -1, 4) if name.split("_")[1] == name.split("_")[2] else (-10, 10, 4)) for name in P.names}
    return ModelSpec(iso, tuple(e2), tuple(i2), tuple(n2), spec.label or f"lyapunov-{n}", "lyapunov", box)


def _pair(name: str) -> tuple[int, int]:
    _, i, j = name.split("_")
    return int(i) - 1, int(j) - 1


def _fdet(m: list[list[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in m]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return d
