"""Dense linear solve over a field of rational functions."""

from __future__ import annotations

from ..fraction import RationalFunction


class SingularSystem(ArithmeticError):
    pass


def _size(r: RationalFunction) -> int:
    return len(r.num) + len(r.den)


def solve(rows: list[list[RationalFunction]], rhs: list[RationalFunction]) -> list[RationalFunction]:
    """Gauss-Jordan elimination, pivoting on the smallest available entry."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        cands = [i for i in range(col, n) if m[i][col]]
        if not cands:
            raise SingularSystem("coefficient matrix is singular")
        piv = min(cands, key=lambda i: _size(m[i][col]))
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv if x else x for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]
