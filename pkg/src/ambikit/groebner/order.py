"""Term orders and their packed-integer monomial encoding.

A monomial is packed into one Python ``int`` so that integer comparison
is the term order and multiplication is key addition (minus a constant
offset).  Each block of variables contributes a degree field (graded
blocks only) followed by one ``FIELD``-bit slot per variable.  Graded
reverse lexicographic slots store ``MAXE - e`` so that a smaller exponent
in a later variable yields a larger key.

Exponent slots keep their top bit free, which lets divisibility be tested
with a single subtraction (see :meth:`MonomialCodec.divides`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

FIELD = 16
MAXE = (1 << FIELD) - 1
GUARD_BIT = 1 << (FIELD - 1)
DEG_FIELD = 32


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on ``nvars`` variables.

    ``kind`` is ``grevlex``, ``lex`` or ``block``.  A block order lists
    ``(size, inner)`` pairs; the first block dominates, so its variables are
    eliminated first.  ``weights`` optionally grades a ``grevlex`` order
    (or a ``grevlex`` block) by a positive integer weight per variable.
    """

    kind: str
    nvars: int
    blocks: tuple = ()
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "block":
            if sum(s for s, _ in self.blocks) != self.nvars:
                raise ValueError("block sizes must add up to the number of variables")
            for s, inner in self.blocks:
                if inner not in ("grevlex", "lex") or s <= 0:
                    raise ValueError("invalid block")
        if self.weights is not None:
            if len(self.weights) != self.nvars or min(self.weights) <= 0:
                raise ValueError("weights must be positive, one per variable")

    @classmethod
    def grevlex(cls, n: int, weights: Sequence[int] | None = None) -> "TermOrder":
        return cls("grevlex", n, (), tuple(weights) if weights is not None else None)

    @classmethod
    def lex(cls, n: int) -> "TermOrder":
        return cls("lex", n)

    @classmethod
    def block(cls, sizes: Sequence[int], inner: Sequence[str] | None = None) -> "TermOrder":
        inner = list(inner) if inner is not None else ["grevlex"] * len(sizes)
        return cls("block", sum(sizes), tuple(zip(sizes, inner)))

    @classmethod
    def elimination(cls, first: int, n: int) -> "TermOrder":
        """Block order with the first ``first`` variables (grevlex) above the rest (grevlex)."""
        if first <= 0 or first >= n:
            raise ValueError("elimination block must be a proper nonempty prefix")
        return cls.block([first, n - first])

    def block_list(self) -> list[tuple[int, str]]:
        if self.kind == "block":
            return list(self.blocks)
        return [(self.nvars, self.kind)]

    def describe(self) -> dict:
        d: dict = {"kind": self.kind, "nvars": self.nvars}
        if self.kind == "block":
            d["blocks"] = [[s, k] for s, k in self.blocks]
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_description(cls, d: dict) -> "TermOrder":
        kind = d["kind"]
        if kind == "block":
            return cls("block", d["nvars"], tuple((int(s), str(k)) for s, k in d["blocks"]))
        w = d.get("weights")
        return cls(kind, d["nvars"], (), tuple(w) if w is not None else None)


@dataclass
class MonomialCodec:
    """Packs exponent tuples into order-compatible integers."""

    order: TermOrder
    # per variable: (bit position, reversed?)
    slots: list = field(init=False)
    # per graded block: (bit position of degree field, [(var index, weight)])
    deg_fields: list = field(init=False)
    offset: int = field(init=False)
    revmask: int = field(init=False)
    lexmask: int = field(init=False)
    guard: int = field(init=False)
    _dec: dict = field(init=False, repr=False)

    def __post_init__(self):
        n = self.order.nvars
        w = self.order.weights or (1,) * n
        slots: list = [None] * n
        deg_fields = []
        pos = 0
        blocks = []
        s = 0
        for size, inner in self.order.block_list():
            blocks.append((s, size, inner))
            s += size
        revmask = lexmask = guard = 0
        # least significant block first
        for first, size, inner in reversed(blocks):
            if inner == "grevlex":
                for k in range(size):
                    v = first + k
                    slots[v] = (pos, True)
                    revmask |= MAXE << pos
                    guard |= GUARD_BIT << pos
                    pos += FIELD
                deg_fields.append((pos, [(first + k, w[first + k]) for k in range(size)]))
                pos += DEG_FIELD
            else:
                for k in reversed(range(size)):
                    v = first + k
                    slots[v] = (pos, False)
                    lexmask |= MAXE << pos
                    guard |= GUARD_BIT << pos
                    pos += FIELD
        self.slots = slots
        self.deg_fields = deg_fields
        self.offset = revmask
        self.revmask = revmask
        self.lexmask = lexmask
        self.guard = guard
        self.nbits = pos
        self._dec = {}

    def encode(self, e: Sequence[int]) -> int:
        k = 0
        for (pos, rev), x in zip(self.slots, e):
            if x >= GUARD_BIT:
                raise OverflowError("exponent too large for the packed encoding")
            k |= ((MAXE - x) if rev else x) << pos
        for pos, vw in self.deg_fields:
            k |= sum(e[v] * wt for v, wt in vw) << pos
        return k

    def decode(self, k: int) -> tuple:
        e = self._dec.get(k)
        if e is None:
            out = []
            for pos, rev in self.slots:
                x = (k >> pos) & MAXE
                out.append(MAXE - x if rev else x)
            e = self._dec[k] = tuple(out)
        return e

    def expmask(self, k: int) -> int:
        """Exponent slots of ``k`` as plain non-negative fields (for divisibility)."""
        return ((k & self.revmask) ^ self.revmask) | (k & self.lexmask)

    def divides(self, ea: int, eb: int) -> bool:
        """True iff the monomial with exponent mask ``ea`` divides ``eb``."""
        g = self.guard
        return ((eb | g) - ea) & g == g

    def mul(self, ka: int, kb: int) -> int:
        return ka + kb - self.offset

    def quo(self, ka: int, kb: int) -> int:
        return ka - kb + self.offset

    def lcm(self, ka: int, kb: int) -> int:
        a, b = self.decode(ka), self.decode(kb)
        return self.encode([x if x > y else y for x, y in zip(a, b)])

    def coprime(self, ka: int, kb: int) -> bool:
        if self.expmask(ka) & self.expmask(kb):
            return False
        return not any(x and y for x, y in zip(self.decode(ka), self.decode(kb)))

    def degree(self, k: int) -> int:
        """Weighted total degree (plain total degree when unweighted)."""
        w = self.order.weights
        e = self.decode(k)
        return sum(e) if w is None else sum(x * y for x, y in zip(e, w))

    def one(self) -> int:
        return self.encode([0] * self.order.nvars)
