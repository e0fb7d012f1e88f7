"""Buchberger's algorithm on packed monomials with exact rational coefficients.

Pairs are pruned with the Gebauer-Moeller installation of Buchberger's
two criteria and selected either by the normal strategy (least lcm in the
term order) or by sugar degree.
"""

from __future__ import annotations

import threading
import time
from heapq import heappop, heappush

from gmpy2 import mpq

from . import kernel as _kernel_mod
from .order import MonomialCodec


class DeadlineExceeded(RuntimeError):
    """A cooperative deadline or cancellation token fired."""


class Deadline:
    """Wall-clock deadline plus optional cancellation event."""

    def __init__(self, seconds: float | None = None, token: threading.Event | None = None):
        self.end = None if seconds is None else time.monotonic() + float(seconds)
        self.token = token

    def expired(self) -> bool:
        if self.token is not None and self.token.is_set():
            return True
        return self.end is not None and time.monotonic() > self.end

    def check(self) -> None:
        if self.expired():
            raise DeadlineExceeded("computation cancelled by deadline")


class Engine:
    """One Buchberger run over a fixed :class:`MonomialCodec`."""

    def __init__(self, codec: MonomialCodec, deadline: Deadline | None = None,
                 strategy: str = "normal", kernel=None):
        if strategy not in ("normal", "sugar"):
            raise ValueError(f"unknown selection strategy {strategy!r}")
        self.codec = codec
        self.deadline = deadline
        self.strategy = strategy
        self.kernel = kernel or _kernel_mod
        self.basis: list = []  # (lead_key, lead_mask, tail_keys, tail_coeffs)
        self.leads: list[int] = []
        self.sugar: list[int] = []
        self.active: list[int] = []
        self.cache: dict = {}
        self.pairs: list = []  # heap of [selkey, i, j, lcm, alive]
        self.pair_list: list = []
        self.stats = {"pairs": 0, "zero": 0, "pruned": 0}

    # -- helpers ---------------------------------------------------------
    def _check(self):
        if self.deadline is not None:
            self.deadline.check()

    def reduce(self, keys, coeffs, full=True):
        c = self.codec
        return self.kernel.reduce_poly(
            keys, coeffs, self.basis, self.leads, c.revmask, c.lexmask, c.guard, c.offset,
            full, self.cache, self._check if self.deadline is not None else None,
        )

    def _poly_sugar(self, keys) -> int:
        deg = self.codec.degree
        return max(deg(k) for k in keys)

    def _add(self, keys, coeffs, sugar) -> int:
        inv = 1 / coeffs[0]
        if inv != 1:
            coeffs = [x * inv for x in coeffs]
        lk = keys[0]
        idx = len(self.basis)
        self.basis.append((lk, self.codec.expmask(lk), keys[1:], coeffs[1:]))
        self.leads.append(self.codec.expmask(lk))
        self.sugar.append(sugar)
        self._update(idx)
        return idx

    def _selkey(self, i, j, lcm):
        if self.strategy == "sugar":
            c = self.codec
            d = c.degree(lcm)
            s = max(self.sugar[i] + d - c.degree(self.basis[i][0]), self.sugar[j] + d - c.degree(self.basis[j][0]))
            return (s, lcm, i, j)
        return (lcm, i, j)

    def _update(self, h):
        c = self.codec
        lh = self.basis[h][0]
        mh = self.leads[h]
        divides = c.divides
        cands = []
        for g in self.active:
            lg = self.basis[g][0]
            L = c.lcm(lh, lg)
            cands.append((L, c.expmask(L), g, c.coprime(lh, lg)))
        kept = []
        for idx, (L, mL, g, cop) in enumerate(cands):
            if cop:
                kept.append((L, mL, g, cop))
                continue
            dominated = False
            for L2, m2, _, _ in cands[idx + 1:]:
                if divides(m2, mL):
                    dominated = True
                    break
            if not dominated:
                for L2, m2, _, _ in kept:
                    if divides(m2, mL):
                        dominated = True
                        break
            if not dominated:
                kept.append((L, mL, g, cop))
        # prune old pairs: lead(h) | lcm(g1, g2) with distinct lcms
        pruned = 0
        lcm_h = {}
        for entry in self.pair_list:
            if not entry[4]:
                continue
            _, i, j, L, _ = entry
            mL = c.expmask(L)
            if divides(mh, mL):
                li = lcm_h.get(i)
                if li is None:
                    li = lcm_h[i] = c.lcm(self.basis[i][0], lh)
                lj = lcm_h.get(j)
                if lj is None:
                    lj = lcm_h[j] = c.lcm(self.basis[j][0], lh)
                if li != L and lj != L:
                    entry[4] = False
                    pruned += 1
        self.stats["pruned"] += pruned + sum(1 for x in kept if x[3]) + len(cands) - len(kept)
        if pruned > 64 and pruned * 2 > len(self.pair_list):
            self.pair_list = [e for e in self.pair_list if e[4]]
        for L, mL, g, cop in kept:
            if cop:
                continue
            i, j = (g, h) if g < h else (h, g)
            entry = [self._selkey(i, j, L), i, j, L, True]
            heappush(self.pairs, entry)
            self.pair_list.append(entry)
        self.active = [g for g in self.active if not divides(mh, self.leads[g])] + [h]

    def _spoly(self, i, j, L):
        bi, bj = self.basis[i], self.basis[j]
        si = L - bi[0]
        sj = L - bj[0]
        acc = {}
        for k, v in zip(bi[2], bi[3]):
            acc[k + si] = v
        for k, v in zip(bj[2], bj[3]):
            kk = k + sj
            w = acc.get(kk)
            if w is None:
                acc[kk] = -v
            else:
                w -= v
                if w:
                    acc[kk] = w
                else:
                    del acc[kk]
        if not acc:
            return [], []
        items = sorted(acc.items(), reverse=True)
        return [k for k, _ in items], [v for _, v in items]

    # -- main loop -------------------------------------------------------
    def run(self, polys) -> list[int]:
        """Compute a Groebner basis of the given ``(keys, coeffs)`` list; return active indices."""
        order = sorted((p for p in polys if p[0]), key=lambda p: p[0][0])
        for keys, coeffs in order:
            self._check()
            sug = self._poly_sugar(keys)
            keys, coeffs = self.reduce(keys, coeffs, True)
            if keys:
                self._add(keys, coeffs, sug)
        while self.pairs:
            entry = heappop(self.pairs)
            if not entry[4]:
                continue
            entry[4] = False
            self._check()
            _, i, j, L, _ = entry
            self.stats["pairs"] += 1
            keys, coeffs = self._spoly(i, j, L)
            if not keys:
                self.stats["zero"] += 1
                continue
            sug = entry[0][0] if self.strategy == "sugar" else self._poly_sugar(keys)
            keys, coeffs = self.reduce(keys, coeffs, True)
            if not keys:
                self.stats["zero"] += 1
                continue
            self._add(keys, coeffs, sug)
        return list(self.active)

    def reduced_basis(self, active: list[int]) -> list:
        """Inter-reduced monic basis from the active indices, ascending by lead."""
        out = []
        for g in sorted(active, key=lambda g: self.basis[g][0]):
            self._check()
            lk, _, tk, tc = self.basis[g]
            rk, rc = self.reduce(list(tk), list(tc), True)
            out.append(([lk] + rk, [mpq(1)] + rc))
        return out
