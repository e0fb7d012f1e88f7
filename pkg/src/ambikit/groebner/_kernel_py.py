"""Pure-Python reduction kernel.

Polynomials are pairs ``(keys, coeffs)`` with keys strictly decreasing in
the term order.  Basis entries are monic and stored as
``(lead_key, lead_mask, tail_keys, tail_coeffs)``.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush

CHECK_EVERY = 4096


def find_reducer(mask, leads, start, guard):
    """Index of the first lead mask dividing ``mask`` at or after ``start``, else -1."""
    for i in range(start, len(leads)):
        if ((mask | guard) - leads[i]) & guard == guard:
            return i
    return -1


def reduce_poly(keys, coeffs, basis, leads, revmask, lexmask, guard, offset, full, cache, check):
    """Reduce ``(keys, coeffs)`` modulo the monic ``basis``.

    With ``full`` false only leading terms are reduced (top reduction).
    ``cache`` maps a monomial key to a reducer index, or to ``-(L + 1)``
    when none of the first ``L`` basis entries divides it.
    """
    acc = dict(zip(keys, coeffs))
    heap = [-k for k in keys]
    heapify(heap)
    out_k = []
    out_c = []
    nb = len(leads)
    steps = 0
    while heap:
        k = -heappop(heap)
        c = acc.pop(k, None)
        if c is None:
            continue
        steps += 1
        if steps % CHECK_EVERY == 0 and check is not None:
            check()
        r = cache.get(k)
        if r is None or r < 0:
            start = 0 if r is None else -r - 1
            if start < nb:
                m = ((k & revmask) ^ revmask) | (k & lexmask)
                r = find_reducer(m, leads, start, guard)
                cache[k] = r if r >= 0 else -nb - 1
            else:
                r = -1
        if r < 0:
            out_k.append(k)
            out_c.append(c)
            if not full:
                # the rest is already reduced at the top; flush in order
                rest = sorted(acc.items(), reverse=True)
                out_k.extend(x for x, _ in rest)
                out_c.extend(y for _, y in rest)
                return out_k, out_c
            continue
        _, _, tk, tc = basis[r]
        shift = k - basis[r][0]
        for kk, cc in zip(tk, tc):
            kk += shift
            v = acc.get(kk)
            if v is None:
                acc[kk] = -c * cc
                heappush(heap, -kk)
            else:
                v -= c * cc
                if v:
                    acc[kk] = v
                else:
                    del acc[kk]
    return out_k, out_c
