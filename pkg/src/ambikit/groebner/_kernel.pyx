# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reduction kernel; same contract as ``_kernel_py``."""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem, PyDict_DelItem
from cpython.list cimport PyList_GET_ITEM, PyList_GET_SIZE
from cpython.ref cimport PyObject
from heapq import heapify, heappop, heappush

DEF CHECK_EVERY = 4096


cpdef Py_ssize_t find_reducer(object mask, list leads, Py_ssize_t start, object guard):
    cdef Py_ssize_t i, n = PyList_GET_SIZE(leads)
    cdef object mg = mask | guard
    for i in range(start, n):
        if (mg - <object>PyList_GET_ITEM(leads, i)) & guard == guard:
            return i
    return -1


def reduce_poly(list keys, list coeffs, list basis, list leads, object revmask, object lexmask,
                object guard, object offset, bint full, dict cache, object check):
    cdef dict acc = dict(zip(keys, coeffs))
    cdef list heap = [-k for k in keys]
    cdef list out_k = []
    cdef list out_c = []
    cdef Py_ssize_t nb = PyList_GET_SIZE(leads)
    cdef Py_ssize_t r, start, steps = 0, t, nt
    cdef object k, c, kk, v, shift, m, entry, rest
    cdef PyObject* hit
    cdef list tk, tc
    heapify(heap)
    while heap:
        k = -heappop(heap)
        hit = PyDict_GetItem(acc, k)
        if hit is NULL:
            continue
        c = <object>hit
        PyDict_DelItem(acc, k)
        steps += 1
        if steps % CHECK_EVERY == 0 and check is not None:
            check()
        hit = PyDict_GetItem(cache, k)
        if hit is NULL:
            r = -1
            start = 0
        else:
            r = <Py_ssize_t>(<object>hit)
            start = -r - 1 if r < 0 else 0
        if r < 0:
            if start < nb:
                m = ((k & revmask) ^ revmask) | (k & lexmask)
                r = find_reducer(m, leads, start, guard)
                PyDict_SetItem(cache, k, r if r >= 0 else -nb - 1)
            else:
                r = -1
        if r < 0:
            out_k.append(k)
            out_c.append(c)
            if not full:
                rest = sorted(acc.items(), reverse=True)
                out_k.extend([x for x, _ in rest])
                out_c.extend([y for _, y in rest])
                return out_k, out_c
            continue
        entry = <object>PyList_GET_ITEM(basis, r)
        shift = k - entry[0]
        tk = entry[2]
        tc = entry[3]
        nt = PyList_GET_SIZE(tk)
        for t in range(nt):
            kk = <object>PyList_GET_ITEM(tk, t) + shift
            hit = PyDict_GetItem(acc, kk)
            if hit is NULL:
                PyDict_SetItem(acc, kk, -c * <object>PyList_GET_ITEM(tc, t))
                heappush(heap, -kk)
            else:
                v = <object>hit - c * <object>PyList_GET_ITEM(tc, t)
                if v:
                    PyDict_SetItem(acc, kk, v)
                else:
                    PyDict_DelItem(acc, kk)
    return out_k, out_c
