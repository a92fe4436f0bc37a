# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled composition-table kernels.

Same contract as :mod:`abring._kernels_py`; see that module for the table
layout.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t

cnp.import_array()


cdef inline int64_t _comp(const int32_t[::1] table, const int64_t[::1] boff,
                          const int64_t[::1] nhom, const int32_t[::1] loc,
                          const int32_t[::1] src, const int32_t[::1] dst,
                          int64_t n, int64_t g, int64_t f) nogil:
    cdef int64_t a = src[f], b = dst[f], c = dst[g]
    return table[boff[(a * n + b) * n + c] + loc[g] * nhom[a * n + b] + loc[f]]


def compose_many(t, g, f):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef const int64_t[::1] gv = np.ascontiguousarray(g, dtype=np.int64)
    cdef const int64_t[::1] fv = np.ascontiguousarray(f, dtype=np.int64)
    cdef Py_ssize_t i, m = gv.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef int64_t n = t.nobj
    with nogil:
        for i in range(m):
            ov[i] = _comp(table, boff, nhom, loc, src, dst, n, gv[i], fv[i])
    return out


def assoc_exhaustive(t):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int64_t[::1] homptr = t.homptr
    cdef const int32_t[::1] homids = t.homids
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef int64_t n = t.nobj
    cdef int64_t a, b, c, d, i, j, k, f, g, h, gf, hg
    cdef int64_t bad_h = -1, bad_g = -1, bad_f = -1
    with nogil:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if nhom[a * n + b] == 0 or nhom[b * n + c] == 0:
                        continue
                    for d in range(n):
                        if nhom[c * n + d] == 0:
                            continue
                        # (h, g, f) order, matching the numpy fallback
                        for k in range(homptr[c * n + d], homptr[c * n + d + 1]):
                            h = homids[k]
                            for j in range(homptr[b * n + c], homptr[b * n + c + 1]):
                                g = homids[j]
                                hg = _comp(table, boff, nhom, loc, src, dst, n, h, g)
                                for i in range(homptr[a * n + b], homptr[a * n + b + 1]):
                                    f = homids[i]
                                    gf = _comp(table, boff, nhom, loc, src, dst, n, g, f)
                                    if (_comp(table, boff, nhom, loc, src, dst, n, h, gf)
                                            != _comp(table, boff, nhom, loc, src, dst, n, hg, f)):
                                        bad_h, bad_g, bad_f = h, g, f
                                        break
                                if bad_h >= 0:
                                    break
                            if bad_h >= 0:
                                break
                        if bad_h >= 0:
                            break
                    if bad_h >= 0:
                        break
                if bad_h >= 0:
                    break
            if bad_h >= 0:
                break
    if bad_h >= 0:
        return (int(bad_h), int(bad_g), int(bad_f))
    return None


def assoc_sampled(t, f, g, h):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef const int64_t[::1] fv = np.ascontiguousarray(f, dtype=np.int64)
    cdef const int64_t[::1] gv = np.ascontiguousarray(g, dtype=np.int64)
    cdef const int64_t[::1] hv = np.ascontiguousarray(h, dtype=np.int64)
    cdef int64_t n = t.nobj
    cdef Py_ssize_t i, m = fv.shape[0]
    cdef int64_t gf, hg, bad = -1
    with nogil:
        for i in range(m):
            gf = _comp(table, boff, nhom, loc, src, dst, n, gv[i], fv[i])
            hg = _comp(table, boff, nhom, loc, src, dst, n, hv[i], gv[i])
            if (_comp(table, boff, nhom, loc, src, dst, n, hv[i], gf)
                    != _comp(table, boff, nhom, loc, src, dst, n, hg, fv[i])):
                bad = i
                break
    return int(bad)


def epi_flags(t):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int64_t[::1] homptr = t.homptr
    cdef const int32_t[::1] homids = t.homids
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef int64_t n = t.nobj
    cdef Py_ssize_t total = src.shape[0]
    flags = np.ones(total, dtype=np.uint8)
    cdef uint8_t[::1] fl = flags
    # stamp[x] == f + 1 marks composite x as already hit while scanning f
    stamp_arr = np.zeros(total, dtype=np.int64)
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t a, b, c, i, j, f, x, tag = 0
    with nogil:
        for a in range(n):
            for b in range(n):
                for i in range(homptr[a * n + b], homptr[a * n + b + 1]):
                    f = homids[i]
                    for c in range(n):
                        if nhom[b * n + c] < 2:
                            continue
                        tag += 1
                        for j in range(homptr[b * n + c], homptr[b * n + c + 1]):
                            x = _comp(table, boff, nhom, loc, src, dst, n, homids[j], f)
                            if stamp[x] == tag:
                                fl[f] = 0
                                break
                            stamp[x] = tag
                        if fl[f] == 0:
                            break
    return flags


def mono_flags(t):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int64_t[::1] homptr = t.homptr
    cdef const int32_t[::1] homids = t.homids
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef int64_t n = t.nobj
    cdef Py_ssize_t total = src.shape[0]
    flags = np.ones(total, dtype=np.uint8)
    cdef uint8_t[::1] fl = flags
    stamp_arr = np.zeros(total, dtype=np.int64)
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t a, b, z, i, j, f, x, tag = 0
    with nogil:
        for a in range(n):
            for b in range(n):
                for i in range(homptr[a * n + b], homptr[a * n + b + 1]):
                    f = homids[i]
                    for z in range(n):
                        if nhom[z * n + a] < 2:
                            continue
                        tag += 1
                        for j in range(homptr[z * n + a], homptr[z * n + a + 1]):
                            x = _comp(table, boff, nhom, loc, src, dst, n, f, homids[j])
                            if stamp[x] == tag:
                                fl[f] = 0
                                break
                            stamp[x] = tag
                        if fl[f] == 0:
                            break
    return flags


def factor_counts(t, emask, mmask):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int64_t[::1] homptr = t.homptr
    cdef const int32_t[::1] homids = t.homids
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef const uint8_t[::1] em = np.ascontiguousarray(emask, dtype=np.uint8)
    cdef const uint8_t[::1] mm = np.ascontiguousarray(mmask, dtype=np.uint8)
    cdef int64_t n = t.nobj
    cdef Py_ssize_t total = src.shape[0]
    counts = np.zeros(total, dtype=np.int64)
    middle = np.full(total, -1, dtype=np.int32)
    cdef int64_t[::1] cv = counts
    cdef int32_t[::1] mv = middle
    cdef int64_t a, b, c, i, j, e, m, h
    with nogil:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for i in range(homptr[a * n + b], homptr[a * n + b + 1]):
                        e = homids[i]
                        if not em[e]:
                            continue
                        for j in range(homptr[b * n + c], homptr[b * n + c + 1]):
                            m = homids[j]
                            if not mm[m]:
                                continue
                            h = _comp(table, boff, nhom, loc, src, dst, n, m, e)
                            cv[h] += 1
                            if mv[h] == -1:
                                mv[h] = <int32_t>b
                            elif mv[h] != b:
                                mv[h] = -2
    return counts, middle


def closure_violation(t, mask):
    cdef const int32_t[::1] table = t.table
    cdef const int64_t[::1] boff = t.boff
    cdef const int64_t[::1] nhom = t.nhom
    cdef const int64_t[::1] homptr = t.homptr
    cdef const int32_t[::1] homids = t.homids
    cdef const int32_t[::1] loc = t.loc
    cdef const int32_t[::1] src = t.src
    cdef const int32_t[::1] dst = t.dst
    cdef const uint8_t[::1] mk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef int64_t n = t.nobj
    cdef int64_t a, b, c, i, j, f, g
    cdef int64_t bad_g = -1, bad_f = -1
    with nogil:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for i in range(homptr[a * n + b], homptr[a * n + b + 1]):
                        f = homids[i]
                        if not mk[f]:
                            continue
                        for j in range(homptr[b * n + c], homptr[b * n + c + 1]):
                            g = homids[j]
                            if mk[g] and not mk[_comp(table, boff, nhom, loc, src, dst, n, g, f)]:
                                bad_g, bad_f = g, f
                                break
                        if bad_g >= 0:
                            break
                    if bad_g >= 0:
                        break
                if bad_g >= 0:
                    break
            if bad_g >= 0:
                break
    if bad_g >= 0:
        return (int(bad_g), int(bad_f))
    return None
