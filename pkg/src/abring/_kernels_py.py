"""Vectorised numpy implementations of the composition-table kernels.

Every function takes a :class:`abring.kernels.CompositionTable` ``t``.
Morphisms are global integer ids; the composite ``g o f`` with
``f: a -> b`` and ``g: b -> c`` lives at::

    t.table[t.boff[(a*n + b)*n + c] + t.loc[g]*t.nhom[a*n + b] + t.loc[f]]

and is ``-1`` when missing.  Kernels other than the composition gather
assume a gap-free, well-typed table.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 22


def _block(t, a, b, c):
    n = t.nobj
    rows, cols = t.nhom[b * n + c], t.nhom[a * n + b]
    start = t.boff[(a * n + b) * n + c]
    return t.table[start:start + rows * cols].reshape(rows, cols)


def _hom(t, a, b):
    k = a * t.nobj + b
    return t.homids[t.homptr[k]:t.homptr[k + 1]]


def compose_many(t, g, f):
    g = np.asarray(g, dtype=np.int64)
    f = np.asarray(f, dtype=np.int64)
    n = t.nobj
    a, b, c = t.src[f].astype(np.int64), t.dst[f].astype(np.int64), t.dst[g].astype(np.int64)
    idx = t.boff[(a * n + b) * n + c] + t.loc[g] * t.nhom[a * n + b] + t.loc[f]
    return t.table[idx].astype(np.int64)


def assoc_exhaustive(t):
    n = t.nobj
    loc = t.loc
    for a in range(n):
        for b in range(n):
            if not t.nhom[a * n + b]:
                continue
            for c in range(n):
                if not t.nhom[b * n + c]:
                    continue
                gf = _block(t, a, b, c)
                for d in range(n):
                    ncd = t.nhom[c * n + d]
                    if not ncd:
                        continue
                    hg = _block(t, b, c, d)
                    left_tab = _block(t, a, c, d)
                    right_tab = _block(t, a, b, d)
                    gf_loc = loc[gf]
                    step = max(1, _CHUNK // max(1, gf.size))
                    for h0 in range(0, ncd, step):
                        hs = slice(h0, min(ncd, h0 + step))
                        left = left_tab[hs][:, gf_loc]
                        right = right_tab[loc[hg[hs]], :]
                        bad = np.argwhere(left != right)
                        if bad.size:
                            hi, gi, fi = (int(x) for x in bad[0])
                            return (int(_hom(t, c, d)[h0 + hi]),
                                    int(_hom(t, b, c)[gi]),
                                    int(_hom(t, a, b)[fi]))
    return None


def assoc_sampled(t, f, g, h):
    gf = compose_many(t, g, f)
    hg = compose_many(t, h, g)
    left = compose_many(t, h, gf)
    right = compose_many(t, hg, f)
    bad = np.flatnonzero(left != right)
    return int(bad[0]) if bad.size else -1


def epi_flags(t):
    """``flags[f] = 1`` iff ``g -> g o f`` is injective on every hom-set out of ``dst f``."""
    n = t.nobj
    flags = np.ones(len(t.src), dtype=np.uint8)
    for a in range(n):
        for b in range(n):
            if not t.nhom[a * n + b]:
                continue
            fs = _hom(t, a, b)
            for c in range(n):
                if t.nhom[b * n + c] < 2:
                    continue
                s = np.sort(_block(t, a, b, c), axis=0)
                dup = (s[1:] == s[:-1]).any(axis=0)
                flags[fs[dup]] = 0
    return flags


def mono_flags(t):
    n = t.nobj
    flags = np.ones(len(t.src), dtype=np.uint8)
    for a in range(n):
        for b in range(n):
            if not t.nhom[a * n + b]:
                continue
            fs = _hom(t, a, b)
            for z in range(n):
                if t.nhom[z * n + a] < 2:
                    continue
                s = np.sort(_block(t, z, a, b), axis=1)
                dup = (s[:, 1:] == s[:, :-1]).any(axis=1)
                flags[fs[dup]] = 0
    return flags


def factor_counts(t, emask, mmask):
    """Count pairs ``(e, m)`` with ``m o e = h``, ``e`` in E and ``m`` in M.

    Returns ``(counts, middle)`` where ``middle[h]`` is the middle object of
    every counted factorization of ``h``, ``-1`` if there is none and ``-2``
    if they pass through more than one object.
    """
    n = t.nobj
    total = len(t.src)
    emask = np.asarray(emask, dtype=bool)
    mmask = np.asarray(mmask, dtype=bool)
    counts = np.zeros(total, dtype=np.int64)
    middle = np.full(total, -1, dtype=np.int32)
    for a in range(n):
        for b in range(n):
            if not t.nhom[a * n + b]:
                continue
            es = emask[_hom(t, a, b)]
            if not es.any():
                continue
            for c in range(n):
                if not t.nhom[b * n + c]:
                    continue
                ms = mmask[_hom(t, b, c)]
                if not ms.any():
                    continue
                hs = _block(t, a, b, c)[np.ix_(ms, es)].ravel()
                counts += np.bincount(hs, minlength=total)
                hit = np.unique(hs)
                prev = middle[hit]
                middle[hit] = np.where(prev == -1, b, np.where(prev == b, b, -2))
    return counts, middle


def closure_violation(t, mask):
    """First pair ``(g, f)`` with both in ``mask`` but ``g o f`` outside it."""
    n = t.nobj
    mask = np.asarray(mask, dtype=bool)
    for a in range(n):
        for b in range(n):
            if not t.nhom[a * n + b]:
                continue
            fsel = mask[_hom(t, a, b)]
            if not fsel.any():
                continue
            for c in range(n):
                if not t.nhom[b * n + c]:
                    continue
                gsel = mask[_hom(t, b, c)]
                if not gsel.any():
                    continue
                sub = _block(t, a, b, c)[np.ix_(gsel, fsel)]
                bad = np.argwhere(~mask[sub])
                if bad.size:
                    gi, fi = bad[0]
                    return (int(_hom(t, b, c)[gsel][gi]), int(_hom(t, a, b)[fsel][fi]))
    return None
