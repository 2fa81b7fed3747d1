"""Compiled batch encoder used by the census counter.

It reproduces, word for word, the canonical code of the map built by
``maps.from_edge_ids`` (root on half-edge 0 of triangle 0) and reduces
each code to a 128-bit fingerprint made of two independent 64-bit hashes.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xC2B2AE3D27D4EB4F)


@njit(cache=True)
def _mix(h, w, mul):
    h = (h ^ w) * mul
    h ^= h >> np.uint64(29)
    return h


@njit(cache=True)
def code_words(tris, eids, max_edge, ext_flag=1):
    """Canonical code words of one triangulation (uint32 sequence).

    With ``ext_flag = 0`` the boundary face is treated as an ordinary face,
    which gives the code of the sphere obtained by closing a triangle
    boundary.
    """
    T = tris.shape[0]
    n_int = 3 * T
    slot = np.full(max_edge + 1, -1, np.int64)
    twin = np.full(2 * n_int, -1, np.int64)
    for t in range(T):
        for i in range(3):
            e = eids[t, i]
            h = 3 * t + i
            if slot[e] >= 0:
                twin[h] = slot[e]
                twin[slot[e]] = h
                slot[e] = -1
            else:
                slot[e] = h
    n = n_int
    ext_of = np.full(n_int, -1, np.int64)
    for h in range(n_int):
        if twin[h] < 0:
            ext_of[h] = n
            twin[n] = h
            twin[h] = n
            n += 1
    nxt = np.empty(n, np.int64)
    flag = np.zeros(n, np.int64)
    for h in range(n_int):
        nxt[h] = 3 * (h // 3) + (h % 3 + 1) % 3
    for h in range(n_int):
        x = ext_of[h]
        if x >= 0:
            flag[x] = ext_flag
            g = 3 * (h // 3) + (h % 3 + 2) % 3
            while ext_of[g] < 0:
                tw = twin[g]
                g = 3 * (tw // 3) + (tw % 3 + 2) % 3
            nxt[x] = ext_of[g]
    lab = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    lab[0] = 0
    order[0] = 0
    cnt = 1
    i = 0
    while i < cnt:
        h = order[i]
        i += 1
        x = nxt[h]
        if lab[x] < 0:
            lab[x] = cnt
            order[cnt] = x
            cnt += 1
        x = twin[h]
        if lab[x] < 0:
            lab[x] = cnt
            order[cnt] = x
            cnt += 1
    out = np.empty(1 + 3 * n, np.uint32)
    out[0] = n
    for k in range(n):
        h = order[k]
        out[1 + 3 * k] = lab[nxt[h]]
        out[2 + 3 * k] = lab[twin[h]]
        out[3 + 3 * k] = flag[h]
    return out


@njit(cache=True)
def batch_fingerprints(tris, eids, max_edge, ext_flag=1):
    """(B, 2) uint64 fingerprints for a batch of same-size triangulations."""
    B = tris.shape[0]
    out = np.empty((B, 2), np.uint64)
    for b in range(B):
        w = code_words(tris[b], eids[b], max_edge, ext_flag)
        h1 = np.uint64(0x243F6A8885A308D3)
        h2 = np.uint64(0x13198A2E03707344)
        for k in range(w.shape[0]):
            x = np.uint64(w[k]) + np.uint64(k)
            h1 = _mix(h1, x, _M1)
            h2 = _mix(h2, x, _M2)
        out[b, 0] = h1
        out[b, 1] = h2
    return out
