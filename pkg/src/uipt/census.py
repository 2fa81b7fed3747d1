"""Exhaustive generation of rooted polygon triangulations.

Generation follows the root-edge decomposition: the triangle on the root
edge either has a new internal vertex as apex (the polygon grows by one
side) or a boundary vertex, which splits off two smaller polygons.  A
2-gon with no internal vertex is glued shut.  Each triangulation is
produced exactly once; canonical codes are still compared so the count is
an independent check.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np

from .exact import TriType, DomainError
from .maps import RootedMap, canonical_code, code_digest, from_edge_ids, glued_digon, \
    close_boundary, validate

__all__ = ["CENSUS_BOUND", "generate", "brute_force_census", "census_count",
           "sphere_census", "sphere_census_count"]

CENSUS_BOUND = 8


def _gen(vs, es, n, nv, ne, simple):
    """Yield (tris, eids, nv, ne) for the polygon (vs, es) with n inner vertices.

    tris/eids are tuples of triangles added inside this polygon.  ``simple``
    forbids non-empty 2-gons (they always create a double edge).
    """
    L = len(vs)
    v0, v1 = vs[0], vs[1]
    if n > 0:
        w = nv
        e1, e2 = ne, ne + 1
        tri = ((v0, v1, w),)
        eid = ((es[0], e1, e2),)
        for t2, i2, nv2, ne2 in _gen((w,) + vs[1:] + (v0,), (e1,) + es[1:] + (e2,),
                                     n - 1, nv + 1, ne + 2, simple):
            yield tri + t2, eid + i2, nv2, ne2
    for j in range(2, L):
        a = vs[j]
        sub1v, sub1e = vs[1:j + 1], es[1:j]
        sub2v, sub2e = vs[j:] + (v0,), es[j:]
        for n1 in range(n + 1):
            n2 = n - n1
            if simple and ((len(sub1v) == 2 and n1) or (len(sub2v) == 2 and n2)):
                continue
            for t1, i1, c1, nva, nea in _chord(sub1v, sub1e, n1, nv, ne, simple):
                for t2, i2, c2, nvb, neb in _chord(sub2v, sub2e, n2, nva, nea, simple):
                    yield (((v0, v1, a),) + t1 + t2, ((es[0], c1, c2),) + i1 + i2,
                           nvb, neb)


def _chord(vs, es, n, nv, ne, simple):
    """Sub-polygon closed by a chord vs[-1] -> vs[0]; yields its chord id too."""
    if len(vs) == 2 and n == 0:
        yield (), (), es[0], nv, ne
        return
    c = ne
    for t, i, nv2, ne2 in _gen(vs, es + (c,), n, nv, ne + 1, simple):
        yield t, i, c, nv2, ne2


def generate(t, n: int, m: int, bound: int = CENSUS_BOUND) -> Iterator[RootedMap]:
    """All rooted triangulations of the (m+2)-gon with n internal vertices."""
    t = TriType.parse(t)
    if n < 0 or m < 0 or (t is TriType.TypeIII and m < 1):
        raise DomainError("invalid (n, m) for this type")
    if n + 2 * m > bound:
        raise DomainError(f"n + 2m = {n + 2 * m} exceeds the census bound {bound}")
    if n == 0 and m == 0:
        yield glued_digon()
        return
    L = m + 2
    vs = tuple(range(L))
    es = tuple(range(L))
    simple = t is TriType.TypeIII
    for tris, eids, _, _ in _gen(vs, es, n, L, L, simple):
        if simple and not _simple_graph(tris, eids):
            continue
        yield from_edge_ids(tris, eids)


def _simple_graph(tris, eids) -> bool:
    seen = {}
    for tri, es in zip(tris, eids):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            key = (a, b) if a < b else (b, a)
            e = es[i]
            old = seen.setdefault(key, e)
            if old != e:
                return False
    return True


def brute_force_census(t, n: int, m: int, bound: int = CENSUS_BOUND) -> list:
    """Distinct maps (by canonical code), in generation order."""
    out = {}
    for mp in generate(t, n, m, bound):
        out.setdefault(canonical_code(mp), mp)
    return list(out.values())


def _raw(t, n, m, bound):
    t = TriType.parse(t)
    if n < 0 or m < 0 or (t is TriType.TypeIII and m < 1):
        raise DomainError("invalid (n, m) for this type")
    if n + 2 * m > bound:
        raise DomainError(f"n + 2m = {n + 2 * m} exceeds the census bound {bound}")
    L = m + 2
    simple = t is TriType.TypeIII
    for tris, eids, _, ne in _gen(tuple(range(L)), tuple(range(L)), n, L, L, simple):
        if simple and not _simple_graph(tris, eids):
            continue
        yield tris, eids, ne


def census_count(t, n: int, m: int, bound: int = CENSUS_BOUND, batch: int = 8192,
                 closed: bool = False) -> int:
    """Number of distinct canonical codes.

    Codes are reduced to 128-bit fingerprints by a compiled encoder that
    emits the same words as :func:`canonical_code`; no maps are kept.
    ``closed`` counts the spheres obtained by closing a triangle boundary.
    """
    from ._fastcode import batch_fingerprints

    if n == 0 and m == 0:
        _raw(t, n, m, bound)  # domain checks only
        return 1
    T = 2 * n + m
    max_edge = 3 * T + m + 2
    prints = []
    tris_buf, eids_buf = [], []

    def flush():
        if tris_buf:
            a = np.asarray(tris_buf, dtype=np.int64).reshape(-1, T, 3)
            b = np.asarray(eids_buf, dtype=np.int64).reshape(-1, T, 3)
            prints.append(batch_fingerprints(a, b, max_edge, 0 if closed else 1))
            tris_buf.clear()
            eids_buf.clear()

    for tris, eids, _ in _raw(t, n, m, bound):
        tris_buf.append(tris)
        eids_buf.append(eids)
        if len(tris_buf) >= batch:
            flush()
    flush()
    if not prints:
        return 0
    allp = np.concatenate(prints)
    return int(np.unique(allp, axis=0).shape[0])


def sphere_census(t, n_vertices: int, bound: int = CENSUS_BOUND + 3) -> list:
    """Rooted sphere triangulations with the given vertex count."""
    if n_vertices < 3:
        raise DomainError("a sphere triangulation has at least 3 vertices")
    out = {}
    for mp in generate(t, n_vertices - 3, 1, bound):
        s = close_boundary(mp)
        out.setdefault(canonical_code(s), s)
    return list(out.values())


def sphere_census_count(t, n_vertices: int, bound: int = CENSUS_BOUND + 3) -> int:
    """Distinct rooted spheres with the given vertex count (compiled path)."""
    if n_vertices < 3:
        raise DomainError("a sphere triangulation has at least 3 vertices")
    return census_count(t, n_vertices - 3, 1, bound, closed=True)
