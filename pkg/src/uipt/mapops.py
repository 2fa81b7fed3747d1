"""Balls, re-rooting, rigidity, containment and face trees on rooted maps."""
from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exact import DomainError
from .maps import (RootedMap, MapError, faces, reroot, submap, validate)
from .rng import ExactRng

__all__ = ["ball", "host_triangles", "vertex_distances", "uniform_reroot",
           "rw_reroot", "all_roots", "rigidity_criterion", "contains",
           "FaceTree", "FaceNode", "face_tree", "is_closed"]


def is_closed(m: RootedMap) -> bool:
    return not m.external and not m.is_point


def host_triangles(m: RootedMap):
    """(vertex triples, half-edge triples, twin pairs) of the internal faces."""
    ext = m.external_ids
    orbits = [o for f, o in sorted(faces(m).items()) if f not in ext]
    where = {}
    for t, o in enumerate(orbits):
        if len(o) != 3:
            raise MapError("non-triangle face")
        for i, h in enumerate(o):
            where[h] = (t, i)
    pairs = []
    for h, a in where.items():
        b = where.get(m.twin[h])
        if b is not None and a < b:
            pairs.append((a, b))
    tv = [tuple(m.origin[h] for h in o) for o in orbits]
    return tv, orbits, pairs, where


def vertex_distances(m: RootedMap, source: Optional[int] = None) -> dict:
    """Graph distances from the root vertex (or ``source``)."""
    if m.is_point:
        return {}
    nbr = {}
    for h in range(len(m.twin)):
        nbr.setdefault(m.origin[h], set()).add(m.origin[m.twin[h]])
    s = m.origin[m.root] if source is None else source
    dist = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in nbr[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def ball(m: RootedMap, r: int) -> RootedMap:
    """B_r: for r >= 1 the triangles having a vertex at distance <= r-1.

    The result records its host (``host``) and, for each internal
    half-edge, the host half-edge it came from (``host_ids``; -1 on
    external half-edges).  For a partial host the caller must make sure
    every vertex within distance r of the root is interior.
    """
    if r < 0:
        raise DomainError("r must be >= 0")
    if validate(m) is not None:
        raise MapError(f"invalid map: {validate(m)}")
    if r == 0 or m.is_point:
        return RootedMap((), (), (), -1, host=m, host_ids=())
    tv, orbits, pairs, where = host_triangles(m)
    if m.root not in where:
        raise MapError("root face is not a triangle")
    dist = vertex_distances(m)
    _check_interior(m, dist, r)
    keep = [t for t, vs in enumerate(tv) if min(dist.get(v, r) for v in vs) <= r - 1]
    b = submap(tv, pairs, keep, where[m.root])
    ids = [orbits[keep[h // 3]][h % 3] for h in range(3 * len(keep))]
    ids += [-1] * (len(b.twin) - len(ids))
    return dataclasses.replace(b, host=m, host_ids=tuple(ids))


def _check_interior(m: RootedMap, dist: dict, r: int) -> None:
    if not m.external:
        return
    fid = m.face_of()
    ext = m.external_ids
    for h in range(len(m.twin)):
        if fid[h] in ext and dist.get(m.origin[h], r) <= r - 1:
            raise MapError("insufficient revealed region for this radius")


# -- re-rooting -------------------------------------------------------------------

def all_roots(m: RootedMap) -> list:
    """Every (half-edge, side) root of a closed map: 4E of them."""
    if not is_closed(m):
        raise MapError("re-rooting needs a sphere triangulation")
    return [(h, s) for h in range(len(m.twin)) for s in (0, 1)]


def uniform_reroot(m: RootedMap, rng: ExactRng) -> RootedMap:
    """Same map with a root chosen uniformly among all 4E roots."""
    if not is_closed(m):
        raise MapError("re-rooting needs a sphere triangulation")
    k = rng.randrange(2 * len(m.twin))
    return reroot(m, k >> 1, k & 1)


def rw_reroot(m: RootedMap, rng: ExactRng) -> RootedMap:
    """One random-walk step of the root vertex, then a uniform root there.

    The walk follows a uniform edge end at the root vertex (multi-edges
    counted with multiplicity); the new root is a uniform (corner,
    orientation) pair at the new vertex.
    """
    if not is_closed(m):
        raise MapError("re-rooting needs a sphere triangulation")
    x = m.origin[m.root]
    out = [h for h in range(len(m.twin)) if m.origin[h] == x]
    y = m.origin[m.twin[out[rng.randrange(len(out))]]]
    at_y = [h for h in range(len(m.twin)) if m.origin[h] == y]
    k = rng.randrange(2 * len(at_y))
    return reroot(m, at_y[k >> 1], k & 1)


# -- rigidity and containment -------------------------------------------------------

def rigidity_criterion(m: RootedMap) -> str:
    """'Rigid' when the triangles are connected through shared edges and
    every vertex lies on a triangle, else 'Unknown' (sufficient only)."""
    if m.is_point:
        raise MapError("need at least one triangle")
    tv, orbits, pairs, where = host_triangles(m)
    if not tv:
        raise MapError("need at least one triangle")
    adj = {t: [] for t in range(len(tv))}
    for (a, _), (b, _) in pairs:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    st = [0]
    while st:
        x = st.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                st.append(y)
    if len(seen) != len(tv):
        return "Unknown"
    on_tri = {v for vs in tv for v in vs}
    return "Rigid" if on_tri >= set(m.origin) else "Unknown"


def contains(big: RootedMap, small: RootedMap) -> bool:
    """Whether ``small`` sits in ``big`` around the root.

    The root half-edges are matched; internal triangles of ``small`` must
    map to internal triangles of ``big`` with glued edges glued alike and
    distinct vertices of ``small`` sent to distinct vertices.
    """
    if small.is_point:
        return True
    if big.is_point:
        return False
    sext, bext = small.external_ids, big.external_ids
    sf, bf = small.face_of(), big.face_of()
    if sf[small.root] in sext or bf[big.root] in bext:
        raise MapError("roots must lie on triangles")
    phi = {small.root: big.root}
    vmap = {}
    q = deque([small.root])
    while q:
        h = q.popleft()
        g = phi[h]
        if bf[g] in bext:
            return False
        # the whole triangle of h
        hh, gg = h, g
        for _ in range(3):
            v, w = small.origin[hh], big.origin[gg]
            if vmap.setdefault(v, w) != w:
                return False
            if phi.setdefault(hh, gg) != gg:
                return False
            th = small.twin[hh]
            if sf[th] not in sext:
                tg = big.twin[gg]
                old = phi.get(th)
                if old is None:
                    phi[th] = tg
                    q.append(th)
                elif old != tg:
                    return False
            hh, gg = small.nxt[hh], big.nxt[gg]
    return len(set(vmap.values())) == len(vmap)


# -- face trees -------------------------------------------------------------------

@dataclass
class FaceNode:
    level: int
    face: int                  # external face id in the level's ball (-1 for the root)
    length: int
    resolved: bool
    parent: Optional[int]      # index into FaceTree.nodes
    children: list = field(default_factory=list)


@dataclass
class FaceTree:
    nodes: list

    def level(self, r: int) -> list:
        return [i for i, n in enumerate(self.nodes) if n.level == r]

    def unresolved(self, r: int) -> list:
        return [i for i in self.level(r) if not self.nodes[i].resolved]

    @property
    def depth(self) -> int:
        return max(n.level for n in self.nodes)


def face_tree(balls: Sequence[RootedMap]) -> FaceTree:
    """Tree of the external faces of nested balls B_1..B_r of one host.

    Node (r, f) is an external face of B_r; its parent is the face of
    B_{r-1} whose complementary region contains it (level 0 is a single
    root).  A face is unresolved when its region holds the host's
    unrevealed face.
    """
    if not balls:
        raise DomainError("need at least one ball")
    host = balls[0].host
    for b in balls:
        if b.host is not host or b.host_ids is None:
            raise MapError("balls must come from ball() on one host")
    tv, orbits, pairs, where = host_triangles(host)
    hfid = host.face_of()
    hext = host.external_ids
    nodes = [FaceNode(0, -1, 0, True, None)]
    prev_index = None           # host node -> tree index at the previous level
    prev_keep = None

    def node_of(h):
        f = hfid[h]
        return ("f", f) if f in hext else ("t", where[h][0])

    for level, b in enumerate(balls, start=1):
        kept = {where[x][0] for x in b.host_ids if x >= 0}
        if prev_keep is not None and not prev_keep <= kept:
            raise MapError("balls are not nested")
        # regions outside the ball: outside triangles and host external
        # faces glued along host edges
        par = {("t", t): ("t", t) for t in range(len(tv)) if t not in kept}
        par.update({("f", f): ("f", f) for f in hext})

        def find(x):
            while par[x] != x:
                par[x] = par[par[x]]
                x = par[x]
            return x

        for h in range(len(host.twin)):
            a, c = node_of(h), node_of(host.twin[h])
            if a in par and c in par:
                ra, rc = find(a), find(c)
                if ra != rc:
                    par[ra] = rc
        bfid = b.face_of()
        lens = dict(b.external)
        comp_face = {}
        for h, x in enumerate(b.host_ids):
            if x >= 0 and bfid[b.twin[h]] in lens:
                comp_face.setdefault(find(node_of(host.twin[x])), bfid[b.twin[h]])
        members = {}
        for x in par:
            members.setdefault(find(x), x)
        unr = host.unrevealed
        unr_comp = find(("f", unr)) if unr is not None else None
        index = {}
        for comp, f in sorted(comp_face.items(), key=lambda kv: kv[1]):
            # a region of B_r lies inside one region of B_{r-1}
            p = 0 if prev_index is None else prev_index[members[comp]]
            nodes.append(FaceNode(level, f, lens[f], comp != unr_comp, p))
            nodes[p].children.append(len(nodes) - 1)
            index[comp] = len(nodes) - 1
        prev_index = {x: index[find(x)] for x in par if find(x) in index}
        prev_keep = kept
    return FaceTree(nodes)
