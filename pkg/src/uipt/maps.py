"""Half-edge representation of rooted triangulations.

A map is three parallel integer arrays indexed by half-edge id: ``twin``,
``nxt`` (successor around the face on the left) and ``origin``.  Faces are
orbits of ``nxt``; a face id is the smallest half-edge in its orbit.
Faces listed in ``external`` are holes (polygon boundaries, the outside of
a ball, the unrevealed part of a peeling); every other face must be a
triangle.  The root is a half-edge whose left face is the root face.

The empty map (no half-edges) stands for the single-vertex map, which is
what the ball of radius 0 returns.
"""
from __future__ import annotations

import hashlib
import sys
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .exact import TriType

__all__ = [
    "RootedMap", "MapError", "validate", "canonical_code", "code_digest",
    "from_triangles", "mirror", "reroot", "relabel", "tetrahedron",
    "double_pyramid", "single_triangle", "glued_digon", "to_text",
    "from_text", "faces", "vertices", "vertex_degree", "root_degree",
    "close_boundary", "internal_vertex_count", "triangles", "submap", "from_edge_ids",
]


class MapError(ValueError):
    """Structurally invalid map or unsupported operation on it."""


@dataclass(frozen=True, eq=False)
class RootedMap:
    twin: tuple
    nxt: tuple
    origin: tuple
    root: int
    external: tuple = ()            # sorted (face id, boundary length) pairs
    unrevealed: Optional[int] = None
    # provenance for maps cut out of a bigger one (balls, cores)
    host: Optional["RootedMap"] = field(default=None, repr=False)
    host_ids: Optional[tuple] = field(default=None, repr=False)

    @property
    def n_half_edges(self) -> int:
        return len(self.twin)

    @property
    def is_point(self) -> bool:
        return len(self.twin) == 0

    @property
    def external_ids(self) -> frozenset:
        return frozenset(f for f, _ in self.external)

    def face_of(self) -> list:
        fid = self.__dict__.get("_fid")
        if fid is None:
            fid = _face_ids(self.nxt)
            object.__setattr__(self, "_fid", fid)
        return fid

    def n_vertices(self) -> int:
        if self.is_point:
            return 1
        return len(set(self.origin))

    def n_edges(self) -> int:
        return len(self.twin) // 2

    def n_faces(self) -> int:
        return len(set(_face_ids(self.nxt)))

    def prev(self) -> list:
        p = [0] * len(self.nxt)
        for h, n in enumerate(self.nxt):
            p[n] = h
        return p

    def head(self, h: int) -> int:
        return self.origin[self.twin[h]]

    def code(self) -> bytes:
        return canonical_code(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootedMap):
            return NotImplemented
        return (self.twin == other.twin and self.nxt == other.nxt
                and self.origin == other.origin and self.root == other.root
                and self.external == other.external
                and self.unrevealed == other.unrevealed)

    def __hash__(self) -> int:
        return hash((self.twin, self.nxt, self.root))


def _face_ids(nxt: Sequence[int]) -> list:
    n = len(nxt)
    fid = [-1] * n
    for h in range(n):
        if fid[h] < 0:
            orbit = [h]
            x = nxt[h]
            while x != h:
                orbit.append(x)
                x = nxt[x]
            f = min(orbit)
            for y in orbit:
                fid[y] = f
    return fid


def faces(m: RootedMap) -> dict:
    """face id -> list of half-edges in next-order starting at the id."""
    out = {}
    for f in set(_face_ids(m.nxt)):
        orbit = [f]
        x = m.nxt[f]
        while x != f:
            orbit.append(x)
            x = m.nxt[x]
        out[f] = orbit
    return out


def triangles(m: RootedMap) -> list:
    """Internal faces as half-edge triples."""
    ext = m.external_ids
    return [o for f, o in sorted(faces(m).items()) if f not in ext]


def vertices(m: RootedMap) -> dict:
    """vertex id -> outgoing half-edges in rotation order."""
    out = {}
    seen = [False] * len(m.twin)
    for h in range(len(m.twin)):
        if seen[h]:
            continue
        rot = []
        x = h
        while not seen[x]:
            seen[x] = True
            rot.append(x)
            x = m.nxt[m.twin[x]]
        out[m.origin[h]] = rot
    return out


def vertex_degree(m: RootedMap, v: int) -> int:
    return sum(1 for o in m.origin if o == v)


def root_degree(m: RootedMap) -> int:
    """Number of edge ends at the root vertex (loops would count twice)."""
    if m.is_point:
        return 0
    return vertex_degree(m, m.origin[m.root])


def internal_vertex_count(m: RootedMap) -> int:
    ext = m.external_ids
    fid = _face_ids(m.nxt)
    on_boundary = {m.origin[h] for h in range(len(m.twin)) if fid[h] in ext}
    return m.n_vertices() - len(on_boundary)


def validate(m: RootedMap, tri_type=TriType.TypeII) -> Optional[str]:
    """Return None when all invariants hold, else a short violation message."""
    t = TriType.parse(tri_type)
    n = len(m.twin)
    if n == 0:
        return None if m.root in (-1, 0) else "root out of range"
    if not (len(m.nxt) == n == len(m.origin)):
        return "array length mismatch"
    if n % 2:
        return "odd number of half-edges"
    if not 0 <= m.root < n:
        return "root out of range"
    for h in range(n):
        tw = m.twin[h]
        if not 0 <= tw < n or tw == h or m.twin[tw] != h:
            return "twin is not a fixed-point-free involution"
    if sorted(m.nxt) != list(range(n)):
        return "next is not a permutation"
    # vertices: origin must be constant on rotation orbits, distinct across them
    rot_ids = {}
    for v, rot in vertices(m).items():
        for h in rot:
            if m.origin[h] != v:
                return "origin inconsistent with rotation"
        if v in rot_ids:
            return "origin inconsistent with rotation"
        rot_ids[v] = True
    if len(rot_ids) != len(set(m.origin)):
        return "origin inconsistent with rotation"
    if not _connected(m):
        return "map not connected"
    fid = _face_ids(m.nxt)
    face_len = {}
    for f in fid:
        face_len[f] = face_len.get(f, 0) + 1
    ext = dict(m.external)
    for f, length in ext.items():
        if face_len.get(f) != length:
            return "external face length mismatch"
    if m.unrevealed is not None and m.unrevealed not in ext:
        return "unrevealed face not external"
    for f, length in face_len.items():
        if f not in ext and length != 3:
            return "non-triangle face"
    V = len(rot_ids)
    E = n // 2
    F = len(face_len)
    if V - E + F != 2:
        return "Euler characteristic"
    for h in range(n):
        if m.origin[h] == m.origin[m.twin[h]]:
            return "loop"
    if t is TriType.TypeIII:
        seen = set()
        for h in range(n):
            tw = m.twin[h]
            if h < tw:
                key = (min(m.origin[h], m.origin[tw]), max(m.origin[h], m.origin[tw]))
                if key in seen:
                    return "multiple edge"
                seen.add(key)
    return None


def _connected(m: RootedMap) -> bool:
    n = len(m.twin)
    seen = [False] * n
    seen[0] = True
    st = [0]
    cnt = 1
    while st:
        h = st.pop()
        for x in (m.twin[h], m.nxt[h]):
            if not seen[x]:
                seen[x] = True
                cnt += 1
                st.append(x)
    return cnt == n


def _encode(nxt, twin, flag, root) -> bytes:
    # breadth-first relabeling from the root; each half-edge contributes
    # (label of next, label of twin, face flag) as little-endian uint32
    n = len(nxt)
    lab = [-1] * n
    lab[root] = 0
    order = [root]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        x = nxt[h]
        if lab[x] < 0:
            lab[x] = len(order)
            order.append(x)
        x = twin[h]
        if lab[x] < 0:
            lab[x] = len(order)
            order.append(x)
    if len(order) != n:
        raise MapError("map not connected")
    words = array("I", [n])
    words.extend([v for h in order for v in (lab[nxt[h]], lab[twin[h]], flag[h])])
    if sys.byteorder == "big":
        words.byteswap()
    return words.tobytes()


def canonical_code(m: RootedMap) -> bytes:
    """Relabeling-invariant code of the rooted map.

    Two maps get the same code exactly when an orientation-preserving
    isomorphism maps root to root.  A root taken on the other side of an
    edge is handled by encoding the mirror image (see :func:`reroot`).
    The unrevealed marker is part of the code.
    """
    if m.is_point:
        return b"\x00"
    ext = m.external_ids
    fid = m.face_of()
    flag = [0] * len(fid)
    for h, f in enumerate(fid):
        if f in ext:
            flag[h] = 2 if f == m.unrevealed else 1
    return _encode(m.nxt, m.twin, flag, m.root)


def code_digest(code: bytes) -> bytes:
    return hashlib.blake2b(code, digest_size=16).digest()


def _rebuild(twin, nxt, origin, root, ext_faces, unrevealed=None, host=None,
             host_ids=None) -> RootedMap:
    """Normalize face ids of ``ext_faces`` (given as member half-edges)."""
    fid = _face_ids(nxt)
    lens = {}
    for f in fid:
        lens[f] = lens.get(f, 0) + 1
    ext = tuple(sorted({(fid[h], lens[fid[h]]) for h in ext_faces}))
    unr = fid[unrevealed] if unrevealed is not None else None
    m = RootedMap(tuple(twin), tuple(nxt), tuple(origin), root, ext, unr,
                  host, host_ids)
    object.__setattr__(m, "_fid", fid)
    return m


def relabel(m: RootedMap, perm: Sequence[int], vperm: Optional[dict] = None) -> RootedMap:
    """Copy of ``m`` with half-edge h renamed perm[h] (and vertices by vperm)."""
    n = len(m.twin)
    inv = [0] * n
    for h, p in enumerate(perm):
        inv[p] = h
    twin = [perm[m.twin[inv[p]]] for p in range(n)]
    nxt = [perm[m.nxt[inv[p]]] for p in range(n)]
    origin = [m.origin[inv[p]] for p in range(n)]
    if vperm is not None:
        origin = [vperm[o] for o in origin]
    fid = _face_ids(m.nxt)
    ext_members = [perm[h] for h in range(n) if fid[h] in m.external_ids]
    unr = None
    if m.unrevealed is not None:
        unr = perm[m.unrevealed]
    return _rebuild(twin, nxt, origin, perm[m.root], ext_members, unr)


def mirror(m: RootedMap, root: Optional[int] = None) -> RootedMap:
    """Orientation-reversed copy; half-edge h keeps its id but runs backwards."""
    n = len(m.twin)
    nxt = [0] * n
    for h in range(n):
        nxt[m.nxt[h]] = h
    origin = [m.origin[m.twin[h]] for h in range(n)]
    fid = _face_ids(m.nxt)
    ext_members = [h for h in range(n) if fid[h] in m.external_ids]
    unr = m.unrevealed
    return _rebuild(m.twin, nxt, origin, m.root if root is None else root,
                    ext_members, unr)


def reroot(m: RootedMap, h: int, side: int = 0) -> RootedMap:
    """Re-root at directed edge h with the root face on its left (side 0)
    or on its right (side 1, realized on the mirror image)."""
    if side == 0:
        fid = _face_ids(m.nxt)
        ext = m.external_ids
        return _rebuild(m.twin, m.nxt, m.origin, h,
                        [x for x in range(len(m.twin)) if fid[x] in ext], m.unrevealed)
    # in the mirror the same directed edge is twin(h)
    return mirror(m, root=m.twin[h])


def from_triangles(tris: Sequence[tuple], pairs: Iterable[tuple], root: tuple,
                   unrevealed_from: Optional[tuple] = None) -> RootedMap:
    """Build a map from oriented triangles.

    ``tris[t] = (a, b, c)`` lists vertex labels with the face on the left
    of a->b->c; half-edge (t, i) runs from tris[t][i] to tris[t][i+1].
    ``pairs`` holds ((t, i), (t2, i2)) twin pairs.  Unpaired half-edges get
    a twin on a new external face; external faces are traced by rotating
    around the shared vertex.  ``root`` is a (t, i) half-edge.  When
    ``unrevealed_from`` is given, the external face across that unpaired
    half-edge is marked unrevealed.
    """
    return submap(tris, pairs, range(len(tris)), root, unrevealed_from)


def submap(tris: Sequence[tuple], pairs: Iterable[tuple], keep: Iterable[int],
           root: tuple, unrevealed_from: Optional[tuple] = None) -> RootedMap:
    """Map made of the triangles ``keep`` of a host given by (tris, pairs).

    Where the kept triangles around a vertex form several sectors, the
    host's cyclic order decides how the external faces pass between them,
    so the vertex stays one vertex.  ``root`` and ``unrevealed_from`` use
    host triangle indices.
    """
    keep = list(keep)
    idx = {t: k for k, t in enumerate(keep)}
    htwin = {}
    for a, b in pairs:
        htwin[a] = b
        htwin[b] = a
    T = len(keep)
    n_int = 3 * T
    twin = [-1] * n_int
    for k, t in enumerate(keep):
        for i in range(3):
            o = htwin.get((t, i))
            if o is not None and o[0] in idx:
                twin[3 * k + i] = 3 * idx[o[0]] + o[1]
    nxt = [3 * (h // 3) + (h % 3 + 1) % 3 for h in range(n_int)]
    origin = [tris[keep[h // 3]][h % 3] for h in range(n_int)]
    unpaired = [h for h in range(n_int) if twin[h] < 0]
    ext_of = {}
    for h in unpaired:
        x = len(twin)
        ext_of[h] = x
        twin.append(h)
        twin[h] = x
        nxt.append(-1)
        # external half-edge runs head(h) -> origin(h)
        origin.append(origin[3 * (h // 3) + (h % 3 + 1) % 3])
    for h in unpaired:
        # next external half-edge leaves origin(h); it is the far side of the
        # first kept corner met by turning from h through the host's gap
        t, i = keep[h // 3], h % 3
        c = _next_kept_corner(tris, htwin, idx, (t, i))
        g = 3 * idx[c[0]] + (c[1] + 2) % 3
        nxt[ext_of[h]] = ext_of[g]
    unr = None
    if unrevealed_from is not None:
        unr = ext_of[3 * idx[unrevealed_from[0]] + unrevealed_from[1]]
    return _rebuild(twin, nxt, origin, 3 * idx[root[0]] + root[1],
                    list(ext_of.values()), unr)


def _next_kept_corner(tris, htwin, idx, u):
    """Turn around the origin of half-edge u across its own edge, through
    host triangles, until a kept triangle; a host boundary is crossed by
    jumping to the other end of the vertex's fan."""
    start = u
    for _ in range(4 * len(tris) + 8):
        w = htwin.get(u)
        if w is None:
            # walk back the other way to the first corner of the fan
            x = u
            while True:
                t, i = x
                p = htwin.get((t, (i + 2) % 3))
                if p is None:
                    break
                x = p
                if x == u:
                    break
            u = x
        else:
            u = (w[0], (w[1] + 1) % 3)
        if u[0] in idx:
            return u
        if u == start:
            break
    raise MapError("vertex fan does not close")


def _pair_by_edges(edge_ids: Sequence[tuple]) -> list:
    """Twin pairs from per-triangle edge ids; each id must occur at most twice."""
    where = {}
    pairs = []
    for t, es in enumerate(edge_ids):
        for i, e in enumerate(es):
            if e in where:
                pairs.append((where.pop(e), (t, i)))
            else:
                where[e] = (t, i)
    return pairs


def from_edge_ids(tris: Sequence[tuple], edge_ids: Sequence[tuple], root=(0, 0),
                  unrevealed_edge: Optional[int] = None) -> RootedMap:
    """Triangles plus shared edge ids; an id seen once is a boundary edge."""
    pairs = _pair_by_edges(edge_ids)
    unr = None
    if unrevealed_edge is not None:
        for t, es in enumerate(edge_ids):
            for i, e in enumerate(es):
                if e == unrevealed_edge:
                    unr = (t, i)
    return from_triangles(tris, pairs, root, unr)


def tetrahedron() -> RootedMap:
    tris = [(0, 1, 2), (1, 0, 3), (2, 1, 3), (0, 2, 3)]
    eids = [("01", "12", "20"), ("01", "03", "31"), ("12", "31", "23"), ("20", "23", "03")]
    return from_edge_ids(tris, eids)


def single_triangle() -> RootedMap:
    return from_edge_ids([(0, 1, 2)], [(0, 1, 2)])


def glued_digon() -> RootedMap:
    """The empty 2-gon: one edge, both sides on one external face of length 2."""
    return _rebuild([1, 0], [1, 0], [0, 1], 0, [0])


def double_pyramid(k: int) -> RootedMap:
    """Two apexes over a k-cycle, rooted at the top apex."""
    if k < 3:
        raise MapError("need a cycle of length >= 3")
    top, bot = k, k + 1
    tris, eids = [], []
    for i in range(k):
        j = (i + 1) % k
        tris.append((top, i, j))
        eids.append((("t", i), ("c", i), ("t", j)))
        tris.append((bot, j, i))
        eids.append((("b", j), ("c", i), ("b", i)))
    return from_edge_ids(tris, eids)


def close_boundary(m: RootedMap) -> RootedMap:
    """Turn a single external triangle into an internal face."""
    if len(m.external) != 1 or m.external[0][1] != 3:
        raise MapError("need exactly one external triangle")
    return _rebuild(m.twin, m.nxt, m.origin, m.root, [], None)


# Text interchange -------------------------------------------------------

_MAGIC = "uipt-map v1"


def to_text(m: RootedMap) -> str:
    ext = " ".join(f"{f}:{L}" for f, L in m.external)
    lines = [
        _MAGIC,
        f"half_edges {len(m.twin)}",
        "twin " + " ".join(map(str, m.twin)),
        "next " + " ".join(map(str, m.nxt)),
        "origin " + " ".join(map(str, m.origin)),
        f"root {m.root}",
        "external " + ext,
        "unrevealed " + ("-" if m.unrevealed is None else str(m.unrevealed)),
        "code " + canonical_code(m).hex(),
    ]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> RootedMap:
    rows = {}
    lines = text.splitlines()
    if not lines or lines[0] != _MAGIC:
        raise MapError("not a map record")
    for line in lines[1:]:
        key, _, rest = line.partition(" ")
        rows[key] = rest
    n = int(rows["half_edges"])

    def ints(key):
        s = rows[key].split()
        return tuple(int(x) for x in s)

    twin, nxt, origin = ints("twin"), ints("next"), ints("origin")
    if not (len(twin) == len(nxt) == len(origin) == n):
        raise MapError("array length does not match half_edges")
    ext = tuple(sorted(tuple(int(x) for x in item.split(":"))
                       for item in rows.get("external", "").split()))
    u = rows.get("unrevealed", "-").strip()
    m = RootedMap(twin, nxt, origin, int(rows["root"]), ext,
                  None if u == "-" else int(u))
    if "code" in rows and rows["code"].strip() != canonical_code(m).hex():
        raise MapError("code does not match the arrays")
    return m
