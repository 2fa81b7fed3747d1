"""Samplers: uniform and free polygon triangulations, the type II UIPT by
peeling, its 3-connected core, and the type III UIPT through the core.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import exact as ex
from .census import brute_force_census, CENSUS_BOUND
from .exact import TriType, DomainError
from .maps import (RootedMap, MapError, from_edge_ids, from_triangles, submap, _pair_by_edges, glued_digon,
                   faces as map_faces, validate)
from .peeling import (Explorer, BudgetExceeded, FutureEnclosure, core_flood,
                      core_vertex_count, PEEL_POLICIES, INF)
from .rng import ExactRng, CumTable

__all__ = [
    "PeelEvent", "PeelState", "FreeSample", "CoreResult", "Type3Ball",
    "sample_uniform", "sample_free", "peel_step_distribution", "peel_once",
    "uipt_ball", "uipt_explore", "core_classify", "uipt_type3_ball", "sample_type3_ball",
    "edge_inflate", "three_connected_core", "explorer_map", "DEFAULT_CHECKPOINT",
    "trace_log", "Unresolved",
]


# -- events ---------------------------------------------------------------

@dataclass(frozen=True)
class PeelEvent:
    """One outcome of a peeling step on an (m+2)-gon frontier.

    Swallow sides: "R" means the third vertex is reached by walking forward
    along the frontier from the head of the peeled edge (the direction that
    keeps the explored region on the left), "L" by walking backward from
    its tail.
    """
    variant: str                 # "Grow" or "Swallow"
    side: Optional[str] = None   # "L" or "R" for swallows
    k: int = 0
    probability: Fraction = Fraction(0)

    def label(self) -> str:
        return "Grow" if self.variant == "Grow" else f"Swallow({self.side},{self.k})"


def peel_step_distribution(m: int) -> list:
    """Exact law of one peeling step: Grow, Swallow(L, 1..m), Swallow(R, 1..m)."""
    if m < 0:
        raise DomainError("m must be >= 0")
    out = [PeelEvent("Grow", None, 0, ex.peel_grow_prob(m))]
    for side in ("L", "R"):
        for k in range(1, m + 1):
            out.append(PeelEvent("Swallow", side, k, ex.peel_swallow_prob(m, k)))
    return out


def _event_prob(m: int, ev: tuple) -> Fraction:
    kind, k = ev
    return ex.peel_grow_prob(m) if kind == "G" else ex.peel_swallow_prob(m, k)


def trace_log(E: Explorer) -> list:
    """Event log rows of a traced exploration; probabilities as "p/q"."""
    out = []
    for s, mb, ma, ev in E.trace or ():
        p = _event_prob(mb, ev)
        out.append({"step": s, "m_before": mb, "m_after": ma, "event": _event_label(ev),
                    "probability": f"{p.numerator}/{p.denominator}"})
    return out


def _event_label(ev: tuple) -> str:
    kind, k = ev
    return "Grow" if kind == "G" else f"Swallow({kind},{k})"


# -- peeling state ----------------------------------------------------------

def explorer_map(E: Explorer) -> RootedMap:
    """Explored region as a map whose unrevealed face is marked."""
    return from_edge_ids(E.tv, E.te, root=(0, 0), unrevealed_edge=E.FE[0])


class PeelState:
    """A partially explored UIPT.

    ``revealed`` is built on demand from the underlying explorer; ``dist``
    maps each frontier vertex to its distance from the root vertex inside
    the revealed region.  ``events`` is the trace (step, m before, m after,
    event label, exact probability).
    """

    def __init__(self, rng: Optional[ExactRng] = None, cap: int = INF):
        self.explorer = Explorer(rng or ExactRng(0), cap=cap, trace=True)

    @property
    def m(self) -> int:
        return self.explorer.m

    @property
    def dist(self) -> dict:
        d = self.explorer.dist
        return {v: d[v] for v in self.explorer.F}

    @property
    def revealed(self) -> RootedMap:
        return explorer_map(self.explorer)

    @property
    def events(self) -> list:
        return [(s, mb, ma, _event_label(ev), _event_prob(mb, ev))
                for s, mb, ma, ev in self.explorer.trace]

    def event_log(self) -> list:
        """Trace rows with probabilities as "p/q" strings."""
        return trace_log(self.explorer)


def peel_once(state: PeelState, policy: str = "min-distance",
              rng: Optional[ExactRng] = None) -> PeelState:
    """Peel one frontier edge chosen by ``policy``; the state is updated in place."""
    E = state.explorer
    if rng is not None:
        E.rng = rng
    E.step(E.pick(policy))
    E.check_enclosure()
    return state


# -- free and uniform samplers --------------------------------------------------

@dataclass(frozen=True)
class FreeSample:
    map: RootedMap
    size: int


def _blank(rng: ExactRng, cap: int = INF) -> Explorer:
    E = Explorer(rng, cap=cap, track_dist=False)
    E.tv, E.te, E.ends, E.etri, E.pair = [], [], [], [], {}
    E.F, E.FE = [], []
    E.nv = 0
    return E


def _polygon(E: Explorer, L: int):
    vs = list(range(L))
    E.nv = L
    es = []
    for i in range(L):
        es.append(E.new_edge(i, (i + 1) % L))
    return vs, es


def sample_free(m: int, rng: ExactRng, cap: int = INF) -> FreeSample:
    """Critical Boltzmann triangulation of the (m+2)-gon (type II)."""
    if m < 0:
        raise DomainError("m must be >= 0")
    if m == 0 and rng.uniform_below(float(ex.free_empty_prob()), ex.free_empty_prob):
        return FreeSample(glued_digon(), 0)
    E = _blank(rng, cap)
    vs, es = _polygon(E, m + 2)
    E.fill(vs, es)
    mp = from_edge_ids(E.tv, E.te, root=(0, 0))
    return FreeSample(mp, E.nv - (m + 2))


def _phi2(n, m):
    if n < 0 or m < 0:
        return 0
    return ex.phi(2, n, m)


def sample_uniform(t, n: int, m: int, rng: ExactRng) -> RootedMap:
    """Uniform rooted triangulation of the (m+2)-gon with n internal vertices."""
    t = TriType.parse(t)
    if t is TriType.TypeIII:
        if n + 2 * m > CENSUS_BOUND:
            raise DomainError("type III sampling is limited to the census range")
        maps = _census_cached(n, m)
        return maps[rng.randrange(len(maps))]
    if n < 0 or m < 0:
        raise DomainError("negative argument")
    if n == 0 and m == 0:
        return glued_digon()
    tris, eids = [], []
    counter = {"v": m + 2, "e": m + 2}

    def new(kind):
        x = counter[kind]
        counter[kind] += 1
        return x

    stack = [(list(range(m + 2)), list(range(m + 2)), n)]
    while stack:
        vs, es, nn = stack.pop()
        mm = len(vs) - 2
        u = rng.randrange(_phi2(nn, mm))
        v0, v1 = vs[0], vs[1]
        g = _phi2(nn - 1, mm + 1)
        if u < g:
            w = new("v")
            e1, e2 = new("e"), new("e")
            tris.append((v0, v1, w))
            eids.append((es[0], e1, e2))
            stack.append(([w] + vs[1:] + [v0], [e1] + es[1:] + [e2], nn - 1))
            continue
        u -= g
        done = False
        for k in range(1, mm + 1):
            for n1 in range(nn + 1):
                w = _phi2(n1, k - 1) * _phi2(nn - n1, mm - k)
                if u < w:
                    j = k + 1
                    subs = []
                    chords = []
                    for sv, se, sn in ((vs[1:j + 1], es[1:j], n1), (vs[j:] + [v0], es[j:], nn - n1)):
                        if len(sv) == 2 and sn == 0:
                            chords.append(se[0])
                        else:
                            c = new("e")
                            chords.append(c)
                            subs.append((sv, se + [c], sn))
                    tris.append((v0, v1, vs[j]))
                    eids.append((es[0], chords[0], chords[1]))
                    stack.extend(subs)
                    done = True
                    break
                u -= w
            if done:
                break
        assert done
    return from_edge_ids(tris, eids)


@lru_cache(maxsize=None)
def _census_cached(n, m):
    return tuple(brute_force_census(3, n, m))


# -- UIPT balls ------------------------------------------------------------------

def uipt_explore(r: int, rng: ExactRng, policy: str = "min-distance",
                 budget: int = INF, trace: bool = False) -> Explorer:
    """Peel until every frontier vertex is at distance >= r from the root."""
    E = Explorer(rng, cap=budget, trace=trace)
    while E.min_frontier_dist() < r:
        E.step(E.pick(policy))
    return E


def _ball_from_explorer(E: Explorer, r: int) -> RootedMap:
    d = E.dist
    keep = [t for t, vs in enumerate(E.tv) if min(d[v] for v in vs) <= r - 1]
    return submap(E.tv, _pair_by_edges(E.te), keep, (0, 0))


def uipt_ball(r: int, policy: str = "min-distance", rng: Optional[ExactRng] = None,
              budget: int = INF) -> RootedMap:
    """Ball of radius r around the root vertex of the type II UIPT.

    Raises BudgetExceeded when more than ``budget`` vertices are needed.
    """
    if r < 0:
        raise DomainError("r must be >= 0")
    if r == 0:
        return RootedMap((), (), (), -1)
    E = uipt_explore(r, rng or ExactRng(0), policy, budget)
    return _ball_from_explorer(E, r)


# -- core --------------------------------------------------------------------------

@dataclass(frozen=True)
class CoreResult:
    kind: str                      # "finite", "infinite" or "unresolved"
    size: Optional[int] = None
    steps: int = 0
    vertices: int = 0
    via: str = ""                  # "peel", "certificate", "completion"

    def label(self) -> str:
        if self.kind == "finite":
            return f"FiniteCore({self.size})"
        return {"infinite": "InfiniteCore", "unresolved": "Unresolved"}[self.kind]


DEFAULT_CHECKPOINT = 12


def _enclosed_core_size(E: Explorer) -> int:
    seen, o, n = E.enclosure
    visited, _ = core_flood(E.tv, E.te, list(seen), 0, {n: o})
    return core_vertex_count(E.tv, visited)


def _complete(E: Explorer, fe: FutureEnclosure, rng: ExactRng, M: float):
    """Sample which future enclosure happens and return the finite sphere's
    triangle list and glue (given that one happens)."""
    a, w = fe.weights_float()
    cells = list(w)
    approx = [a] + [w[c] for c in cells]
    tot = M
    cum, acc = [], 0.0
    for x in approx[:-1]:
        acc += x
        cum.append(acc / tot)

    def exact_cum():
        ax, wx = fe.weights_exact()
        vals = [ax] + [wx[c] for c in cells]
        s = sum(vals)
        out, acc2 = [], Fraction(0)
        for x in vals[:-1]:
            acc2 += x
            out.append(acc2 / s)
        return out

    i = rng.choose(CumTable(cum, exact_cum))
    E.glue = {}
    E.light = True
    E.track_dist = False
    if i == 0:
        m = E.m
        pointed = not rng.bernoulli(Fraction(1, m + 2))
        E.fill_unrevealed(pointed)
        return list(range(len(E.tv))), E.glue
    cell = cells[i - 1]
    chord = fe.parent[cell][1]
    behind = fe.subtree_cells(cell)
    find = fe.find
    R_keep = [t for t in range(len(E.tv)) if find(t) not in behind]
    F, FE = E.F, E.FE
    L = len(F)
    # frontier edges on the root side form one arc; walk it backwards
    on_root_side = [find(E.etri[e][0]) not in behind for e in FE]
    start = next(j for j in range(L) if on_root_side[j] and not on_root_side[j - 1])
    arc = []
    j = start
    while on_root_side[j % L] and len(arc) < L:
        arc.append(j % L)
        j += 1
    s_idx = arc[0]
    e_idx = (arc[-1] + 1) % L
    vs = [F[e_idx]] + [F[(arc[-1] - x) % L] for x in range(len(arc))]
    es = [FE[(arc[-1] - x) % L] for x in range(len(arc))] + [chord]
    u, v = E.ends[chord]
    assert {u, v} == {F[s_idx], F[e_idx]}
    n0 = len(E.tv)
    E.fill(vs, es)
    return R_keep + list(range(n0, len(E.tv))), E.glue


def core_classify(budget: int, rng: ExactRng, checkpoint: int = DEFAULT_CHECKPOINT,
                  policy: str = "min-distance") -> CoreResult:
    """Classify the 3-connected core of the root triangle of a type II UIPT.

    Peels ``checkpoint`` steps, watching for a 2-cycle that closes the root
    off (then the core is finite and computed directly).  At the checkpoint
    the exact probability that such a 2-cycle appears later is computed; a
    uniform draw either certifies InfiniteCore or selects how the enclosure
    happens, after which the enclosed part is completed by a free
    triangulation and its core measured.  ``budget`` caps the number of
    vertices generated; exceeding it gives Unresolved.
    """
    if budget < 1:
        raise DomainError("budget must be >= 1")
    E = Explorer(rng, cap=max(budget, 3))
    try:
        for _ in range(checkpoint):
            E.step(E.pick(policy))
            if E.cands and E.check_enclosure():
                return CoreResult("finite", _enclosed_core_size(E), E.steps, E.nv, "peel")
        fe = FutureEnclosure(E)
        M = fe.total_float()
        if not rng.uniform_below(M, fe.total_exact):
            return CoreResult("infinite", None, E.steps, E.nv, "certificate")
        alive, glue = _complete(E, fe, rng, M)
        visited, _ = core_flood(E.tv, E.te, alive, 0, glue)
        return CoreResult("finite", core_vertex_count(E.tv, visited), E.steps, E.nv,
                          "completion")
    except BudgetExceeded:
        return CoreResult("unresolved", None, E.steps, E.nv, "budget")


# -- type III UIPT -----------------------------------------------------------------------

@dataclass(frozen=True)
class Type3Ball:
    map: Optional[RootedMap]
    restarts: int
    steps: int
    root_degree: int = 0


class Unresolved(RuntimeError):
    pass


def sample_type3_ball(r: int, budget: int, rng: ExactRng, policy: str = "min-distance",
                      max_restarts: int = 10_000) -> Type3Ball:
    """Type III UIPT ball of radius r by rejection from the type II UIPT.

    Each attempt peels until the frontier is at distance >= r; an attempt
    is rejected when the root gets enclosed by a 2-cycle, either during
    the peeling or later (drawn with the exact future-enclosure
    probability).  The accepted core cannot lose any triangle near the
    root afterwards, so its ball is read off the explored region.
    ``map`` is None when the budget ran out.
    """
    if r < 1 or budget < 1:
        raise DomainError("r and budget must be >= 1")
    restarts = 0
    steps = 0
    while restarts <= max_restarts:
        E = Explorer(rng, cap=max(budget, 3))
        try:
            enclosed = False
            while E.min_frontier_dist() < r:
                E.step(E.pick(policy))
                if E.cands and E.check_enclosure():
                    enclosed = True
                    break
            steps += E.steps
            if not enclosed:
                fe = FutureEnclosure(E)
                if not rng.uniform_below(fe.total_float(), fe.total_exact):
                    mp, deg = _core_ball(E, r)
                    return Type3Ball(mp, restarts, steps, deg)
        except BudgetExceeded:
            return Type3Ball(None, restarts, steps + E.steps)
        restarts += 1
    return Type3Ball(None, restarts, steps)


def uipt_type3_ball(r: int, budget: int, rng: ExactRng) -> RootedMap:
    res = sample_type3_ball(r, budget, rng)
    if res.map is None:
        raise Unresolved(f"budget {budget} exhausted")
    return res.map


def _core_ball(E: Explorer, r: int):
    visited, pairs = core_flood(E.tv, E.te, range(len(E.tv)), 0)
    tv = E.tv
    # breadth-first distances in the core from the root vertex
    nbr = {}
    for t in visited:
        a, b, c = tv[t]
        for x, y in ((a, b), (b, c), (c, a)):
            nbr.setdefault(x, set()).add(y)
            nbr.setdefault(y, set()).add(x)
    dist = {tv[0][0]: 0}
    frontier = [tv[0][0]]
    for d in range(1, r):
        nxt = []
        for x in frontier:
            for y in nbr[x]:
                if y not in dist:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    keep = [t for t in visited if any(v in dist for v in tv[t])]
    mp = submap(tv, pairs, keep, (0, 0))
    root_v = tv[0][0]
    deg = sum(1 for t in keep for v in tv[t] if v == root_v)
    return mp, deg


# -- core of a finite map, and its inverse ------------------------------------------------

def _map_triangles(mp: RootedMap):
    """Internal faces as (vertex triple, edge-id triple), plus the root position."""
    fid = mp.face_of()
    ext = mp.external_ids
    tris, eids, where = [], [], {}
    for f, orbit in sorted(map_faces(mp).items()):
        if f in ext:
            continue
        if len(orbit) != 3:
            raise MapError("non-triangle face")
        for i, h in enumerate(orbit):
            where[h] = (len(tris), i)
        tris.append(tuple(mp.origin[h] for h in orbit))
        eids.append(tuple(min(h, mp.twin[h]) for h in orbit))
    if mp.root not in where:
        raise MapError("root face is not a triangle")
    return tris, eids, where


def three_connected_core(mp: RootedMap) -> RootedMap:
    """Core of the root triangle with every multi-edge bundle collapsed."""
    tris, eids, where = _map_triangles(mp)
    rt, ri = where[mp.root]
    visited, pairs = core_flood(tris, eids, range(len(tris)), rt)
    paired = {x for p in pairs for x in p}
    for t in visited:
        for i in range(3):
            if (t, i) not in paired:
                raise MapError("root component is not closed inside the map")
    idx = {t: i for i, t in enumerate(visited)}
    sub_pairs = [((idx[a[0]], a[1]), (idx[b[0]], b[1])) for a, b in pairs]
    return from_triangles([tris[t] for t in visited], sub_pairs, (idx[rt], ri))


def edge_inflate(mp: RootedMap, rng: ExactRng, cap: int = INF) -> RootedMap:
    """Replace each edge by an independent free 2-gon triangulation (most stay single)."""
    tris, eids, where = _map_triangles(mp)
    E = _blank(rng, cap)
    E.nv = max(mp.origin) + 1 if mp.origin else 0
    E.tv = list(tris)
    E.te = [list(x) for x in eids]
    E.ends = {}
    edge_sides = {}
    for t, es in enumerate(eids):
        for i, e in enumerate(es):
            edge_sides.setdefault(e, []).append((t, i))
    # fresh contiguous edge ids for the engine
    remap = {e: k for k, e in enumerate(sorted(edge_sides))}
    E.ends = [None] * len(remap)
    E.etri = [[] for _ in remap]
    for t, es in enumerate(eids):
        for i, e in enumerate(es):
            k = remap[e]
            E.te[t][i] = k
            E.etri[k].append(t)
            E.ends[k] = (tris[t][i], tris[t][(i + 1) % 3])
    empty = ex.free_empty_prob()
    for e in sorted(edge_sides):
        sides = edge_sides[e]
        if len(sides) != 2:
            raise MapError("edge_inflate needs a closed map")
        if rng.uniform_below(float(empty), lambda: empty):
            continue
        (t1, i1), (t2, i2) = sides
        k = remap[e]
        a, b = tris[t1][i1], tris[t1][(i1 + 1) % 3]
        k2 = E.new_edge(a, b)
        E.te[t2][i2] = k2
        E.etri[k].remove(t2)
        E.etri[k2].append(t2)
        E.fill([b, a], [k, k2])
    rt, ri = where[mp.root]
    return from_edge_ids(E.tv, [tuple(x) for x in E.te], root=(rt, ri))
