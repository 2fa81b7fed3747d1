"""Peeling exploration of the type II UIPT and of free polygon fillings.

The explored region is kept as a plain triangle list: ``tv[t]`` are the
vertices of triangle t with its face on the left of a->b->c, ``te[t]`` the
ids of its edges (edge i joins tv[t][i] and tv[t][i+1]).  The frontier is
the cycle ``F`` of vertices with ``FE[i]`` joining F[i] to F[i+1]; the
explored region lies on the left of that direction, the unrevealed face on
the right.  Triangle 0 is the root triangle.

Swallowed pockets are filled immediately with free triangulations, so the
region is always a disc whose only hole is the unrevealed face.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import lgamma, exp, log

from . import exact as ex
from .rng import CumTable, ExactRng

__all__ = ["Explorer", "BudgetExceeded", "peel_table", "free_table",
           "pointed_table", "core_flood", "future_enclosure", "PEEL_POLICIES"]

INF = 1 << 30
PEEL_POLICIES = ("min-distance", "random-min", "fixed")


class BudgetExceeded(RuntimeError):
    """The vertex cap of an exploration was reached."""


def _lz(k):
    return lgamma(2 * k + 1) - lgamma(k + 1) - lgamma(k + 3)


def _lc(k):
    return lgamma(2 * k + 2) - 2 * lgamma(k + 1)


_L94 = log(2.25)


@lru_cache(maxsize=None)
def peel_table(m: int) -> CumTable:
    """Outcome 0: Grow.  1..m: Swallow forward k.  m+1..2m: Swallow backward k."""
    g = (2 * m + 3) / (3 * (m + 1))
    sw = [exp(_lc(m - k) + _lz(k - 1) - _lc(m)) for k in range(1, m + 1)]
    probs = [g] + sw + sw
    cum = []
    acc = 0.0
    for p in probs[:-1]:
        acc += p
        cum.append(acc)

    def exact_cum():
        ps = [ex.peel_grow_prob(m)] + [ex.peel_swallow_prob(m, k) for k in range(1, m + 1)]
        ps = ps + ps[1:]
        out, a = [], Fraction(0)
        for p in ps[:-1]:
            a += p
            out.append(a)
        return out

    return CumTable(cum, exact_cum)


@lru_cache(maxsize=None)
def free_table(m: int) -> CumTable:
    """Free (m+2)-gon, m >= 1.  Outcome 0: Grow; k in 1..m: apex at boundary vertex k+1."""
    g = (2 * m + 1) / (3 * (m + 3))
    sp = [exp(_lz(k - 1) + _lz(m - k) - _lz(m)) for k in range(1, m + 1)]
    probs = [g] + sp
    cum, acc = [], 0.0
    for p in probs[:-1]:
        acc += p
        cum.append(acc)

    def exact_cum():
        ps = [ex.free_grow_prob(m)] + [ex.free_split_prob(m, k) for k in range(1, m + 1)]
        out, a = [], Fraction(0)
        for p in ps[:-1]:
            a += p
            out.append(a)
        return out

    return CumTable(cum, exact_cum)


def _lzp(k):
    # log of Z'_k / (9/4)^{k+1}
    return _lz(k) + log((k + 1) * (2 * k + 1) / 3)


def pointed_probs_exact(m: int) -> list:
    """Branch law of a free (m+2)-gon tilted by its number of internal vertices.

    Order: Grow with the new vertex marked, Grow with the mark further in,
    then for each k: (mark in the first part, mark in the second part).
    """
    Z = lambda j: ex.z_critical(2, j)
    Zp = ex.z_pointed
    a = Fraction(2, 27)
    tot = Zp(m)
    out = [a * Z(m + 1) / tot, a * Zp(m + 1) / tot]
    for k in range(1, m + 1):
        out.append(Zp(k - 1) * Z(m - k) / tot)
        out.append(Z(k - 1) * Zp(m - k) / tot)
    return out


@lru_cache(maxsize=None)
def pointed_table(m: int) -> CumTable:
    base = _lzp(m)
    la = log(2 / 27) + _L94  # alpha^-1 times one extra 9/4 from Z_{m+1}
    probs = [exp(la + _lz(m + 1) - base), exp(la + _lzp(m + 1) - base)]
    for k in range(1, m + 1):
        probs.append(exp(_lzp(k - 1) + _lz(m - k) - base))
        probs.append(exp(_lz(k - 1) + _lzp(m - k) - base))
    cum, acc = [], 0.0
    for p in probs[:-1]:
        acc += p
        cum.append(acc)

    def exact_cum():
        out, a = [], Fraction(0)
        for p in pointed_probs_exact(m)[:-1]:
            a += p
            out.append(a)
        return out

    return CumTable(cum, exact_cum)


_EMPTY = ex.free_empty_prob()
_EMPTY_F = float(_EMPTY)


class Explorer:
    """Mutable peeling state; one instance per exploration."""

    def __init__(self, rng: ExactRng, cap: int = INF, track_dist: bool = True,
                 trace: bool = False):
        self.rng = rng
        self.cap = cap
        self.nv = 3
        self.tv = [(0, 1, 2)]
        self.te = [(0, 1, 2)]
        self.ends = [(0, 1), (1, 2), (2, 0)]
        self.etri = [[0], [0], [0]]
        self.pair = {(0, 1): [0], (1, 2): [1], (0, 2): [2]}
        self.F = [0, 1, 2]
        self.FE = [0, 1, 2]
        self.cands = []
        self.track_dist = track_dist
        self.adj = [[1, 2], [0, 2], [0, 1]]
        self.dist = [0, 1, 1]
        self.steps = 0
        self.trace = [] if trace else None
        self.enclosure = None      # (seen triangles, edge o, edge n) once found
        self.light = False         # skip adjacency bookkeeping (final completions)

    # -- construction primitives ------------------------------------------
    def new_vertex(self) -> int:
        v = self.nv
        if v >= self.cap:
            raise BudgetExceeded(v)
        self.nv = v + 1
        if self.track_dist:
            self.adj.append([])
            self.dist.append(INF)
        return v

    def new_edge(self, u: int, v: int) -> int:
        e = len(self.ends)
        self.ends.append((u, v))
        if self.light:
            return e
        self.etri.append([])
        key = (u, v) if u < v else (v, u)
        lst = self.pair.get(key)
        if lst is None:
            self.pair[key] = [e]
        else:
            for o in lst:
                self.cands.append((o, e))
            lst.append(e)
        if self.track_dist:
            self.adj[u].append(v)
            self.adj[v].append(u)
            d = self.dist
            du, dv = d[u], d[v]
            if du + 1 < dv:
                self._relax(v, du + 1)
            elif dv + 1 < du:
                self._relax(u, dv + 1)
        return e

    def _relax(self, v: int, dv: int) -> None:
        d = self.dist
        adj = self.adj
        d[v] = dv
        q = [v]
        while q:
            nq = []
            for x in q:
                dx = d[x] + 1
                for y in adj[x]:
                    if d[y] > dx:
                        d[y] = dx
                        nq.append(y)
            q = nq

    def add_tri(self, a, b, c, eab, ebc, eca) -> int:
        t = len(self.tv)
        self.tv.append((a, b, c))
        self.te.append((eab, ebc, eca))
        if self.light:
            return t
        self.etri[eab].append(t)
        self.etri[ebc].append(t)
        self.etri[eca].append(t)
        return t

    # -- free fillings ------------------------------------------------------
    def fill(self, vs, es, pointed: bool = False) -> None:
        """Fill the polygon (vs, es) (interior on the left) with a free triangulation.

        vs has at least 3 vertices, or exactly 2 for a non-empty 2-gon.
        ``pointed`` tilts the law by the number of internal vertices.
        """
        stack = [(vs, es, pointed)]
        rng = self.rng
        while stack:
            vs, es, pt = stack.pop()
            m = len(vs) - 2
            if pt:
                o = rng.choose(pointed_table(m))
                if o < 2:
                    ev, pa, pb = -1, o == 1, False
                else:
                    k, which = divmod(o - 2, 2)
                    ev = k + 1
                    pa, pb = which == 0, which == 1
            else:
                pa = pb = False
                ev = -1 if m == 0 else rng.choose(free_table(m)) or -1
            v0, v1 = vs[0], vs[1]
            if ev == -1:
                w = self.new_vertex()
                e1 = self.new_edge(v1, w)
                e2 = self.new_edge(w, v0)
                self.add_tri(v0, v1, w, es[0], e1, e2)
                stack.append(([w] + vs[1:] + [v0], [e1] + es[1:] + [e2], pa))
            else:
                j = ev + 1
                a = vs[j]
                c1 = self._chord(vs[1:j + 1], es[1:j], pa, stack)
                c2 = self._chord(vs[j:] + [v0], es[j:], pb, stack)
                self.add_tri(v0, v1, a, es[0], c1, c2)

    def _chord(self, vs, es, pointed, stack) -> int:
        """Close the path vs by a chord vs[-1] -> vs[0]; queue the inside."""
        if len(vs) == 2 and not pointed:
            if self.rng.uniform_below(_EMPTY_F, lambda: _EMPTY):
                return es[0]
        e = self.new_edge(vs[-1], vs[0])
        stack.append((vs, es + [e], pointed))
        return e

    def _pocket(self, vs, es) -> None:
        """Fill a swallowed pocket polygon vs (closing edge already in es)."""
        self.fill(vs, es)

    # -- peeling --------------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.F) - 2

    def pick(self, policy: str = "min-distance") -> int:
        F = self.F
        if policy == "fixed":
            return 0
        d = self.dist
        best = INF
        bi = 0
        if policy == "min-distance":
            for i, v in enumerate(F):
                dv = d[v]
                if dv < best:
                    best = dv
                    bi = i
            return bi
        if policy == "random-min":
            best = min(d[v] for v in F)
            idx = [i for i, v in enumerate(F) if d[v] == best]
            i = idx[self.rng.randrange(len(idx))]
            # either frontier edge at the chosen vertex
            return i if self.rng.randrange(2) == 0 else (i - 1) % len(F)
        raise ValueError(f"unknown policy {policy!r}")

    def min_frontier_dist(self) -> int:
        d = self.dist
        return min(d[v] for v in self.F)

    def step(self, i: int) -> tuple:
        """Peel frontier edge FE[i]; returns (event, k) with event in G, R, L."""
        F, FE = self.F, self.FE
        L = len(F)
        m = L - 2
        a, b, e = F[i], F[(i + 1) % L], FE[i]
        o = self.rng.choose(peel_table(m))
        self.steps += 1
        if o == 0:
            c = self.new_vertex()
            eac = self.new_edge(a, c)
            ecb = self.new_edge(c, b)
            self.add_tri(b, a, c, e, eac, ecb)
            F.insert(i + 1, c)
            FE[i] = eac
            FE.insert(i + 1, ecb)
            ev = ("G", 0)
        else:
            forward = o <= m
            k = o if forward else o - m
            if i:
                F[:] = F[i:] + F[:i]
                FE[:] = FE[i:] + FE[:i]
            if forward:
                c = F[1 + k]
                arce = FE[1:k + 1]          # frontier b .. c
                if k == 1 and self.rng.uniform_below(_EMPTY_F, lambda: _EMPTY):
                    ebc = arce[0]
                    pocket = None
                else:
                    ebc = self.new_edge(b, c)
                    pv = [b, c] + F[2:k + 1][::-1]
                    pocket = (pv, [ebc] + arce[::-1])
                eac = self.new_edge(a, c)
                self.add_tri(b, a, c, e, eac, ebc)
                self.F = [a] + F[1 + k:]
                self.FE = [eac] + FE[1 + k:]
                ev = ("R", k)
            else:
                c = F[L - k]
                arce = FE[L - k:]           # frontier c .. a
                if k == 1 and self.rng.uniform_below(_EMPTY_F, lambda: _EMPTY):
                    eac = arce[0]
                    pocket = None
                else:
                    eac = self.new_edge(a, c)
                    pv = [c, a] + F[L - k + 1:][::-1]
                    pocket = (pv, [eac] + arce[::-1])
                ecb = self.new_edge(c, b)
                self.add_tri(b, a, c, e, eac, ecb)
                self.F = [c] + F[1:L - k]
                self.FE = [ecb] + FE[1:L - k]
                ev = ("L", k)
            if pocket is not None:
                self.fill(*pocket)
        if self.trace is not None:
            self.trace.append((self.steps, m, len(self.F) - 2, ev))
        return ev

    # -- enclosure of the root triangle ----------------------------------------
    def check_enclosure(self) -> bool:
        """Look at 2-cycles created since the last call; True once one of
        them separates the root triangle from the unrevealed face."""
        if not self.cands:
            return False
        fset = set(self.FE)
        cands, self.cands = self.cands, []
        for o, n in cands:
            if self._encl_pair(o, n, fset):
                return True
        return False

    def _encl_pair(self, o, n, fset) -> bool:
        # lockstep floods from the four sides of the 2-cycle; a flood that
        # touches the frontier is on the unrevealed side
        te, etri = self.te, self.etri
        floods = []
        for e in (o, n):
            for t in etri[e]:
                floods.append([{t}, [t], False])
        while True:
            for fl in floods:
                seen, st, touched = fl
                if touched:
                    continue
                if not st:
                    if 0 in seen:
                        self.enclosure = (seen, o, n)
                        return True
                    return False
                t = st.pop()
                for e in te[t]:
                    if e == o or e == n:
                        continue
                    if e in fset:
                        fl[2] = True
                        if 0 in seen:
                            return False
                        break
                    for t2 in etri[e]:
                        if t2 not in seen:
                            seen.add(t2)
                            st.append(t2)
            if all(fl[2] for fl in floods):
                return False

    # -- completions -----------------------------------------------------------
    def fill_unrevealed(self, pointed: bool) -> None:
        """Close the unrevealed face with a free triangulation (finite sphere)."""
        F, FE = self.F, self.FE
        L = len(F)
        vs = [F[0]] + F[:0:-1]
        es = [FE[L - 1 - j] for j in range(L)]
        if L == 2 and not pointed:
            if self.rng.uniform_below(_EMPTY_F, lambda: _EMPTY):
                self.glue = {FE[1]: FE[0]}
                return
        self.fill(vs, es, pointed)

    def frontier_distance_ok(self, r: int) -> bool:
        return self.min_frontier_dist() >= r


# -- core ---------------------------------------------------------------------

def core_flood(tv, te, alive, root_t=0, glue=None):
    """Triangles of the root's 3-connected core.

    ``alive`` lists the triangles of the (possibly partial) map; ``glue``
    maps edge ids onto representatives (for 2-gons closed by identification).
    Crossing a simple edge goes to the neighbour; reaching an edge of a
    multi-edge bundle jumps to the next edge of the same bundle around one
    endpoint, which glues the two and skips the region between them.
    Returns (visited triangles, twin pairs of (t, i) half-edges).
    """
    g = glue or {}
    rep = (lambda e: g.get(e, e)) if g else (lambda e: e)
    side = {}
    bundle = {}
    for t in alive:
        vs = tv[t]
        for i, e in enumerate(te[t]):
            r = rep(e)
            side.setdefault(r, []).append((t, i))
            a, b = vs[i], vs[(i + 1) % 3]
            key = (a, b) if a < b else (b, a)
            s = bundle.get(key)
            if s is None:
                bundle[key] = {r}
            else:
                s.add(r)

    def other(t, i):
        for x in side[rep(te[t][i])]:
            if x[0] != t or x[1] != i:
                return x
        return None

    def walk(t, i, around_head):
        # rotate around one endpoint of edge (t, i), starting into t
        a, b = tv[t][i], tv[t][(i + 1) % 3]
        if around_head:
            u, j = b, (i + 1) % 3
        else:
            u, j = a, (i + 2) % 3
        target = (a, b) if a < b else (b, a)
        for _ in range(4 * len(side) + 4):
            nb = other(t, j)
            if nb is None:
                return None
            t2, i2 = nb
            vs2 = tv[t2]
            j2 = (i2 + 2) % 3 if vs2[i2] == u else (i2 + 1) % 3
            x, y = vs2[j2], vs2[(j2 + 1) % 3]
            if ((x, y) if x < y else (y, x)) == target:
                return t2, j2
            t, j = t2, j2
        raise RuntimeError("rotation did not close")

    visited = {root_t}
    order = [root_t]
    pairs = {}
    k = 0
    while k < len(order):
        t = order[k]
        k += 1
        vs = tv[t]
        for i in range(3):
            if (t, i) in pairs:
                continue
            a, b = vs[i], vs[(i + 1) % 3]
            key = (a, b) if a < b else (b, a)
            if len(bundle[key]) == 1:
                nb = other(t, i)
            else:
                nb = walk(t, i, False)
                if nb is None:
                    nb = walk(t, i, True)
            if nb is None:
                continue
            pairs[(t, i)] = nb
            pairs[nb] = (t, i)
            if nb[0] not in visited:
                visited.add(nb[0])
                order.append(nb[0])
    twin_pairs = [(x, y) for x, y in pairs.items() if x < y]
    return order, twin_pairs


def core_vertex_count(tv, visited) -> int:
    return len({v for t in visited for v in tv[t]})


# -- future enclosure ----------------------------------------------------------

def _rho_f(Q, q):
    return 2.25 * exp(_lz(Q - q) + _lc(q - 1) - _lc(Q - 1))


def _rho_x(Q, q):
    return ex.z_critical(2, Q - q) * ex.c_hat(2, q - 1) / ex.c_hat(2, Q - 1)


class FutureEnclosure:
    """Probability that the root triangle gets enclosed later, given the
    current (not yet enclosed) exploration, split by how it happens.

    Weight 1/(m+1): the enclosing 2-cycle uses no edge of the explored
    region (the completion of the whole unrevealed face is then tilted by
    its edge count).  For each chord c (explored edge between two frontier
    vertices, not on the frontier) with q frontier edges behind it, weight
    rho(m+1, q) nu(c): the enclosing 2-cycle is c plus a future parallel
    edge, and it is the outermost one.
    """

    def __init__(self, exp_: Explorer):
        self.ex = exp_
        self.m = exp_.m
        self._build()

    def _build(self):
        E = self.ex
        F, FE = E.F, E.FE
        fset = set(FE)
        fv = set(F)
        par = list(range(len(E.tv)))

        def find(x):
            while par[x] != x:
                par[x] = par[par[x]]
                x = par[x]
            return x

        chords = []
        for e, (u, v) in enumerate(E.ends):
            ts = E.etri[e]
            if e in fset or len(ts) < 2:
                continue
            if u in fv and v in fv:
                chords.append(e)
                continue
            a, b = find(ts[0]), find(ts[1])
            if a != b:
                par[a] = b
        adj = {}
        for e in chords:
            a, b = find(E.etri[e][0]), find(E.etri[e][1])
            adj.setdefault(a, []).append((b, e))
            adj.setdefault(b, []).append((a, e))
        fcount = {}
        for e in FE:
            c = find(E.etri[e][0])
            fcount[c] = fcount.get(c, 0) + 1
        root = find(0)
        order = []
        parent = {root: None}
        st = [root]
        while st:
            x = st.pop()
            order.append(x)
            for y, e in adj.get(x, ()):
                if y not in parent:
                    parent[y] = (x, e)
                    st.append(y)
        q = {}
        kids = {x: [] for x in order}
        for x in order[1:]:
            kids[parent[x][0]].append(x)
        for x in reversed(order):
            q[x] = fcount.get(x, 0) + sum(q[y] for y in kids[x])
        self.find = find
        self.cell_root = root
        self.parent = parent
        self.kids = kids
        self.order = order
        self.q = q
        # chord of each non-root cell = the edge to its parent
        self.chords = [(x, parent[x][1], q[x]) for x in order[1:]]

    def _evaluate(self, rho, frac):
        """Weights (case A, {cell: weight}) under the arithmetic given."""
        q, kids = self.q, self.kids
        nu = {}
        desc = {}
        eight_ninths = frac(8, 9)
        for x in reversed(self.order[1:]):
            lst = []
            for y in kids[x]:
                lst.extend(desc[y])
                lst.append(y)
            desc[x] = lst
            qq = q[x]
            if qq == 0:
                nu[x] = frac(0, 1)
                continue
            s = sum((rho(qq, q[y]) * nu[y] for y in lst if q[y] > 0), frac(0, 1))
            nu[x] = eight_ninths * (frac(qq - 1, qq) - s)
        Q = self.m + 1
        w = {x: rho(Q, q[x]) * nu[x] for x in self.order[1:] if q[x] > 0}
        return frac(1, self.m + 1), w

    def weights_float(self):
        return self._evaluate(_rho_f, lambda a, b: a / b)

    def weights_exact(self):
        return self._evaluate(_rho_x, Fraction)

    def total_float(self) -> float:
        a, w = self.weights_float()
        return a + sum(w.values())

    def total_exact(self) -> Fraction:
        a, w = self.weights_exact()
        return a + sum(w.values())

    def subtree_cells(self, x) -> set:
        out = {x}
        st = [x]
        while st:
            y = st.pop()
            for z in self.kids[y]:
                out.add(z)
                st.append(z)
        return out


def future_enclosure(exp_: Explorer) -> FutureEnclosure:
    return FutureEnclosure(exp_)
