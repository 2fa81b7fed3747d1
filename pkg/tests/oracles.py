"""Slow reference implementations used only by the tests."""
import sys
from fractions import Fraction

sys.setrecursionlimit(10000)


def iterative_core_size(tv, te, region, glue):
    """Vertex count of the root core by repeated cutting.

    While some vertex pair carries two distinct edges, cut the surface
    along that 2-cycle, keep the side holding triangle 0 and glue the two
    edges.  ``region`` must describe a closed surface.
    """
    glue = dict(glue)

    def g(e):
        while e in glue:
            e = glue[e]
        return e

    S = set(region)
    while True:
        bundles = {}
        for t in S:
            vs, es = tv[t], te[t]
            for i in range(3):
                u, v = vs[i], vs[(i + 1) % 3]
                bundles.setdefault((min(u, v), max(u, v)), set()).add(g(es[i]))
        bad = [s for s in bundles.values() if len(s) > 1]
        if not bad:
            return len({v for t in S for v in tv[t]})
        e1, e2 = sorted(bad[0])[:2]
        sides = {}
        for t in S:
            for e in te[t]:
                sides.setdefault(g(e), []).append(t)
        seen = {0}
        st = [0]
        while st:
            t = st.pop()
            for e in te[t]:
                ge = g(e)
                if ge in (e1, e2):
                    continue
                for t2 in sides[ge]:
                    if t2 not in seen:
                        seen.add(t2)
                        st.append(t2)
        S = seen
        glue[e1] = e2


def phi2_by_recurrence(n, m, _memo={}):
    """Type II counts from the root-edge decomposition alone (no closed form)."""
    if n < 0 or m < 0:
        return 0
    key = (n, m)
    if key not in _memo:
        total = 1 if key == (0, 0) else phi2_by_recurrence(n - 1, m + 1)
        for k in range(1, m + 1):
            for j in range(n + 1):
                total += phi2_by_recurrence(j, k - 1) * phi2_by_recurrence(n - j, m - k)
        _memo[key] = total
    return _memo[key]


def exact_tv(p, q):
    keys = set(p) | set(q)
    return sum(abs(p.get(k, Fraction(0)) - q.get(k, Fraction(0))) for k in keys) / 2
