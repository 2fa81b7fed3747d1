"""The 3-connected core of the root and the type III UIPT.

Run: python3 demos/03_core_and_type3.py   (about a minute)
"""
from collections import Counter

from uipt import exact as ex
from uipt.maps import canonical_code, double_pyramid
from uipt.rng import ExactRng
from uipt.samplers import (core_classify, edge_inflate, sample_type3_ball,
                           three_connected_core)

# Inflating every edge of a simple sphere and taking the core gives it back.
d = double_pyramid(5)
big = edge_inflate(d, ExactRng(3))
print("inflated:", big.n_vertices(), "vertices; core:", three_connected_core(big).n_vertices())
assert canonical_code(three_connected_core(big)) == canonical_code(d)

# Core sizes in the type II UIPT, against the exact law.
n = 5000
c = Counter(core_classify(10_000, ExactRng(11, i)).label() for i in range(n))
print("InfiniteCore", c["InfiniteCore"] / n, "vs 0.5")
for k in (3, 4, 5):
    print(f"FiniteCore({k})", c[f"FiniteCore({k})"] / n, "vs", float(ex.core_size_prob(k)))
print("Unresolved", c["Unresolved"] / n)

# Root degree in the type III UIPT.  Bins are noisy at this size (about 0.002).
n3 = 30_000
deg = Counter(sample_type3_ball(1, 10_000, ExactRng(12, i)).root_degree for i in range(n3))
for k in (3, 4, 5, 6):
    print(f"deg {k}: {deg[k] / n3:.4f} vs {float(ex.deg3_limit(k)):.4f}")
