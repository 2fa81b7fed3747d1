"""Counting triangulations exactly, and checking the counts by brute force.

Run: python3 demos/01_exact_counts.py
"""
from fractions import Fraction

from uipt import exact as ex
from uipt.census import brute_force_census, census_count

# Closed form against an explicit enumeration of small polygons.
print("type  n  m   phi   census")
for t, n, m in [(2, 1, 1), (2, 2, 2), (3, 1, 2), (3, 3, 1)]:
    print(f"{t:>4} {n:>2} {m:>2} {ex.phi(t, n, m):>5} {len(brute_force_census(t, n, m)):>8}")

# The compiled census handles the larger cases without keeping maps around.
print("phi(2, 6, 1) =", ex.phi(2, 6, 1), "census:", census_count(2, 6, 1))

# Spheres are triangles of a 3-gon with the boundary closed up.
print("spheres, type II:", [ex.sphere_count(2, n) for n in range(3, 10)])
print("spheres, type III:", [ex.sphere_count(3, n) for n in range(3, 10)])

# Partition functions at the critical weight come out rational.
for m in range(4):
    z = ex.z_critical(2, m)
    print(f"Z_{m} = {z}  (={float(z):.6f})")
print("empty 2-gon probability under the free law:", ex.free_empty_prob())

# Which of two holes carries the infinite part of the map.
print("infinite face among boundary indices [1, 2]:",
      [str(p) for p in ex.inf_face_distribution(2, [1, 2])])

# One peeling step on a 3-gon frontier.
print("Grow:", ex.peel_grow_prob(1), " Swallow each side:", ex.peel_swallow_prob(1, 1))
assert ex.peel_grow_prob(1) + 2 * ex.peel_swallow_prob(1, 1) == 1
