"""Peeling the type II UIPT and looking at its balls.

Run: python3 demos/02_peeling_balls.py
"""
from uipt.maps import canonical_code, to_text, validate
from uipt.mapops import ball, face_tree, rigidity_criterion
from uipt.rng import ExactRng
from uipt.samplers import PeelState, explorer_map, peel_once, uipt_explore

# A few peeling steps with their exact probabilities.
st = PeelState(ExactRng(2024))
for _ in range(8):
    peel_once(st)
for row in st.event_log():
    print(row)
print("frontier length now", st.m + 2)

# Explore until the frontier is three steps from the root, then cut out balls.
E = uipt_explore(4, ExactRng(7))
host = explorer_map(E)
for r in (1, 2, 3):
    b = ball(host, r)
    holes = [L for _, L in b.external]
    print(f"B_{r}: {b.n_vertices()} vertices, {b.n_faces() - len(holes)} triangles, "
          f"holes {holes}, {rigidity_criterion(b)}, valid={validate(b) is None}")

# Every level of the face tree has exactly one hole leading to infinity.
tree = face_tree([ball(host, r) for r in (1, 2, 3)])
for r in (1, 2, 3):
    print(f"level {r}: {len(tree.level(r))} holes, unresolved {tree.unresolved(r)}")

# The text format round-trips.
text = to_text(ball(host, 1))
print(text)
