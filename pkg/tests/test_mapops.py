from collections import Counter
from fractions import Fraction

import pytest

from uipt.census import sphere_census
from uipt.exact import DomainError
from uipt.maps import (MapError, canonical_code, double_pyramid, from_triangles, reroot,
                       single_triangle, tetrahedron, validate)
from uipt.mapops import (all_roots, ball, contains, face_tree, rigidity_criterion, rw_reroot,
                         uniform_reroot, vertex_distances)
from uipt.rng import ExactRng
from uipt.samplers import explorer_map, sample_uniform, uipt_explore, _ball_from_explorer
from uipt.experiments import uniform_sphere


def test_ball_radius_zero_is_a_point():
    b = ball(tetrahedron(), 0)
    assert b.is_point
    with pytest.raises(DomainError):
        ball(tetrahedron(), -1)


def test_ball_of_tetrahedron():
    t = tetrahedron()
    b1 = ball(t, 1)
    assert validate(b1) is None
    assert len(b1.external) == 1 and b1.external[0][1] == 3
    assert b1.n_faces() - 1 == 3
    assert canonical_code(ball(t, 2)) == canonical_code(t)


def test_ball_of_double_pyramid():
    d = double_pyramid(5)
    b1 = ball(d, 1)
    assert b1.external[0][1] == 5 and b1.n_faces() == 6
    assert canonical_code(ball(d, 2)) == canonical_code(d)
    assert canonical_code(ball(d, 5)) == canonical_code(d)


def test_ball_host_ids():
    d = double_pyramid(4)
    b = ball(d, 1)
    assert b.host is d
    for h, x in enumerate(b.host_ids):
        if x >= 0:
            assert d.origin[x] is not None
            assert (b.origin[h] == b.origin[b.root]) == (d.origin[x] == d.origin[d.root])


def test_ball_needs_revealed_region():
    E = uipt_explore(2, ExactRng(4))
    host = explorer_map(E)
    ball(host, 2)
    with pytest.raises(MapError):
        ball(host, 6)


def test_ball_agrees_with_sampler_balls():
    for seed in range(20):
        E = uipt_explore(4, ExactRng(seed))
        host = explorer_map(E)
        for r in (1, 2, 3):
            b = ball(host, r)
            assert validate(b) is None
            assert canonical_code(b) == canonical_code(_ball_from_explorer(E, r))


def test_vertex_distances():
    d = double_pyramid(6)
    dist = vertex_distances(d)
    assert sorted(Counter(dist.values()).items()) == [(0, 1), (1, 6), (2, 1)]


def _census_index(nv):
    maps = sphere_census(2, nv)
    return maps, {canonical_code(m): i for i, m in enumerate(maps)}


def _uniform_kernel(mp):
    roots = all_roots(mp)
    return [(Fraction(1, len(roots)), reroot(mp, h, s)) for h, s in roots]


def _rw_kernel(mp):
    x = mp.origin[mp.root]
    n = len(mp.twin)
    out = [h for h in range(n) if mp.origin[h] == x]
    res = []
    for h in out:
        y = mp.origin[mp.twin[h]]
        at_y = [g for g in range(n) if mp.origin[g] == y]
        for g in at_y:
            for s in (0, 1):
                res.append((Fraction(1, len(out) * 2 * len(at_y)), reroot(mp, g, s)))
    return res


@pytest.mark.parametrize("kernel", [_uniform_kernel, _rw_kernel])
def test_rerooting_preserves_uniform_law(kernel):
    maps, idx = _census_index(5)
    col = [Fraction(0)] * len(maps)
    for mp in maps:
        for p, mp2 in kernel(mp):
            col[idx[canonical_code(mp2)]] += p
    assert all(c == 1 for c in col)


def test_rerooters_stay_in_class():
    rng = ExactRng(5)
    mp = uniform_sphere(6, rng)
    for _ in range(20):
        a = uniform_reroot(mp, rng)
        b = rw_reroot(mp, rng)
        assert validate(a) is None and validate(b) is None
        assert a.n_vertices() == b.n_vertices() == 6
    with pytest.raises(MapError):
        uniform_reroot(single_triangle(), rng)


def test_rigidity():
    assert rigidity_criterion(tetrahedron()) == "Rigid"
    assert rigidity_criterion(ball(double_pyramid(5), 1)) == "Rigid"
    for seed in range(10):
        E = uipt_explore(3, ExactRng(seed))
        assert rigidity_criterion(_ball_from_explorer(E, 2)) == "Rigid"
    # two triangles meeting at a single vertex
    pinched = from_triangles([(0, 1, 2), (0, 3, 4)], [], (0, 0))
    assert rigidity_criterion(pinched) == "Unknown"
    with pytest.raises(MapError):
        rigidity_criterion(ball(tetrahedron(), 0))


def test_contains():
    t = tetrahedron()
    assert contains(t, ball(t, 1))
    assert contains(t, single_triangle())
    assert contains(t, ball(t, 0))
    d = double_pyramid(5)
    assert contains(d, ball(d, 1))
    # the 5-wheel is not around the root of the tetrahedron
    assert not contains(t, ball(d, 1))
    # a 3-wheel sits in a sphere only if the root vertex has degree 3
    w3 = ball(t, 1)
    assert not contains(double_pyramid(4), w3)


def test_face_tree_of_uipt_has_one_unresolved_branch():
    for seed in range(8):
        E = uipt_explore(6, ExactRng(seed))
        host = explorer_map(E)
        tree = face_tree([ball(host, r) for r in range(1, 6)])
        assert tree.depth == 5
        for r in range(1, 6):
            assert len(tree.unresolved(r)) == 1
        # the unresolved faces form a chain
        chain = [tree.unresolved(r)[0] for r in range(1, 6)]
        for a, b in zip(chain, chain[1:]):
            assert tree.nodes[b].parent == a


def test_face_tree_of_finite_sphere():
    mp = uniform_sphere(8, ExactRng(2))
    balls = [ball(mp, r) for r in range(1, 8)]
    tree = face_tree(balls)
    assert all(n.resolved for n in tree.nodes)
    full = next(r for r, b in enumerate(balls, 1) if canonical_code(b) == canonical_code(mp))
    assert tree.level(full) == []
    with pytest.raises(DomainError):
        face_tree([])
