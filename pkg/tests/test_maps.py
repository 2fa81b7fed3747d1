import random

import pytest
from hypothesis import given, settings, strategies as st

from uipt.exact import TriType
from uipt.maps import (MapError, RootedMap, canonical_code, double_pyramid,
                       from_edge_ids, from_text, glued_digon, internal_vertex_count, mirror,
                       relabel, reroot, root_degree, single_triangle, tetrahedron, to_text,
                       validate, code_digest)
from uipt.mapops import all_roots
from uipt.rng import ExactRng
from uipt.samplers import sample_uniform


def shuffled(m, rnd):
    n = len(m.twin)
    perm = list(range(n))
    rnd.shuffle(perm)
    vs = sorted(set(m.origin))
    vimg = vs[:]
    rnd.shuffle(vimg)
    return relabel(m, perm, dict(zip(vs, vimg)))


def test_examples_are_valid():
    for m in (tetrahedron(), single_triangle(), glued_digon(), double_pyramid(3),
              double_pyramid(5)):
        assert validate(m) is None
    assert validate(tetrahedron(), TriType.TypeIII) is None
    assert validate(double_pyramid(5), "III") is None


def test_basic_counts():
    t = tetrahedron()
    assert (t.n_vertices(), t.n_edges(), t.n_faces()) == (4, 6, 4)
    assert root_degree(t) == 3
    d = double_pyramid(5)
    assert (d.n_vertices(), d.n_edges(), d.n_faces()) == (7, 15, 10)
    assert root_degree(d) == 5
    s = single_triangle()
    assert s.external == ((s.face_of()[s.twin[s.root]], 3),)
    assert internal_vertex_count(s) == 0


def test_validate_catches_violations():
    t = tetrahedron()
    bad_twin = RootedMap((t.twin[1],) + t.twin[1:], t.nxt, t.origin, 0)
    assert validate(bad_twin) is not None
    nxt = list(t.nxt)
    nxt[0], nxt[1] = nxt[1], nxt[0]
    assert validate(RootedMap(t.twin, tuple(nxt), t.origin, 0)) is not None
    origin = list(t.origin)
    origin[0] = 99
    assert validate(RootedMap(t.twin, t.nxt, tuple(origin), 0)) == "origin inconsistent with rotation"
    assert validate(RootedMap(t.twin, t.nxt, t.origin, 99)) == "root out of range"
    assert validate(RootedMap(t.twin, t.nxt, t.origin, 0, ((0, 4),))) == "external face length mismatch"


def test_multiple_edge_rejected_for_type3():
    # two triangles sharing both endpoints of two distinct edges
    m = from_edge_ids([(0, 1, 2), (1, 0, 2)], [("x", "b", "c"), ("x", "c", "b2")])
    assert validate(m) is None
    assert validate(m, 3) == "multiple edge"


def test_relabel_invariance():
    rnd = random.Random(7)
    maps = [tetrahedron(), double_pyramid(6)]
    maps += [sample_uniform(2, 3, 2, ExactRng(s)) for s in range(3)]
    for m in maps:
        code = canonical_code(m)
        for _ in range(200):
            r = shuffled(m, rnd)
            assert validate(r) is None
            assert canonical_code(r) == code


def test_codes_separate_roots():
    d = double_pyramid(5)
    codes = {canonical_code(reroot(d, h, s)) for h, s in all_roots(d)}
    # 60 roots under a symmetry group of order 20
    assert len(codes) == 3


def test_tetrahedron_all_roots_equivalent():
    t = tetrahedron()
    roots = all_roots(t)
    assert len(roots) == 24
    codes = {canonical_code(reroot(t, h, s)) for h, s in roots}
    assert len(codes) == 1


def test_mirror_is_involution():
    m = sample_uniform(2, 4, 1, ExactRng(3))
    assert canonical_code(mirror(mirror(m))) == canonical_code(m)


def test_text_round_trip_examples():
    for m in (tetrahedron(), glued_digon(), single_triangle(), double_pyramid(4)):
        s = to_text(m)
        back = from_text(s)
        assert to_text(back) == s
        assert back == m


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 9), n=st.integers(0, 6), m=st.integers(0, 4),
       perm_seed=st.integers(0, 10 ** 6))
def test_text_round_trip_random(seed, n, m, perm_seed):
    mp = shuffled(sample_uniform(2, n, m, ExactRng(seed)), random.Random(perm_seed))
    s = to_text(mp)
    assert to_text(from_text(s)) == s


def test_text_rejects_tampering():
    d = double_pyramid(5)
    s = to_text(d)
    other = next(h for h in range(len(d.twin))
                 if canonical_code(reroot(d, h)) != canonical_code(d))
    with pytest.raises(MapError):
        from_text(s.replace("root 0", f"root {other}"))
    with pytest.raises(MapError):
        from_text("not a map\n")


def test_digest_is_stable():
    assert code_digest(canonical_code(tetrahedron())) == code_digest(
        canonical_code(shuffled(tetrahedron(), random.Random(1))))
    assert len(code_digest(b"x")) == 16
