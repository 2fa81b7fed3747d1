from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chisquare

from uipt import exact as ex
from uipt.census import brute_force_census, sphere_census
from uipt.exact import DomainError
from uipt.maps import canonical_code, validate, tetrahedron, double_pyramid, internal_vertex_count
from uipt.rng import EPS
from uipt.peeling import (BudgetExceeded, Explorer, PEEL_POLICIES, free_table,
                          peel_table)
from uipt.rng import ExactRng
from uipt.samplers import (PeelState, core_classify, edge_inflate, peel_once,
                           peel_step_distribution, sample_free, sample_type3_ball,
                           sample_uniform, three_connected_core, uipt_ball, uipt_explore,
                           _enclosed_core_size, _map_triangles)
from uipt.experiments import uniform_sphere

from oracles import iterative_core_size


def test_peel_step_distribution():
    d = peel_step_distribution(1)
    assert [e.probability for e in d] == [Fraction(5, 6), Fraction(1, 12), Fraction(1, 12)]
    assert [e.label() for e in d] == ["Grow", "Swallow(L,1)", "Swallow(R,1)"]
    for m in (0, 2, 7, 40):
        assert sum(e.probability for e in peel_step_distribution(m)) == 1
    with pytest.raises(DomainError):
        peel_step_distribution(-1)


@pytest.mark.parametrize("m", [1, 2, 5, 30, 200])
def test_float_tables_track_exact_ones(m):
    for table in (peel_table(m), free_table(m)):
        assert len(table.approx) == len(table.exact)
        for a, e in zip(table.approx, table.exact):
            assert abs(a - float(e)) < EPS / 10
        assert all(x < y for x, y in zip(table.exact, table.exact[1:]))


def test_free_sampler_maps_are_valid():
    for m in range(5):
        for seed in range(30):
            fs = sample_free(m, ExactRng(seed, m))
            assert validate(fs.map) is None
            assert fs.map.external[0][1] == m + 2
            assert internal_vertex_count(fs.map) == fs.size


def test_free_sampler_size_law():
    z1 = ex.z_critical(2, 1)
    a = ex.constants(2).alpha
    p = [Fraction(ex.phi(2, n, 1)) / a ** n / z1 for n in range(3)]
    n = 20000
    c = Counter(min(sample_free(1, ExactRng(9, i)).size, 3) for i in range(n))
    exp = [float(x) * n for x in p] + [float(1 - sum(p)) * n]
    assert chisquare([c[k] for k in range(4)], exp).pvalue > 1e-4
    assert p[0] == Fraction(16, 27)


@pytest.mark.parametrize("t,nn,m", [(2, 2, 1), (2, 1, 2), (3, 2, 2), (2, 3, 0)])
def test_uniform_sampler_is_uniform(t, nn, m):
    maps = brute_force_census(t, nn, m)
    idx = {canonical_code(mp): i for i, mp in enumerate(maps)}
    n = 200 * len(maps)
    c = Counter(idx[canonical_code(sample_uniform(t, nn, m, ExactRng(5, i)))] for i in range(n))
    assert len(c) == len(maps)
    assert chisquare([c[i] for i in range(len(maps))]).pvalue > 1e-4


def test_uniform_sampler_large():
    mp = sample_uniform(2, 60, 10, ExactRng(1))
    assert validate(mp) is None
    assert internal_vertex_count(mp) == 60
    with pytest.raises(DomainError):
        sample_uniform(3, 9, 1, ExactRng(1))


def test_uipt_ball_is_valid_and_rigid():
    for policy in PEEL_POLICIES:
        for seed in range(10):
            b = uipt_ball(3, policy, ExactRng(seed))
            assert validate(b) is None
            assert len(b.external) >= 1
    assert uipt_ball(0).is_point


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        uipt_ball(12, rng=ExactRng(1), budget=20)
    with pytest.raises(DomainError):
        core_classify(0, ExactRng(2))


def test_core_classify_budget_gives_unresolved():
    labels = Counter(core_classify(4, ExactRng(3, i)).label() for i in range(50))
    assert labels["Unresolved"] > 0


def test_peeling_determinism():
    a = uipt_ball(4, "random-min", ExactRng(77))
    b = uipt_ball(4, "random-min", ExactRng(77))
    assert canonical_code(a) == canonical_code(b)
    ra = [core_classify(10_000, ExactRng(5, i)).label() for i in range(30)]
    rb = [core_classify(10_000, ExactRng(5, i)).label() for i in range(30)]
    assert ra == rb


def test_event_log():
    st = PeelState(ExactRng(8))
    for _ in range(30):
        peel_once(st)
    log = st.event_log()
    assert [row["step"] for row in log] == list(range(1, 31))
    m = 1
    for row in log:
        assert row["m_before"] == m
        p = Fraction(row["probability"])
        assert "/" in row["probability"]
        if row["event"] == "Grow":
            assert row["m_after"] == m + 1
            assert p == ex.peel_grow_prob(m)
        else:
            k = int(row["event"].split(",")[1].rstrip(")"))
            assert row["m_after"] == m - k
            assert p == ex.peel_swallow_prob(m, k)
        m = row["m_after"]
    assert st.m == m
    assert validate(st.revealed) is None
    assert set(st.dist) == set(st.explorer.F)
    assert all(d >= 0 for d in st.dist.values())


def test_event_frequencies():
    # first step of the exploration follows the exact one-step law
    n = 20000
    c = Counter()
    for i in range(n):
        E = Explorer(ExactRng(12, i), trace=True)
        E.step(E.pick())
        c[E.trace[0][3]] += 1
    exp = {("G", 0): Fraction(5, 6), ("L", 1): Fraction(1, 12), ("R", 1): Fraction(1, 12)}
    assert chisquare([c[k] for k in exp], [float(v) * n for v in exp.values()]).pvalue > 1e-4


def test_enclosed_core_matches_iterative_oracle():
    checked = 0
    for seed in range(400):
        E = Explorer(ExactRng(21, seed))
        for _ in range(30):
            E.step(E.pick())
            if E.cands and E.check_enclosure():
                seen, o, n = E.enclosure
                assert _enclosed_core_size(E) == iterative_core_size(E.tv, E.te, seen, {n: o})
                checked += 1
                break
    assert checked > 50


def _root_first(mp):
    tris, eids, where = _map_triangles(mp)
    rt = where[mp.root][0]
    order = [rt] + [t for t in range(len(tris)) if t != rt]
    return [tris[t] for t in order], [eids[t] for t in order]


def test_sphere_core_matches_iterative_oracle():
    for nv in (5, 6):
        for mp in sphere_census(2, nv):
            core = three_connected_core(mp)
            assert validate(core, 3) is None
            tv, te = _root_first(mp)
            assert core.n_vertices() == iterative_core_size(tv, te, range(len(tv)), {})
    rng = ExactRng(4)
    for _ in range(40):
        mp = uniform_sphere(20, rng)
        tv, te = _root_first(mp)
        assert three_connected_core(mp).n_vertices() == iterative_core_size(tv, te, range(len(tv)), {})


def test_core_of_type3_is_identity():
    for mp in sphere_census(3, 6):
        assert canonical_code(three_connected_core(mp)) == canonical_code(mp)


def test_edge_inflate_round_trip():
    rng = ExactRng(6)
    for base in (tetrahedron(), double_pyramid(5)):
        code = canonical_code(base)
        grew = 0
        for _ in range(30):
            big = edge_inflate(base, rng)
            assert validate(big) is None
            grew += big.n_vertices() > base.n_vertices()
            assert canonical_code(three_connected_core(big)) == code
        assert grew > 0


def test_type3_balls():
    for seed in range(15):
        res = sample_type3_ball(2, 10_000, ExactRng(31, seed))
        assert res.map is not None
        assert validate(res.map, 3) is None
        assert res.root_degree >= 3


def test_type3_unresolved_on_tiny_budget():
    res = sample_type3_ball(6, 5, ExactRng(1))
    assert res.map is None


def test_free_two_gon_size_law():
    a = ex.constants(2).alpha
    z0 = ex.z_critical(2, 0)
    law = {n: Fraction(ex.phi(2, n, 0)) / a ** n / z0 for n in range(5)}
    n = 100_000
    c = Counter(sample_free(0, ExactRng(13, i)).size for i in range(n))
    tv = 0.5 * sum(abs(c[k] / n - float(p)) for k, p in law.items())
    tv += 0.5 * abs(sum(v for k, v in c.items() if k > 4) / n - float(1 - sum(law.values())))
    assert tv < 0.02
