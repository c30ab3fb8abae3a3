import math
import random

import numpy as np
import pytest

from streammatch import (
    Graph,
    Matching,
    Phase,
    UnknownEdgeError,
    check_dichotomy,
    check_edcs,
    classify_lucky,
    make_stream,
    max_matching,
    params_with_betas,
    path_census,
    run_sparsifier,
    sample_binomial,
)
from util import random_bipartite, random_general


def _sparsifier_run(seed: int, bipartite: bool = True):
    rnd = random.Random(seed)
    g = random_bipartite(rnd, 15, 15, 0.3) if bipartite else random_general(rnd, 25, 0.15)
    params = params_with_betas(0.3, 10, 8)
    s = make_stream(g, seed)
    sp = run_sparsifier(s, params)
    suffix = s.slice(sp.eps_cut + 1, len(s))
    return g, s, sp, params, suffix


# ---------------------------------------------------------------------------
# sparsifier property checks


def test_check_edcs_passes_on_real_runs():
    for seed in range(10):
        g, _, sp, params, suffix = _sparsifier_run(seed)
        report = check_edcs(g, sp.h, sp.u, params, suffix)
        assert report.ok, report


def test_check_edcs_flags_degree_violation():
    # star with center degree 4: every edge has edge-degree 5 > beta_plus=4
    h = Graph(5, [(0, i) for i in range(1, 5)])
    params = params_with_betas(0.1, 4, 4)
    report = check_edcs(h, h, set(), params, ())
    assert not report.degree_cap_ok
    assert report.cap_violations
    assert not report.ok


def test_check_edcs_flags_tampered_u():
    for seed in range(20):
        g, _, sp, params, suffix = _sparsifier_run(seed)
        if not sp.u:
            continue
        tampered = set(sp.u)
        tampered.pop()
        report = check_edcs(g, sp.h, tampered, params, suffix)
        assert not report.u_exact and report.u_missing
        return
    pytest.fail("no run produced a nonempty U")


# ---------------------------------------------------------------------------
# dichotomy


def test_dichotomy_branch1_when_h_is_g():
    for delta in (0.05, 0.1, 0.2):
        rep = check_dichotomy(40, 40, 40, lam=0.01, delta=delta, bipartite=True)
        assert rep.branch1_holds and rep.holds


def test_dichotomy_branch2_when_h_empty():
    rep = check_dichotomy(40, 0, 40, lam=0.01, delta=0.1, bipartite=True)
    assert not rep.branch1_holds
    assert rep.branch2_holds and rep.holds


def test_dichotomy_constants_differ_by_case():
    bip = check_dichotomy(30, 15, 20, lam=0.05, delta=0.1, bipartite=True)
    gen = check_dichotomy(30, 15, 20, lam=0.05, delta=0.1, bipartite=False)
    assert bip.margin1 < gen.margin1  # (1-4lam) vs (1-8lam) thresholds
    assert bip.margin2 < gen.margin2


def test_dichotomy_margin_signs_match_flags():
    rep = check_dichotomy(50, 20, 30, lam=0.1, delta=0.2, bipartite=False)
    assert rep.branch1_holds == (rep.margin1 >= -1e-9)
    assert rep.branch2_holds == (rep.margin2 >= -1e-9)


def test_dichotomy_rejects_bad_delta():
    with pytest.raises(ValueError):
        check_dichotomy(10, 5, 5, lam=0.1, delta=0.0, bipartite=True)


def test_dichotomy_sweep_on_sparsifier_runs():
    for seed in range(40):
        bipartite = seed % 2 == 0
        g, _, sp, params, _ = _sparsifier_run(seed, bipartite=bipartite)
        mu_g = len(max_matching(g))
        if mu_g == 0:
            continue
        mu_h = len(max_matching(sp.h))
        mu_hu = len(
            max_matching(
                Graph(g.n, sorted(sp.h.edge_set | sp.u), g.bipartition)
            )
        )
        for delta in (0.05, 0.1, 0.2):
            rep = check_dichotomy(mu_g, mu_h, mu_hu, params.lam, delta, bipartite)
            assert rep.holds, (seed, delta, rep)


# ---------------------------------------------------------------------------
# path census


def test_census_identical_matchings():
    m = Matching([(0, 1), (2, 3)])
    cen = path_census(m, m)
    assert cen.paths == ()
    assert cen.short_path_bound_holds  # 0 >= |M*| - (4/3)|M*|


def test_census_empty_m_h_gives_length_one_paths():
    m_star = Matching([(0, 1), (2, 3), (4, 5)])
    cen = path_census(m_star, Matching())
    assert cen.counts == {1: 3, 3: 0, 5: 0}
    assert cen.short_path_bound_holds


def test_census_collects_three_and_five_paths():
    m_h = Matching([(1, 2), (4, 5), (6, 7)])
    m_star = Matching([(0, 1), (2, 3), (5, 6), (8, 9)])
    cen = path_census(m_star, m_h)
    # component 0-1-2-3 is a length-3 augmenting path; 4-5-6-7 is an
    # alternating path that starts with an M_H edge, so not augmenting
    assert cen.counts == {1: 1, 3: 1, 5: 0}
    lengths = sorted(len(p.edges) for p in cen.paths)
    assert lengths == [1, 3]


def test_census_ignores_long_paths_and_cycles():
    # 4-cycle: m_h and m_star alternate; plus a length-7 augmenting path
    m_h = Matching([(0, 1), (2, 3), (11, 12), (13, 14), (15, 16)])
    m_star = Matching([(1, 2), (0, 3), (10, 11), (12, 13), (14, 15), (16, 17)])
    cen = path_census(m_star, m_h)
    assert cen.paths == ()


def test_census_structure_on_random_instances():
    rnd = random.Random(6)
    for trial in range(60):
        g = random_bipartite(rnd, 12, 13, 0.3)
        if not g.edges:
            continue
        m_star = max_matching(g)
        m_h = Matching()
        for u, v in g.edges:
            if rnd.random() < 0.4 and not m_h.is_matched(u) and not m_h.is_matched(v):
                m_h.add(u, v)
        cen = path_census(m_star, m_h)
        assert cen.short_path_bound_holds
        for p in cen.paths:
            assert len(p.edges) in (1, 3, 5)
            assert not m_h.is_matched(p.vertices[0])
            assert not m_h.is_matched(p.vertices[-1])
            for i, e in enumerate(p.edges):
                assert (e in m_h) == (i % 2 == 1)


# ---------------------------------------------------------------------------
# lucky classification


def _census_fixture():
    m_h = Matching([(1, 2), (4, 5), (7, 8), (9, 10)])
    m_star = Matching([(0, 1), (2, 3), (20, 21), (6, 7), (8, 9), (10, 11)])
    return path_census(m_star, m_h)


def test_classify_lucky_cases():
    cen = _census_fixture()
    assert cen.counts == {1: 1, 3: 1, 5: 1}
    phases = {}
    for p in cen.paths:
        es = p.edges
        if len(es) == 1:
            phases[es[0]] = Phase.IIB
        elif len(es) == 3:
            phases[es[0]] = Phase.IIA
            phases[es[1]] = Phase.I
            phases[es[2]] = Phase.IIB  # endpoint in II.B: not lucky
        else:
            phases[es[0]] = Phase.IIA
            phases[es[1]] = Phase.I
            phases[es[2]] = Phase.IIB
            phases[es[3]] = Phase.I
            phases[es[4]] = Phase.IIA
    out = classify_lucky(cen, phases)
    assert out.lucky_counts == {1: 1, 3: 0, 5: 1}


def test_classify_lucky_unknown_edge():
    cen = _census_fixture()
    with pytest.raises(UnknownEdgeError):
        classify_lucky(cen, {})


def test_classify_lucky_idempotent():
    cen = _census_fixture()
    phases = {e: Phase.IIA for p in cen.paths for e in p.edges}
    first = classify_lucky(cen, phases)
    second = classify_lucky(first, phases)
    assert [p.vertices for p in first.lucky] == [p.vertices for p in second.lucky]
    assert first.paths == cen.paths


def test_lucky_rate_small_monte_carlo():
    # 12 disjoint length-5 augmenting paths; random phase splits at
    # gamma=2/3 make each lucky with probability 4/27
    comps = 12
    m_h_edges, m_star_edges = [], []
    for c in range(comps):
        base = 6 * c
        m_h_edges += [(base + 1, base + 2), (base + 3, base + 4)]
        m_star_edges += [(base, base + 1), (base + 2, base + 3), (base + 4, base + 5)]
    cen = path_census(Matching(m_star_edges), Matching(m_h_edges))
    assert cen.counts[5] == comps
    edges = [e for p in cen.paths for e in p.edges]
    rng = np.random.default_rng(31337)
    trials = 400
    lucky_total = 0
    for _ in range(trials):
        perm = rng.permutation(len(edges))
        tau = sample_binomial(len(edges), 2 / 3, rng)
        phases = {}
        for rank, idx in enumerate(perm):
            phases[edges[idx]] = Phase.IIA if rank < tau else Phase.IIB
        lucky_total += classify_lucky(cen, phases).lucky_counts[5]
    rate = lucky_total / (trials * comps)
    p = 4 / 27
    se = math.sqrt(p * (1 - p) / (trials * comps))
    assert abs(rate - p) <= 3 * se, rate
