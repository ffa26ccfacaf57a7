from fractions import Fraction

import pytest

from oddsub.exact import mois_brute, mois_dp
from oddsub.generators import c5_union, cycle, make_rng, path, random_sp, star
from oddsub.graph import build_graph, components, induced_subgraph, s_set
from oddsub.reduction import (
    CaseTableDefect, Configuration, OddCertificate, ReductionStep, apply_lemma1, apply_lemma2,
    configuration_at, construct_odd, find_configuration, plan_branch, verify_certificate,
)
from oddsub.decomposition import StuckCore, recognize_tw2

from gadgets import hub_gadget
from oracles import is_odd

# triangle 0-1-2 with a degree-2 vertex on each side
HAJOS = build_graph([(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5)])


def exact_solver(g):
    return frozenset(mois_dp(g).witness)


def check_cert(g, cert):
    ok, msg = verify_certificate(g, cert)
    assert ok, msg
    assert is_odd(g, cert.set)
    assert cert.size % 2 == 0
    assert 5 * cert.size >= 2 * g.n
    return cert


# -- configurations ---------------------------------------------------------------

def spider():
    # centre 0, legs 0-i-(i+3)
    return build_graph([(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)])


def test_spider_configuration():
    g = spider()
    cfg = find_configuration(g)
    assert cfg.kind == "lemma1" and cfg.u in (1, 2, 3) and cfg.v == 0
    assert s_set(g, cfg.u) == {0}
    assert cfg.t1 == 1 and cfg.t2 == 0


def test_c5_with_pendant_configuration():
    g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)])
    cfg = find_configuration(g)
    assert cfg.kind in ("lemma1", "lemma2")
    assert cfg.t1 + cfg.t2 + (cfg.t3 or 0) > 0


def test_star_configuration():
    assert find_configuration(star(8)) == Configuration("star", 0)


def test_theta_graph_reaches_structure_step():
    # K_{2,3} plus a pendant on every degree-2 vertex: steps (2) and (3) fail
    edges = [(a, c) for a in (0, 1) for c in (2, 3, 4)] + [(2, 5), (3, 6), (4, 7)]
    g = build_graph(edges)
    cfg = find_configuration(g)
    assert cfg.kind in ("lemma1", "lemma2")


def test_configuration_invariants_on_random_graphs():
    for i in range(40):
        g = random_sp(30, 0.5, seed=8, index=i)
        for u in g.vertices:
            cfg = configuration_at(g.adj, u)
            if cfg is None:
                continue
            S = s_set(g, u)
            if cfg.kind == "lemma1":
                assert S == {cfg.v} and cfg.t1 + cfg.t2 > 0
            else:
                assert S == {cfg.v, cfg.w} and cfg.t1 + cfg.t2 + cfg.t3 > 0


# -- single steps -------------------------------------------------------------------

def test_spider_lemma1_step():
    g = spider()
    cert = apply_lemma1(g, find_configuration(g), exact_solver)
    check_cert(g, cert)
    assert cert.size >= 4 and mois_brute(g).size >= 4


def test_double_star_lemma1_step():
    g = build_graph([(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
    cfg = configuration_at(g.adj, 0)
    assert cfg.kind == "lemma1" and cfg.v == 1
    cert = apply_lemma1(g, cfg, exact_solver)
    check_cert(g, cert)
    assert cert.size >= 4
    assert mois_brute(g).size == 6


def test_p4_is_a_base_case():
    cert = construct_odd(path(4))
    assert [s.branch for s in cert.trace] == ["base/brute"]
    assert cert.size == 2


def test_kind_mismatch_rejected():
    g = spider()
    with pytest.raises(ValueError):
        apply_lemma2(g, find_configuration(g), exact_solver)


def lemma2_hub(t1, t2, t3, uv=False, uw=False):
    """Hub u=0 with anchors v=1, w=2 (adjacent), a leaf on each anchor, and
    the requested kit.  Returns the graph and u's configuration."""
    edges = [(1, 2), (1, 3), (2, 4)]   # v-w, leaf x=3 on v, leaf y=4 on w
    nxt = 5
    for _ in range(t1):
        edges.append((0, nxt)); nxt += 1
    for anchor, t in ((1, t2), (2, t3)):
        for _ in range(t):
            edges += [(0, nxt), (nxt, anchor)]; nxt += 1
    if uv:
        edges.append((0, 1))
    if uw:
        edges.append((0, 2))
    g = build_graph(edges)
    return g, configuration_at(g.adj, 0)


def test_routing_exception_a():
    g, cfg = lemma2_hub(1, 1, 1)
    assert cfg.kind == "lemma2" and not cfg.uw_edge
    label, removed = plan_branch(g, cfg)
    assert label.startswith("L2/C2/l6c9a")
    # V0 = (N(u) + {u, x}) minus the anchors
    assert removed == frozenset(g.adj[0] | {0, 3}) - {1, 2}
    check_cert(g, apply_lemma2(g, cfg, exact_solver))


def test_routing_reset_p():
    g, cfg = lemma2_hub(4, 2, 2)
    label, removed = plan_branch(g, cfg)
    assert label == "L2/C2/S2.2/reset-p"
    assert removed == frozenset(g.adj[0] | {0})
    cert = apply_lemma2(g, cfg, exact_solver)
    check_cert(g, cert)
    step = cert.trace[0]
    assert len(step.added) == 4 and 0 in step.added
    assert set(step.added) - {0} <= {v for v in g.adj[0] if g.degree(v) == 1}


def test_routing_claim_b_swap():
    # t1+t2 = t3 = 2 with uw absent and uv present: the assembly may swap out x
    g, cfg = lemma2_hub(1, 1, 2, uv=True)
    label, _ = plan_branch(g, cfg)
    assert label.startswith("L2/C2/l6c9b") or label.startswith("L2/C2/l6c6-reset")
    check_cert(g, apply_lemma2(g, cfg, exact_solver))


def test_every_configuration_of_hub_gadgets():
    rng = make_rng(31)
    labels = set()
    for i in range(600):
        g, _ = hub_gadget(rng, i)
        if isinstance(recognize_tw2(g), StuckCore):
            continue
        for u in g.vertices:
            cfg = configuration_at(g.adj, u)
            if cfg is None:
                continue
            _, removed = plan_branch(g, cfg)
            rest = g.remove_vertices(removed)
            if rest.isolated_vertices():
                continue
            if rest.n and 5 * mois_dp(rest).size < 2 * rest.n:
                continue   # the residual itself breaks the 2/5 hypothesis
            apply = apply_lemma1 if cfg.kind == "lemma1" else apply_lemma2
            try:
                cert = apply(g, cfg, exact_solver)
            except CaseTableDefect:
                comp = next(c for c in components(g) if u in c)
                sub = induced_subgraph(g, comp)
                assert 5 * mois_dp(sub).size < 2 * sub.n
                continue
            assert is_odd(g, cert.set)
            assert cert.trace[0].ratio_ok()
            labels.add(cert.trace[0].branch.split("/")[1])
    assert labels >= {"C1", "C2", "claim-l6c2"}


# -- driver -----------------------------------------------------------------------------

def test_three_c5_exactly_two_fifths():
    g = c5_union(3)
    cert = check_cert(g, construct_odd(g))
    assert cert.size == 6 and cert.ratio == Fraction(2, 5)


def test_star_rules():
    assert construct_odd(star(5)).size == 4       # K_{1,4}: centre plus three leaves
    assert construct_odd(star(8)).size == 8       # K_{1,7}: whole star
    big = star(40)
    cert = check_cert(big, construct_odd(big))
    assert cert.size == 40 and cert.trace[0].branch == "base/star"


def test_random_sp_200():
    g = random_sp(200, 0.6, seed=2026)
    cert = check_cert(g, construct_odd(g))
    assert cert.size >= 80 and not cert.fallback_used
    labels = {s.branch.split("/")[0] for s in cert.trace}
    assert labels & {"L1", "L2"}


def test_trace_partitions_vertices():
    g = random_sp(120, 0.4, seed=5)
    cert = construct_odd(g)
    removed = [v for s in cert.trace for v in s.removed]
    assert sorted(removed) == list(g.vertices)
    assert all(s.ratio_ok() for s in cert.trace)


def test_residual_never_cut_into_a_deficient_piece():
    # this instance once produced a residual component isomorphic to HAJOS
    g = random_sp(53, 0.8, seed=7, index=20)
    cert = check_cert(g, construct_odd(g))
    assert not cert.fallback_used


def test_hajos_graph_breaks_two_fifths():
    # treewidth 2, no isolated vertices, yet f = 2 on six vertices
    assert not isinstance(recognize_tw2(HAJOS), StuckCore)
    assert mois_brute(HAJOS).size == 2
    cert = construct_odd(HAJOS)
    assert cert.size == 2 and is_odd(HAJOS, cert.set)
    ok, msg = verify_certificate(HAJOS, cert)
    assert not ok and "ratio" in msg


def test_construct_rejects_bad_input():
    with pytest.raises(ValueError, match="isolated"):
        construct_odd(build_graph([(0, 1)], vertices=[0, 1, 2]))
    k4 = build_graph([(a, b) for a in range(4) for b in range(a + 1, 4)])
    with pytest.raises(ValueError, match="treewidth"):
        construct_odd(k4)


def test_disconnected_input():
    g = build_graph([(0, 1)] + [(a + 10, b + 10) for a, b in random_sp(60, 0.5, seed=1).edges()])
    check_cert(g, construct_odd(g))


# -- verification -----------------------------------------------------------------------

def test_verify_examples():
    c5 = cycle(5)
    assert verify_certificate(c5, [0, 1]) == (True, "ok")
    ok, msg = verify_certificate(c5, [0, 1, 2])
    assert not ok and msg == "vertex 1 has even degree"
    forged = OddCertificate(frozenset({0, 1}), 5, ratio=Fraction(3, 5))
    ok, msg = verify_certificate(c5, forged)
    assert not ok and "ratio" in msg


def test_verify_rejects_tampered_trace():
    g = random_sp(40, 0.5, seed=3)
    cert = construct_odd(g)
    steps = list(cert.trace)
    s = steps[0]
    steps[0] = ReductionStep(s.branch, s.removed, s.added[:-1], s.dropped)
    ok, msg = verify_certificate(g, OddCertificate(cert.set, g.n, steps))
    assert not ok and ("trace" in msg or "ratio" in msg)
    ok, msg = verify_certificate(g, OddCertificate(cert.set, g.n, steps[1:]))
    assert not ok


def test_certificate_json():
    cert = construct_odd(c5_union(2))
    rec = cert.to_json()
    assert set(rec) == {"set", "size", "ratio", "trace", "fallback_used"}
    assert rec["ratio"] == "2/5" and rec["size"] == 4
    assert set(rec["trace"][0]) >= {"branch", "removed", "added"}
