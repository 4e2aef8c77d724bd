import itertools

import pytest

import mstperc as m


def small_field(kind=m.LatticeKind.SquareBond, n=5, seed=3):
    return m.sample_uniform(m.Lattice(kind, n), seed)


def test_lattice_shape():
    sq = m.Lattice(m.LatticeKind.SquareBond, 4)
    assert sq.num_sites == 16
    assert sq.num_edges == 24
    assert sq.num_carriers == 24
    tri = m.Lattice(m.LatticeKind.TriangularSite, 4)
    assert tri.num_carriers == 16
    assert tri.num_sites > 16


def test_mst_agrees_with_cycle_rule_and_invasion():
    for kind in (m.LatticeKind.SquareBond, m.LatticeKind.TriangularSite):
        f = small_field(kind)
        t = m.mst(f)
        assert t.spanning
        assert len(t.edges) == f.lattice.num_sites - 1
        assert m.reverse_delete_tree(f).edges == t.edges
        assert m.invasion_tree(f, 0).edges == t.edges
        assert m.cycle_rule_check(f, t)


def test_partial_invasion_inside_mst():
    f = small_field(n=6)
    t = m.mst(f)
    for stop in ({"sites": 5}, {"level": 0.4}, {"target": 20}):
        part = m.invasion_tree(f, 0, **stop)
        assert all(t.contains(e) for e in part.edges)
    with pytest.raises(ValueError):
        m.invasion_tree(f, 0, sites=3, level=0.5)


def test_path_bottleneck_is_minimax():
    f = small_field(n=3, seed=11)
    g = f.lattice
    t = m.mst(f)
    # Brute force over simple paths between opposite corners.
    x, y = g.site_at(0, 0), g.site_at(2, 2)
    adj = {}
    for e in range(g.num_edges):
        a, b = g.edge(e)
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    best = [float("inf")]

    def walk(s, seen, worst):
        if s == y:
            best[0] = min(best[0], worst)
            return
        for v, e in adj[s]:
            if v not in seen:
                walk(v, seen | {v}, max(worst, f.edge_label(e)))

    walk(x, {x}, 0.0)
    assert t.path(x, y).bottleneck == best[0]


def test_cluster_tree_links_are_mst_edges_above_level():
    f = small_field(n=6, seed=5)
    t = m.mst(f)
    for p in (0.2, 0.5, 0.8):
        above = sorted(f.edge_label(e) for e in t.edges if f.edge_label(e) > p)
        assert sorted(m.cluster_tree(f, p).link_labels()) == above


def test_crossing_is_monotone_in_level():
    f = small_field(m.LatticeKind.TriangularSite, 8, 2)
    levels = [i / 10 for i in range(11)]
    crossed = [m.has_crossing(f, p) for p in levels]
    assert crossed == sorted(crossed)
    assert crossed[-1]


def test_values_roundtrip_through_make_field():
    f = small_field()
    g = m.make_field(f.lattice, list(f.values))
    assert m.mst(g).edges == m.mst(f).edges


def test_alpha4_and_rate():
    est, se = m.estimate_alpha4(m.LatticeKind.TriangularSite, 0, 4, 400, 7)
    assert 0.0 < est < 1.0 and se > 0.0
    r = m.rate_r(0.125, lambda eta: est)
    assert r == pytest.approx(0.125**2 / est)
    assert m.lambda_threshold(0.0, 0.125, r) == 0.5


def test_run_and_replay():
    report = m.run("stability", lattice={"kind": "triangular_site", "n": 12}, trials=6, rate_trials=200)
    assert report["status"] == "ok"
    assert m.replay(report, threads=2)
    report["seed"] += 1
    assert not m.replay(report)


def test_bad_config_raises():
    with pytest.raises(ValueError):
        m.run("generate", trials=-1)
