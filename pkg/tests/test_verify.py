import hashlib
import math
import pickle

import pytest

from spanner import (
    Graph,
    Spanner,
    Supercluster,
    Superclustering,
    audit_superclustering,
    fit_bounds,
    fit_exponent,
    generate,
    verify_stretch,
    verify_stretch_allpairs,
    with_random_weights,
)
from spanner.clustering import Clustering


def _full_spanner(g):
    h = Spanner(g)
    for u, v in g.edges():
        h.add(u, v, "all")
    return h


def test_identity_spanner_stretch_one():
    g = generate("erdos-renyi", {"n": 40, "p": 0.2}, seed=1)
    rep = verify_stretch(g, _full_spanner(g), 3)
    assert rep.max_stretch == 1 and rep.passed


def test_cycle9_spanning_tree_worst_stretch_8():
    g = generate("cycle", {"n": 9})
    h = Spanner(g)
    for i in range(8):
        h.add(i, i + 1, "tree")
    rep = verify_stretch(g, h, 3)
    assert not rep.passed
    assert rep.max_stretch == 8
    assert rep.worst_edge == (0, 8)


def test_weighted_boundary_exactly_three_passes():
    g = Graph(
        range(4),
        [(0, 1), (1, 2), (2, 3), (0, 3)],
        weights={(0, 1): 1.0, (1, 2): 1.0, (2, 3): 1.0, (0, 3): 1.0},
    )
    h = Spanner(g)
    for e in [(0, 1), (1, 2), (2, 3)]:
        h.add(*e, "tree")
    rep = verify_stretch(g, h, 3)
    assert rep.passed and abs(rep.max_stretch - 3.0) < 1e-12


def test_unreachable_reported():
    g = Graph(range(4), [(0, 1), (2, 3)])
    h = Spanner(g)
    h.add(0, 1, "x")
    rep = verify_stretch(g, h, 3)
    assert not rep.passed and rep.unreachable == 1


def test_subgraph_precondition():
    g = generate("path", {"n": 5})
    other = generate("cycle", {"n": 5})
    h = Spanner(other)
    h.add(0, 4, "cycle-edge")
    with pytest.raises(ValueError):
        verify_stretch(g, h, 3)


@pytest.mark.parametrize("weighted", [False, True])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_floyd_warshall(weighted, seed):
    g = generate("erdos-renyi", {"n": 60, "p": 0.12}, seed=seed)
    if weighted:
        g = with_random_weights(g, seed=seed)
    h = Spanner(g)
    # half the edges, deterministic choice
    for idx, (u, v) in enumerate(g.edges()):
        if idx % 2 == 0:
            h.add(u, v, "half")
    a = verify_stretch(g, h, 5)
    b = verify_stretch_allpairs(g, h, 5)
    assert a.passed == b.passed
    assert a.worst_edge == b.worst_edge
    if not math.isinf(a.max_stretch):
        assert abs(a.max_stretch - b.max_stretch) < 1e-9
    else:
        assert math.isinf(b.max_stretch)


def test_verify_is_read_only():
    g = generate("erdos-renyi", {"n": 30, "p": 0.2}, seed=3)
    h = _full_spanner(g)
    before = hashlib.sha256(pickle.dumps((g.adj, sorted(h.edges)))).hexdigest()
    verify_stretch(g, h, 3)
    after = hashlib.sha256(pickle.dumps((g.adj, sorted(h.edges)))).hexdigest()
    assert before == after


# -- superclustering audit ----------------------------------------------------


def _toy_clustering():
    return Clustering(
        level=0,
        membership={v: v for v in range(6)},
        parents={v: None for v in range(6)},
        depth_bound=0,
    )


def test_audit_detects_shared_tree_edge():
    g = generate("path", {"n": 6})
    cl = _toy_clustering()
    sc = Superclustering(
        level=0,
        superclusters=[
            Supercluster(2, frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)}), 0, 5),
            Supercluster(5, frozenset({3, 4, 5}), frozenset({(1, 2), (3, 4), (4, 5)}), 3, 5),
        ],
        vertex_bound=10,
        cluster_bound=10,
        count_bound=10,
    )
    rep = audit_superclustering(g, cl, sc)
    assert not rep.passed
    assert any("shared" in f for f in rep.findings)


def test_audit_large_singleton_allowed():
    g = generate("complete", {"n": 6})
    cl = Clustering(
        level=1,
        membership={v: 0 for v in range(6)},
        parents={0: None, **{v: 0 for v in range(1, 6)}},
        depth_bound=1,
    )
    sc = Superclustering(
        level=1,
        superclusters=[Supercluster(5, frozenset({0}), frozenset(), 0, 2)],
        vertex_bound=3,  # N_V = 6 >= 3, but it is a singleton: N0 holds
        cluster_bound=3,
        count_bound=5,
    )
    rep = audit_superclustering(g, cl, sc)
    assert rep.passed, rep.findings


def test_audit_nonsingleton_vertex_balance_violation():
    g = generate("complete", {"n": 6})
    cl = _toy_clustering()
    sc = Superclustering(
        level=0,
        superclusters=[
            Supercluster(5, frozenset(range(6)),
                         frozenset({(i, i + 1) for i in range(5)}), 0, 6)
        ],
        vertex_bound=3,
        cluster_bound=10,
        count_bound=5,
    )
    rep = audit_superclustering(g, cl, sc)
    assert not rep.passed
    assert any(f.startswith("N2") for f in rep.findings)


# -- bound fitting ------------------------------------------------------------


def test_fit_constant_exact():
    fit = fit_bounds([2.0, 4.0], [1.0, 2.0])
    assert abs(fit.lsq - 2.0) < 1e-12
    assert abs(fit.max_ratio - 2.0) < 1e-12


def test_fit_rejects_degenerate():
    with pytest.raises(ValueError):
        fit_bounds([], [])
    with pytest.raises(ValueError):
        fit_bounds([1.0], [0.0])


def test_fit_exponent_recovers_power_law():
    ns = [64, 128, 256, 512]
    ys = [3.0 * n**0.25 for n in ns]
    e, c = fit_exponent(ns, ys)
    assert abs(e - 0.25) < 1e-9
    assert abs(c - 3.0) < 1e-9
