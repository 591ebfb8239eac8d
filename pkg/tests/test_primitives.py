import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanner import (
    SimConfig,
    WeightedTree,
    bfs_dist,
    cluster_aggregate,
    generate,
    grow_bfs_clusters,
    partition_tree,
    ruling_set_log,
    ruling_set_power,
)
from spanner.verify import audit_ruling_set

CFG = SimConfig(msg_bit_budget=64)


# -- cluster growth ----------------------------------------------------------


def test_grow_path5_tie_goes_to_larger_center():
    g = generate("path", {"n": 5})
    cl, ledger = grow_bfs_clusters(g, {0, 4}, 2)
    assert cl.membership == {0: 0, 1: 0, 2: 4, 3: 4, 4: 4}
    assert ledger.rounds_used <= 2
    cl.validate(g)


def test_grow_all_centers_depth0_singletons():
    g = generate("cycle", {"n": 6})
    cl, ledger = grow_bfs_clusters(g, set(range(6)), 0)
    assert cl.membership == {v: v for v in range(6)}
    assert ledger.rounds_used == 0


def test_grow_k4_single_center():
    g = generate("complete", {"n": 4})
    cl, _ = grow_bfs_clusters(g, {0}, 1)
    assert set(cl.membership) == {0, 1, 2, 3}
    assert set(cl.membership.values()) == {0}


def _centralized_assignment(g, centers, depth):
    dists = {c: bfs_dist(g, c, hop_cap=depth) for c in centers}
    out = {}
    for v in g.vertices:
        best = None
        for c in centers:
            d = dists[c].get(v)
            if d is not None:
                key = (-d, c)
                if best is None or key > best:
                    best = key
        if best is not None:
            out[v] = best[1]
    return out


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_grow_matches_centralized(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 60)
    g = generate("erdos-renyi", {"n": n, "p": 4.0 / n}, seed=seed)
    centers = set(rng.sample(range(n), rng.randint(1, max(1, n // 4))))
    depth = rng.randint(0, 4)
    cl, _ = grow_bfs_clusters(g, centers, depth, CFG)
    assert cl.membership == _centralized_assignment(g, centers, depth)
    cl.validate(g)


# -- aggregation -------------------------------------------------------------


def test_aggregate_cluster_sizes():
    g = generate("path", {"n": 5})
    cl, _ = grow_bfs_clusters(g, {0, 4}, 2)
    agg, ledger = cluster_aggregate(g, cl, {v: 1 for v in range(5)}, "sum")
    assert agg == {0: 2, 4: 3}
    assert ledger.rounds_used <= cl.depth_bound


def test_aggregate_singletons_identity():
    g = generate("path", {"n": 4})
    from spanner.clustering import Clustering

    cl = Clustering.singletons(g.vertices)
    agg, ledger = cluster_aggregate(g, cl, {v: v + 7 for v in g.vertices}, "sum")
    assert agg == {v: v + 7 for v in g.vertices}
    assert ledger.rounds_used == 0


def test_aggregate_max():
    g = generate("complete", {"n": 6})
    cl, _ = grow_bfs_clusters(g, {5}, 1)
    agg, _ = cluster_aggregate(g, cl, {v: v for v in g.vertices}, "max")
    assert agg == {5: 5}


# -- ruling sets -------------------------------------------------------------


def test_ruling_log_single_candidate():
    g = generate("cycle", {"n": 10})
    U, _ = ruling_set_log(g, {3})
    assert U == {3}


def test_ruling_log_far_candidates_survive():
    g = generate("path", {"n": 11})
    U, _ = ruling_set_log(g, {0, 10})
    assert U == {0, 10}


def test_ruling_log_path16_exhaustive():
    g = generate("path", {"n": 16})
    U, ledger = ruling_set_log(g, set(range(16)))
    rep = audit_ruling_set(g, set(range(16)), U, alpha=4,
                           beta=3 * math.ceil(math.log2(16)))
    assert rep.passed, rep.findings
    assert ledger.rounds_used <= 4 * g.id_bits


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_ruling_log_random_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 80)
    g = generate("erdos-renyi", {"n": n, "p": 3.0 / n}, seed=seed)
    cands = set(rng.sample(range(n), rng.randint(1, n)))
    U, ledger = ruling_set_log(g, cands, CFG)
    beta = 3 * g.id_bits
    rep = audit_ruling_set(g, cands, U, alpha=4, beta=beta)
    assert rep.passed, rep.findings
    assert ledger.rounds_used <= 4 * g.id_bits + 1


def test_ruling_power_cycle9():
    g = generate("cycle", {"n": 9})
    U, _ = ruling_set_power(g, set(range(9)), 1)
    rep = audit_ruling_set(g, set(range(9)), U, alpha=3, beta=4)
    assert rep.passed, rep.findings


def test_ruling_power_single_candidate():
    g = generate("grid", {"rows": 4, "cols": 4})
    U, _ = ruling_set_power(g, {7}, 2)
    assert U == {7}


def test_ruling_power_separated_candidates_all_join():
    g = generate("path", {"n": 30})
    cands = {0, 10, 20, 29}  # pairwise distance >= 3t for t = 3
    U, _ = ruling_set_power(g, cands, 3)
    assert U == cands


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_ruling_power_random(seed, t):
    rng = random.Random(seed)
    n = rng.randint(4, 50)
    g = generate("erdos-renyi", {"n": n, "p": 3.0 / n}, seed=seed)
    cands = set(rng.sample(range(n), rng.randint(1, n)))
    U, _ = ruling_set_power(g, cands, t, CFG)
    rep = audit_ruling_set(g, cands, U, alpha=3 * t, beta=4 * t)
    assert rep.passed, rep.findings


def test_ruling_power_round_cap():
    g = generate("path", {"n": 200})
    U, ledger = ruling_set_power(g, set(range(200)), 1, CFG)
    cap = 8 * 1 * 2 ** (2 * math.ceil(math.sqrt(math.log2(200))))
    assert ledger.rounds_used <= cap


# -- balanced tree partitioning ----------------------------------------------


def _check_partition(tp, weights, B, n):
    owned_all = set()
    for p in tp.parts:
        assert not (owned_all & set(p.owned)), "D1: overlap"
        owned_all |= set(p.owned)
    assert owned_all == set(range(n)), "D1: cover"
    for idx, p in enumerate(tp.parts):
        w = sum(weights.get(v, 0) for v in p.owned)
        if idx == tp.leftover_index:
            assert w <= 2 * B, "D5/D2 leftover"
        else:
            assert B <= w <= 2 * B, "D2"
        assert p.tree_vertices <= set(p.owned) | {p.root}, "D3"
    seen = set()
    for p in tp.parts:
        assert not (p.edges & seen), "D4: edge overlap"
        seen |= p.edges


def test_partition_7path_unit_weights():
    edges = frozenset((i, i + 1) for i in range(6))
    wt = WeightedTree(edges=edges, root=0, weights={i: 1 for i in range(7)}, bound=2)
    tp, ledger = partition_tree(wt, CFG)
    _check_partition(tp, wt.weights, 2, 7)
    assert ledger.rounds_used <= 2 * 7


def test_partition_single_vertex():
    wt = WeightedTree(edges=frozenset(), root=0, weights={0: 0}, bound=3)
    tp, ledger = partition_tree(wt, CFG)
    assert len(tp.parts) == 1
    assert tp.parts[0].owned == frozenset({0})
    assert ledger.rounds_used == 0


def test_partition_star_root_owned_once():
    edges = frozenset((0, i) for i in range(1, 6))
    weights = {0: 0, **{i: 1 for i in range(1, 6)}}
    wt = WeightedTree(edges=edges, root=0, weights=weights, bound=2)
    tp, _ = partition_tree(wt, CFG)
    _check_partition(tp, weights, 2, 6)
    owners = [p for p in tp.parts if 0 in p.owned]
    assert len(owners) == 1
    rooted_at_zero = [p for p in tp.parts if p.root == 0]
    assert len(rooted_at_zero) >= 2  # auxiliary root of several parts


def test_partition_rejects_overweight_vertex():
    wt = WeightedTree(
        edges=frozenset({(0, 1)}), root=0, weights={0: 5, 1: 1}, bound=2
    )
    with pytest.raises(ValueError):
        partition_tree(wt, CFG)


def _random_tree(n, rng):
    return frozenset((rng.randrange(i), i) for i in range(1, n))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_partition_random_trees(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 100)
    B = rng.randint(1, 8)
    weights = {i: rng.randint(0, B) for i in range(n)}
    wt = WeightedTree(edges=_random_tree(n, rng), root=0, weights=weights, bound=B)
    tp, _ = partition_tree(wt, CFG)
    _check_partition(tp, weights, B, n)
    total = sum(weights.values())
    assert len(tp.parts) <= math.ceil(max(total, 1) / B) + 1
