import math

import pytest

from spanner import (
    Bipartition,
    Graph,
    bipartite_3_spanner,
    generate,
    improved_3_spanner,
    partition_high_degree,
    small_id_3_spanner,
    three_spanner_given_partition,
    verify_stretch,
    with_random_weights,
)


def _crossing(g, a):
    return g.edge_subgraph(
        g.vertices, [e for e in g.edge_set if (e[0] in a) != (e[1] in a)]
    )


def test_bipartite_k24():
    g = generate("complete-bipartite", {"a": 2, "b": 4})
    part = Bipartition(range(2), range(2, 6))
    res = bipartite_3_spanner(g, part)
    assert res.spanner.size <= 4 + 2 * 2
    assert res.ledger.rounds_used == 2
    assert verify_stretch(g, res.spanner, 3).passed


def test_bipartite_vertex_without_a_neighbor():
    # B vertex 5 is isolated from A; no obligation arises
    g = Graph(range(6), [(0, 2), (0, 3), (1, 3), (4, 5)])
    part = Bipartition({0, 1}, {2, 3, 5})
    res = bipartite_3_spanner(g, part)
    assert verify_stretch(_crossing(g, {0, 1}), res.spanner, 3).passed


def test_bipartite_weighted_picks_closest():
    g = Graph(
        range(3),
        [(0, 2), (1, 2)],
        weights={(0, 2): 5.0, (1, 2): 2.0},
    )
    part = Bipartition({0, 1}, {2})
    res = bipartite_3_spanner(g, part)
    assert (1, 2) in res.spanner.edges  # weight-2 neighbor wins


def test_bipartite_weighted_tie_smaller_id():
    g = Graph(range(3), [(0, 2), (1, 2)], weights={(0, 2): 2.0, (1, 2): 2.0})
    res = bipartite_3_spanner(g, Bipartition({0, 1}, {2}))
    assert (0, 2) in res.spanner.edges


def test_bipartite_random_oracle():
    g = generate("random-bipartite", {"a": 10, "b": 60, "p": 0.3}, seed=3)
    a = set(range(10))
    res = bipartite_3_spanner(g, Bipartition(a, set(range(10, 70))))
    assert res.ledger.rounds_used == 2
    assert res.spanner.size <= 60 + 100
    assert verify_stretch(_crossing(g, a), res.spanner, 3).passed


def test_bipartite_weighted_random_oracle():
    g = with_random_weights(
        generate("random-bipartite", {"a": 8, "b": 40, "p": 0.3}, seed=5), seed=9
    )
    a = set(range(8))
    res = bipartite_3_spanner(g, Bipartition(a, set(range(8, 48))))
    assert verify_stretch(_crossing(g, a), res.spanner, 3).passed


def test_bipartite_edge_bound_exact_counting():
    for seed in range(5):
        g = generate("random-bipartite", {"a": 7, "b": 30, "p": 0.4}, seed=seed)
        res = bipartite_3_spanner(g, Bipartition(range(7), range(7, 37)))
        assert res.spanner.size <= 30 + 49


# -- high-degree partitioning -------------------------------------------------


def test_partition_all_low_degree_empty():
    g = generate("cycle", {"n": 30})
    parts, _, _ = partition_high_degree(g)
    assert parts == []


def test_partition_k16_bounds():
    g = generate("complete", {"n": 16})
    parts, ledger, trace = partition_high_degree(g)
    covered = set().union(*parts)
    assert covered == set(range(16))
    assert all(len(p) <= 2 * math.isqrt(16) for p in parts)
    assert len(parts) <= 3 * math.ceil(math.sqrt(16))
    flat = [v for p in parts for v in p]
    assert len(flat) == len(set(flat))


def test_partition_star_center_only():
    g = generate("complete-bipartite", {"a": 1, "b": 100})
    parts, _, _ = partition_high_degree(g)
    assert parts == [{0}]


# -- partitioned 3-spanner ----------------------------------------------------


def test_given_partition_single_part_is_whole_graph():
    g = generate("complete", {"n": 6})
    res = three_spanner_given_partition(g, [set(range(6))])
    assert res.spanner.size == g.m  # all internal edges
    assert verify_stretch(g, res.spanner, 3).passed


def test_given_partition_two_parts_k4():
    g = generate("complete", {"n": 4})
    res = three_spanner_given_partition(g, [{0, 1}, {2, 3}])
    assert res.ledger.rounds_used == 2
    assert verify_stretch(g, res.spanner, 3).passed


def test_given_partition_overlap_rejected():
    g = generate("complete", {"n": 4})
    with pytest.raises(ValueError):
        three_spanner_given_partition(g, [{0, 1}, {1, 2}])


def test_given_partition_random_pinned_size():
    g = generate("erdos-renyi", {"n": 60, "p": 0.2}, seed=13)
    parts, _, _ = partition_high_degree(g)
    res = three_spanner_given_partition(g, parts)
    assert verify_stretch(
        g.edge_subgraph(
            g.vertices,
            [e for e in g.edge_set
             if any(e[0] in p or e[1] in p for p in parts)],
        ),
        res.spanner,
        3,
    ).passed
    assert res.spanner.size <= math.ceil(1.5 * 60**1.5)


# -- general 3-spanner --------------------------------------------------------


def test_improved3_tree_keeps_everything():
    g = generate("path", {"n": 40})
    res = improved_3_spanner(g)
    assert res.spanner.size == g.m
    assert verify_stretch(g, res.spanner, 3).max_stretch == 1


def test_improved3_k16():
    g = generate("complete", {"n": 16})
    res = improved_3_spanner(g)
    assert verify_stretch(g, res.spanner, 3).passed
    assert res.spanner.size <= 2 * 16**1.5


def test_improved3_weighted_oracle():
    g = with_random_weights(
        generate("erdos-renyi", {"n": 50, "p": 0.3}, seed=21), seed=4
    )
    res = improved_3_spanner(g)
    assert verify_stretch(g, res.spanner, 3).passed


def test_improved3_round_cap():
    g = generate("erdos-renyi", {"n": 200, "p": 0.1}, seed=2)
    res = improved_3_spanner(g)
    assert verify_stretch(g, res.spanner, 3).passed
    cap = 8 * math.ceil(math.log2(200)) ** 2
    assert res.ledger.rounds_used <= cap


# -- small-ID variant ---------------------------------------------------------


def test_smallid_parts_for_ids_1_to_64():
    g = Graph(range(1, 65), [(i, i + 1) for i in range(1, 64)])
    res = small_id_3_spanner(g)
    assert res.trace["num_parts"] == 8
    low = res.trace["low_bits"]
    sizes = {}
    for v in g.vertices:
        sizes.setdefault(v & ((1 << low) - 1), []).append(v)
    assert all(len(vs) == 8 for vs in sizes.values())


def test_smallid_exactly_two_rounds():
    for seed in range(3):
        g = generate("bounded-id", {"n": 80, "p": 0.1}, seed=seed)
        res = small_id_3_spanner(g)
        assert res.ledger.rounds_used == 2


def test_smallid_oracle_bounded_id():
    g = generate("bounded-id", {"n": 100, "p": 0.15}, seed=4)
    res = small_id_3_spanner(g)
    assert verify_stretch(g, res.spanner, 3).passed


def test_smallid_rejects_large_ids():
    g = Graph([1, 2, 10**6], [(1, 2), (2, 10**6)])
    with pytest.raises(ValueError, match="1000000"):
        small_id_3_spanner(g)
