import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanner import Graph, bfs_dist, generate, load, save
from spanner.graph import GraphError, with_random_weights


def test_complete_edge_count():
    g = generate("complete", {"n": 4}, seed=0)
    assert g.m == 6
    g.validate()


def test_complete_bipartite_edge_count():
    g = generate("complete-bipartite", {"a": 2, "b": 4})
    assert g.m == 8
    g.validate()


def test_erdos_renyi_pinned_edge_count():
    # regression value recorded from the first deterministic run
    g = generate("erdos-renyi", {"n": 100, "p": 0.1}, seed=7)
    assert g.m == 495


def test_generate_determinism():
    a = generate("erdos-renyi", {"n": 60, "p": 0.2}, seed=3)
    b = generate("erdos-renyi", {"n": 60, "p": 0.2}, seed=3)
    assert a == b
    c = generate("erdos-renyi", {"n": 60, "p": 0.2}, seed=4)
    assert a != c


def test_invalid_probability_rejected():
    with pytest.raises(GraphError):
        generate("erdos-renyi", {"n": 10, "p": 1.5}, seed=0)


def test_unknown_kind_rejected():
    with pytest.raises(GraphError):
        generate("mystery", {}, seed=0)


def test_bounded_id_range():
    g = generate("bounded-id", {"n": 50, "p": 0.1}, seed=2)
    assert g.n == 50
    assert all(1 <= v <= 100 for v in g.vertices)
    g.validate()


def test_hypercube_structure():
    g = generate("hypercube", {"d": 4})
    assert g.n == 16 and g.m == 32
    assert all(g.degree(v) == 4 for v in g.vertices)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("path", {"n": 9}),
        ("cycle", {"n": 12}),
        ("grid", {"rows": 3, "cols": 5}),
        ("complete", {"n": 7}),
        ("erdos-renyi", {"n": 40, "p": 0.2}),
        ("random-bipartite", {"a": 5, "b": 9, "p": 0.4}),
        ("bounded-id", {"n": 30, "p": 0.2}),
    ],
)
def test_generator_invariants(kind, params):
    g = generate(kind, params, seed=11)
    g.validate()


def test_save_load_roundtrip_k4(tmp_path):
    g = generate("complete", {"n": 4})
    path = str(tmp_path / "k4.edges")
    save(g, path)
    assert load(path) == g


def test_header_only_isolated_vertices(tmp_path):
    path = str(tmp_path / "iso.edges")
    with open(path, "w") as fh:
        fh.write("n=3\n")
    g = load(path)
    assert g.n == 3 and g.m == 0
    assert g.vertices == (0, 1, 2)


def test_weighted_line_format(tmp_path):
    path = str(tmp_path / "w.edges")
    with open(path, "w") as fh:
        fh.write("0 1 2.5\n")
    g = load(path)
    assert g.weighted and g.weight(0, 1) == 2.5


def test_noncontiguous_ids_roundtrip(tmp_path):
    g = generate("bounded-id", {"n": 20, "p": 0.15}, seed=5)
    path = str(tmp_path / "b.edges")
    save(g, path)
    assert load(path) == g


def test_weighted_roundtrip(tmp_path):
    g = with_random_weights(generate("cycle", {"n": 8}), seed=1)
    path = str(tmp_path / "wc.edges")
    save(g, path)
    assert load(path) == g


def test_malformed_line_reports_lineno(tmp_path):
    path = str(tmp_path / "bad.edges")
    with open(path, "w") as fh:
        fh.write("0 1\nx y z w\n")
    with pytest.raises(GraphError, match=":2"):
        load(path)


def test_bfs_path_distances():
    g = generate("path", {"n": 4})
    assert bfs_dist(g, 0) == {0: 0, 1: 1, 2: 2, 3: 3}


def test_bfs_hop_cap():
    g = generate("path", {"n": 4})
    d = bfs_dist(g, 0, hop_cap=2)
    assert 3 not in d and d[2] == 2


def test_bfs_bipartite():
    g = generate("complete-bipartite", {"a": 2, "b": 4})
    d = bfs_dist(g, 0)
    assert all(d[b] == 1 for b in range(2, 6))
    assert d[1] == 2


def _reference_distances(g, src):
    # naive O(n*m) relaxation
    dist = {v: math.inf for v in g.vertices}
    dist[src] = 0
    for _ in range(g.n):
        changed = False
        for u, v in g.edges():
            for a, b in ((u, v), (v, u)):
                if dist[a] + 1 < dist[b]:
                    dist[b] = dist[a] + 1
                    changed = True
        if not changed:
            break
    return {v: d for v, d in dist.items() if d < math.inf}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(5, 60))
def test_bfs_matches_naive_reference(seed, n):
    g = generate("erdos-renyi", {"n": n, "p": 3.0 / n}, seed=seed)
    src = g.vertices[0]
    assert bfs_dist(g, src) == _reference_distances(g, src)


def test_subgraph_induced():
    g = generate("complete", {"n": 5})
    sub = g.subgraph({0, 1, 2})
    assert sub.n == 3 and sub.m == 3


def test_spanner_rejects_foreign_edge():
    from spanner import Spanner

    g = generate("path", {"n": 4})
    h = Spanner(g)
    with pytest.raises(GraphError):
        h.add(0, 3, "bogus")
