"""The distributed building blocks every spanner construction leans on:
bounded-depth cluster growth, tree aggregation, ruling sets (plain and on
power graphs), and the balanced tree partitioning."""

from spanner import (
    WeightedTree,
    bfs_dist,
    cluster_aggregate,
    generate,
    grow_bfs_clusters,
    partition_tree,
    ruling_set_log,
    ruling_set_power,
)

# -- growing clusters around centers -------------------------------------------

g = generate("path", {"n": 5})
clusters, ledger = grow_bfs_clusters(g, centers={0, 4}, depth=2)
print("5-path, centers {0, 4}, depth 2 ->", clusters.membership)
print("vertex 2 is equidistant and joins the larger center ID (4)")
print("rounds:", ledger.rounds_used)

sizes, _ = cluster_aggregate(g, clusters, {v: 1 for v in g.vertices}, "sum")
print("cluster sizes via convergecast:", sizes)

# -- ruling sets ----------------------------------------------------------------

g = generate("path", {"n": 16})
ruling, ledger = ruling_set_log(g, candidates=set(range(16)))
print("\n(4, O(log n))-ruling set of the 16-path:", sorted(ruling))
dists = {u: bfs_dist(g, u) for u in ruling}
print("pairwise distances all >= 4:",
      all(dists[u][v] >= 4 for u in ruling for v in ruling if u != v))
print("rounds:", ledger.rounds_used, "(one 3-hop wave per ID bit)")

g = generate("cycle", {"n": 30})
ruling, _ = ruling_set_power(g, candidates=set(range(30)), t=2)
print("\npower-graph ruling set on C30 with t=2:", sorted(ruling))
print("pairwise >= 6 apart, every candidate within 8 hops")

# -- balanced tree partitioning ---------------------------------------------------

edges = frozenset((0, i) for i in range(1, 6))
tree = WeightedTree(edges=edges, root=0,
                    weights={0: 0, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1}, bound=2)
parts, ledger = partition_tree(tree)
print("\nstar with five unit-weight leaves, B=2:")
for i, p in enumerate(parts.parts):
    tag = " (leftover)" if i == parts.leftover_index else ""
    print(f"  part rooted at {p.root}: owns {sorted(p.owned)}{tag}")
print("the root serves as auxiliary root of several parts but is owned once")
