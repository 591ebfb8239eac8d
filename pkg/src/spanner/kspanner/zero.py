"""Zero-level superclustering for arbitrary-diameter graphs.

Builds k/2 pre-clustering levels whose cluster diameters grow geometrically:
per level, clusters with enough closed-neighborhood expansion nominate their
centers, a power-graph ruling set thins the nominees, and bounded BFS growth
re-clusters everything near a winner.  Low-expansion clusters' edges are
covered immediately (bipartite spanner toward the outside plus recursion
inside).  The final clusters, rebalanced by the partitioning routine, become
superclusters over singleton clusters.

A simple variant for low-diameter graphs partitions one BFS tree directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from ..clustering import Clustering, Supercluster, Superclustering, WeightedTree
from ..graph import Graph, Spanner, canon
from ..primitives import grow_bfs_clusters, partition_tree, ruling_set_power
from ..sim import Msg, RoundLedger, SimConfig
from .common import clustering_aggregate, exchange, ipow_ceil
from .starbip import sparser_bipartite_spanner

TAG_CID, TAG_ACK = 0, 1


@dataclass
class ZeroResult:
    superclustering: Superclustering
    clustering: Clustering      # level-0 singleton clusters of covered vertices
    spanner: Spanner            # H': covers every edge at an excluded vertex
    ledger: RoundLedger
    trace: Dict = field(default_factory=dict)


def phases_for(k: int) -> int:
    return k // 2 if k % 2 == 0 else (k - 1) // 2


def _cluster_expansion(g, cfg, ledger, clustering, label) -> Dict[int, int]:
    """deg(C) = |C| + |Gamma(C) \\ C|: every vertex acknowledges one member
    of each adjacent foreign cluster; members add themselves."""
    out = {}
    for v in g.vertices:
        c = clustering.membership.get(v)
        if c is None:
            continue
        m = Msg(8 + g.id_bits, (TAG_CID, c))
        out[v] = {u: m for u in g.adj[v]}
    got = exchange(g, cfg, ledger, f"zero-announce:{label}", out)
    nbr_cluster = {
        v: {s: b[1] for s, b in got[v] if b[0] == TAG_CID} for v in g.vertices
    }
    out = {}
    for v in g.vertices:
        own = clustering.membership.get(v)
        best: Dict[int, int] = {}
        for u, c in nbr_cluster[v].items():
            if c != own and (c not in best or u < best[c]):
                best[c] = u
        if best:
            out[v] = {u: Msg(8, (TAG_ACK,)) for u in best.values()}
    got = exchange(g, cfg, ledger, f"zero-acks:{label}", out)
    values = {}
    for v in g.vertices:
        if v in clustering.membership:
            values[v] = 1 + sum(1 for _s, b in got[v] if b[0] == TAG_ACK)
    return clustering_aggregate(
        g, cfg, ledger, f"zero-deg:{label}", clustering, values
    )


def _cover_low_cluster(
    g: Graph,
    k: int,
    cfg: SimConfig,
    members: List[int],
    H: Spanner,
) -> List[RoundLedger]:
    """Low-expansion cluster: bipartite spanner toward its outside neighbors
    plus a recursive spanner on the inside; both collected into H."""
    from .improved import improved_spanner  # recursion

    ledgers = []
    mset = set(members)
    outside = sorted(
        {u for v in members for u in g.adj[v] if u not in mset}
    )
    if outside:
        cross = [
            (v, u) for v in members for u in g.adj[v] if u not in mset
        ]
        bip = g.edge_subgraph(set(members) | set(outside), cross)
        from ..spanner3 import Bipartition

        res = sparser_bipartite_spanner(
            bip, Bipartition(mset, set(outside)), k, cfg
        )
        for e in sorted(res.spanner.edges):
            H.add(*e, "zero-bip")
        ledgers.append(res.ledger)
    internal = [e for e in g.edge_set if e[0] in mset and e[1] in mset]
    if internal:
        sub = g.subgraph(mset)
        res = improved_spanner(sub, k, cfg)
        for e in sorted(res.spanner.edges):
            H.add(*e, "zero-recursion")
        ledgers.append(res.ledger)
    return ledgers


def cons_zero_superclustering(
    g: Graph, k: int, cfg: Optional[SimConfig] = None
) -> ZeroResult:
    """Nice zero-level superclustering plus a partial spanner H' that takes
    care of every edge incident to a vertex left out of the superclusters."""
    if k < 3:
        raise ValueError("k must be >= 3")
    cfg = (cfg or SimConfig()).resolved(g)
    n = g.n
    kp = phases_for(k)
    H = Spanner(g)
    ledger = RoundLedger()
    trace: Dict = {"levels": {}, "k": k}
    clustering = Clustering.singletons(g.vertices)
    radius = 0

    for i in range(1, kp + 1):
        t_i = 2 ** (4 * (i - 1))
        threshold = ipow_ceil(n, i, k)
        deg = _cluster_expansion(g, cfg, ledger, clustering, f"Z{i}")
        candidates = {c for c in clustering.centers if deg[c] >= threshold}
        low = sorted(c for c in clustering.centers if deg[c] < threshold)
        members = clustering.members()
        sub_ledgers: List[RoundLedger] = []
        for c in low:
            sub_ledgers.extend(_cover_low_cluster(g, k, cfg, members[c], H))
        if sub_ledgers:
            ledger.extend_parallel(sub_ledgers, name=f"zero-cover:Z{i}")
        trace["levels"][i] = {
            "clusters": len(clustering.centers),
            "candidates": len(candidates),
            "low_expansion": len(low),
            "threshold": threshold,
        }
        if not candidates:
            clustering = Clustering(level=i, membership={}, parents={}, depth_bound=0)
            trace["levels"][i]["centers"] = 0
            break
        winners, led = ruling_set_power(g, candidates, t_i, cfg)
        ledger.extend_sequential(led, name=f"zero-ruling:Z{i}")
        radius = 4 * t_i + radius
        clustering, led = grow_bfs_clusters(g, winners, radius, cfg, level=i)
        ledger.extend_sequential(led, name=f"zero-grow:Z{i}")
        trace["levels"][i]["centers"] = len(winners)
        trace["levels"][i]["radius"] = radius

    # turn the final clusters into superclusters over singleton clusters,
    # splitting clusters that grew past sqrt(n) vertices
    bound = max(1, math.ceil(math.sqrt(n)))
    members = clustering.members()
    superclusters: List[Supercluster] = []
    part_ledgers: List[RoundLedger] = []
    for c in sorted(members):
        vs = members[c]
        tree_edges = frozenset(
            canon(v, p)
            for v, p in clustering.parents.items()
            if p is not None and clustering.membership[v] == c
        )
        if len(vs) < bound:
            superclusters.append(
                Supercluster(
                    sc_id=max(vs),
                    clusters=frozenset(vs),
                    tree_edges=tree_edges,
                    root=c,
                    depth_bound=max(1, 2 * radius),
                )
            )
            continue
        wt = WeightedTree(
            edges=tree_edges, root=c, weights={v: 1 for v in vs}, bound=bound
        )
        tp, led = partition_tree(wt, cfg)
        part_ledgers.append(led)
        for p in tp.parts:
            if not p.owned:
                continue
            superclusters.append(
                Supercluster(
                    sc_id=max(p.owned),
                    clusters=frozenset(p.owned),
                    tree_edges=p.edges,
                    root=p.root,
                    depth_bound=max(1, 2 * radius),
                )
            )
    if part_ledgers:
        ledger.extend_parallel(part_ledgers, name="zero-balance")

    covered = sorted(clustering.membership)
    c0 = Clustering.singletons(covered)
    sc = Superclustering(
        level=0,
        superclusters=superclusters,
        vertex_bound=2 * bound + 1,
        cluster_bound=2 * bound + 1,
        count_bound=4 * bound + 4,
    )
    trace["superclusters"] = len(superclusters)
    trace["covered"] = len(covered)
    trace["radius"] = radius
    return ZeroResult(sc, c0, H, ledger, trace)


def simple_zero_superclustering(
    g: Graph, cfg: Optional[SimConfig] = None
) -> ZeroResult:
    """Low-diameter variant: partition a BFS tree per connected component
    (rooted at the component's maximum ID) into sqrt(n)-weight parts; every
    part becomes a supercluster of singleton clusters.  Covers all vertices,
    so H' stays empty."""
    cfg = (cfg or SimConfig()).resolved(g)
    n = g.n
    ledger = RoundLedger()
    roots = _component_roots(g)
    clustering, led = grow_bfs_clusters(g, roots, max(1, n), cfg, level=0)
    ledger.extend_sequential(led, name="bfs-tree")
    depths = clustering.depths()
    bound = max(1, math.ceil(math.sqrt(n)))
    members = clustering.members()
    superclusters: List[Supercluster] = []
    part_ledgers = []
    for c in sorted(members):
        vs = members[c]
        tree_edges = frozenset(
            canon(v, p)
            for v, p in clustering.parents.items()
            if p is not None and clustering.membership[v] == c
        )
        depth_bound = max(1, 2 * max(depths[v] for v in vs))
        if len(vs) < bound:
            superclusters.append(
                Supercluster(
                    sc_id=max(vs), clusters=frozenset(vs),
                    tree_edges=tree_edges, root=c, depth_bound=depth_bound,
                )
            )
            continue
        wt = WeightedTree(
            edges=tree_edges, root=c, weights={v: 1 for v in vs}, bound=bound
        )
        tp, led = partition_tree(wt, cfg)
        part_ledgers.append(led)
        for p in tp.parts:
            if p.owned:
                superclusters.append(
                    Supercluster(
                        sc_id=max(p.owned), clusters=frozenset(p.owned),
                        tree_edges=p.edges, root=p.root, depth_bound=depth_bound,
                    )
                )
    if part_ledgers:
        ledger.extend_parallel(part_ledgers, name="simple-zero-balance")
    c0 = Clustering.singletons(g.vertices)
    sc = Superclustering(
        level=0,
        superclusters=superclusters,
        vertex_bound=2 * bound + 1,
        cluster_bound=2 * bound + 1,
        count_bound=4 * bound + 4,
    )
    return ZeroResult(sc, c0, Spanner(g), ledger, {"superclusters": len(superclusters)})


def _component_roots(g: Graph) -> Set[int]:
    seen: Set[int] = set()
    roots: Set[int] = set()
    for v in sorted(g.vertices, reverse=True):
        if v in seen:
            continue
        roots.add(v)
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return roots
