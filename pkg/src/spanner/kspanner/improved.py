"""Superclustered (2k-1)-spanner: iterate the local-maxima election over
superclusters instead of clusters, cover low-expansion superclusters with
bipartite spanners outside and recursion inside, regroup after every level
with two balanced tree partitions, and finish with the cluster-by-cluster
construction once only O(sqrt n) clusters remain."""

from __future__ import annotations

import math
from collections import deque
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..clustering import Supercluster, Superclustering, WeightedTree
from ..graph import Graph, Spanner
from ..primitives import ForestAggregate, ForestBroadcast, grow_bfs_clusters, partition_tree
from ..results import SpannerRun
from ..sim import Msg, RoundLedger, SimConfig, run
from .common import clustering_aggregate, clustering_broadcast, exchange, ipow_ceil
from .naive import naive_spanner
from .starbip import sparser_bipartite_spanner
from .zero import cons_zero_superclustering

RECURSION_BASE = 64

TAG_SCID, TAG_ACK, TAG_TUPLE, TAG_VOTE, TAG_SUCCESS, TAG_UNCOV, TAG_EDGE = range(7)


def _sc_tree_roles(sc: Supercluster) -> Dict[int, Tuple[Optional[int], Tuple[int, ...]]]:
    """Orient a supercluster tree from its root: vertex -> (parent, children)."""
    adj: Dict[int, List[int]] = {sc.root: []}
    for u, v in sc.tree_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent: Dict[int, Optional[int]] = {sc.root: None}
    order = [sc.root]
    q = deque([sc.root])
    while q:
        x = q.popleft()
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
                q.append(y)
    children: Dict[int, List[int]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    return {v: (parent[v], tuple(sorted(children[v]))) for v in parent}


class SCForest:
    """Per-vertex role tables for aggregation over all supercluster trees."""

    def __init__(self, g: Graph, scs: Sequence[Supercluster]):
        self.scs = list(scs)
        self.roles: Dict[int, List[Tuple[int, Optional[int], Tuple[int, ...]]]] = {
            v: [] for v in g.vertices
        }
        for sc in self.scs:
            table = _sc_tree_roles(sc)
            for v, (p, ch) in table.items():
                self.roles[v].append((sc.sc_id, p, ch))

    def aggregate(self, g, cfg, ledger, name, values: Dict[int, Dict[int, int]],
                  combine="sum", bound=None) -> Dict[int, int]:
        """values[vertex][sc_id] -> contribution; returns sc_id -> total."""
        bound = bound if bound is not None else max(2, 2 * g.n)
        private = {}
        role_index: Dict[int, List[int]] = {}
        for v in g.vertices:
            rs = []
            ids = []
            for scid, p, ch in self.roles[v]:
                rs.append((p, ch, values.get(v, {}).get(scid, 0)))
                ids.append(scid)
            private[v] = {"roles": rs}
            role_index[v] = ids
        outputs, led = run(g, ForestAggregate(combine, bound), cfg, private=private)
        ledger.extend_sequential(led, name=name)
        out = {}
        for sc in self.scs:
            r = sc.root
            idx = role_index[r].index(sc.sc_id)
            out[sc.sc_id] = outputs[r][idx]
        return out

    def broadcast(self, g, cfg, ledger, name, root_values: Dict[int, int],
                  bound=None) -> Dict[int, Dict[int, int]]:
        """root_values[sc_id] -> value; returns vertex -> {sc_id: value}."""
        bound = bound if bound is not None else max(2, 2 * g.n)
        private = {}
        role_index = {}
        for v in g.vertices:
            rs = []
            ids = []
            for scid, p, ch in self.roles[v]:
                val = root_values.get(scid, 0) if p is None else None
                rs.append((p, ch, val))
                ids.append(scid)
            private[v] = {"roles": rs}
            role_index[v] = ids
        outputs, led = run(g, ForestBroadcast(bound), cfg, private=private)
        ledger.extend_sequential(led, name=name)
        got = {}
        for v in g.vertices:
            got[v] = {scid: outputs[v][i] for i, scid in enumerate(role_index[v])}
        return got


def improved_spanner(
    g: Graph, k: int, cfg: Optional[SimConfig] = None
) -> SpannerRun:
    """(2k-1)-spanner with O(k n^{1+1/k}) edges in about n^{1/2-1/k} rounds
    (times a 2^{O(k)} factor).  Odd k runs one level less and leans on the
    odd-k bipartite spanner; k = 2 falls back to the 3-spanner pipeline."""
    cfg = (cfg or SimConfig()).resolved(g)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        from ..spanner3 import improved_3_spanner

        return improved_3_spanner(g, cfg)
    if g.weighted:
        raise ValueError("weighted graphs are only supported for k = 2")
    if g.n < RECURSION_BASE:
        res = naive_spanner(g, k, cfg)
        res.trace["base_case"] = True
        return res

    n = g.n
    kp = k // 2 if k % 2 == 0 else (k - 1) // 2
    zero = cons_zero_superclustering(g, k, cfg)
    H = zero.spanner
    ledger = zero.ledger
    trace: Dict = {
        "k": k,
        "phases": kp,
        "zero": zero.trace,
        "levels": {},
        "superclusterings": [(0, zero.clustering, zero.superclustering)],
        "si_records": [],
    }
    clustering = zero.clustering
    superclustering = zero.superclustering
    exp_threshold = ipow_ceil(n, k + 2, 2 * k)  # n^(1/2 + 1/k)

    for i in range(1, kp + 1):
        clustering, superclustering = _phase(
            g, k, cfg, ledger, trace, H, clustering, superclustering,
            i, exp_threshold,
        )
        trace["levels"][i] = {
            "centers": len(clustering.centers),
            "superclusters": len(superclustering.superclusters),
        }
        trace["superclusterings"].append((i, clustering, superclustering))

    tail = naive_spanner(
        g, k, cfg, start_level=kp + 1, initial=clustering, spanner=H
    )
    ledger.extend_sequential(tail.ledger, name="tail")
    trace["tail"] = tail.trace
    trace["size"] = H.size
    return SpannerRun(H, ledger, trace)


def _phase(g, k, cfg, ledger, trace, H, clustering, superclustering,
           i, exp_threshold):
    n = g.n
    scs = {sc.sc_id: sc for sc in superclustering.superclusters}
    vset = superclustering.vertex_sets(clustering)
    sc_of_vertex: Dict[int, int] = {}
    for scid, vs in vset.items():
        for v in vs:
            sc_of_vertex[v] = scid
    forest = SCForest(g, superclustering.superclusters)
    cap = 4 * ipow_ceil(n, k - 2, 2 * k) + 2  # 4 n^(1/2-1/k) iterations

    # announce supercluster membership once per phase
    out = {}
    for v, scid in sc_of_vertex.items():
        m = Msg(8 + g.id_bits, (TAG_SCID, scid))
        out[v] = {u: m for u in g.adj[v]}
    got = exchange(g, cfg, ledger, f"sc-announce:P{i}", out)
    nbr_sc = {v: {s: b[1] for s, b in got[v] if b[0] == TAG_SCID}
              for v in g.vertices}

    marked: Set[int] = set()
    remaining: Set[int] = set(scs)
    joined_sc: Set[int] = set()
    iterations = 0
    cbits = max(1, (2 * n).bit_length())

    while True:
        iterations += 1
        if iterations > cap:
            raise RuntimeError(f"supercluster phase {i} exceeded cap {cap}")
        # unmarked external vertices acknowledge each adjacent remaining
        # supercluster; members self-report their unmarked bit
        out = {}
        for v in g.vertices:
            if v in marked:
                continue
            own = sc_of_vertex.get(v)
            best: Dict[int, int] = {}
            for u, s in nbr_sc[v].items():
                if s != own and s in remaining and (s not in best or u < best[s]):
                    best[s] = u
            if best:
                out[v] = {u: Msg(8, (TAG_ACK,)) for u in best.values()}
        got = exchange(g, cfg, ledger, f"sc-ack:P{i}.{iterations}", out)
        contrib = {}
        for v in g.vertices:
            val = sum(1 for _s, b in got[v] if b[0] == TAG_ACK)
            if v in sc_of_vertex and v not in marked:
                val += 1
            if val:
                contrib[v] = val
        per_center = clustering_aggregate(
            g, cfg, ledger, f"sc-deg-up1:P{i}.{iterations}", clustering, contrib
        )
        deg = forest.aggregate(
            g, cfg, ledger, f"sc-deg-up2:P{i}.{iterations}",
            {c: {scid: per_center[c]}
             for c in clustering.centers
             for scid in [sc_of_vertex.get(c)] if scid is not None},
        )
        at_center = forest.broadcast(
            g, cfg, ledger, f"sc-deg-down2:P{i}.{iterations}",
            {scid: deg.get(scid, 0) for scid in remaining},
        )
        know = clustering_broadcast(
            g, cfg, ledger, f"sc-deg-down1:P{i}.{iterations}", clustering,
            {c: at_center[c].get(sc_of_vertex.get(c), 0)
             for c in clustering.centers},
        )
        out = {}
        for v, scid in sc_of_vertex.items():
            if scid in remaining:
                m = Msg(8 + g.id_bits + cbits, (TAG_TUPLE, know.get(v, 0), scid))
                out[v] = {u: m for u in g.adj[v]}
        got = exchange(g, cfg, ledger, f"sc-tuples:P{i}.{iterations}", out)
        out = {}
        selfvote: Dict[int, int] = {}
        for v in g.vertices:
            if v in marked:
                continue
            own = sc_of_vertex.get(v)
            best = None
            best_sender = None
            if own in remaining:
                best = (know.get(v, 0), own)
            for s, b in got[v]:
                if b[0] != TAG_TUPLE:
                    continue
                key = (b[1], b[2])
                if best is None or key > best:
                    best = key
                    best_sender = s
                elif key == best and best_sender is not None and s < best_sender:
                    best_sender = s
            if best is None:
                continue
            if best[1] == own:
                selfvote[v] = 1
            elif best_sender is not None:
                out[v] = {best_sender: Msg(8, (TAG_VOTE,))}
        got = exchange(g, cfg, ledger, f"sc-votes:P{i}.{iterations}", out)
        votes = {}
        for v in g.vertices:
            val = sum(1 for _s, b in got[v] if b[0] == TAG_VOTE)
            val += selfvote.get(v, 0)
            if val:
                votes[v] = val
        per_center = clustering_aggregate(
            g, cfg, ledger, f"sc-votes-up1:P{i}.{iterations}", clustering, votes
        )
        vote_sum = forest.aggregate(
            g, cfg, ledger, f"sc-votes-up2:P{i}.{iterations}",
            {c: {scid: per_center[c]}
             for c in clustering.centers
             for scid in [sc_of_vertex.get(c)] if scid is not None},
        )
        new_joiners = {
            scid for scid in sorted(remaining)
            if deg.get(scid, 0) >= exp_threshold
            and vote_sum.get(scid, 0) == deg.get(scid, 0)
            and deg.get(scid, 0) > 0
        }
        trace["si_records"].append(
            {
                "where": "superclusters",
                "level": i,
                "iteration": iterations,
                "marked_before": frozenset(marked),
                "joined": sorted(new_joiners),
                "sc_members": {s: frozenset(vset[s]) for s in new_joiners},
                "deg": {s: deg.get(s, 0) for s in new_joiners},
            }
        )
        if not new_joiners:
            break
        joined_sc |= new_joiners
        remaining -= new_joiners
        at_center = forest.broadcast(
            g, cfg, ledger, f"sc-join-down2:P{i}.{iterations}",
            {scid: 1 for scid in new_joiners},
        )
        know_join = clustering_broadcast(
            g, cfg, ledger, f"sc-join-down1:P{i}.{iterations}", clustering,
            {c: at_center[c].get(sc_of_vertex.get(c), 0)
             for c in clustering.centers},
        )
        out = {}
        newly_marked = set()
        for v, scid in sc_of_vertex.items():
            if know_join.get(v):
                if v not in marked:
                    newly_marked.add(v)
                out[v] = {u: Msg(8, (TAG_SUCCESS,)) for u in g.adj[v]}
        got = exchange(g, cfg, ledger, f"sc-success:P{i}.{iterations}", out)
        for v in g.vertices:
            if v not in marked and any(b[0] == TAG_SUCCESS for _s, b in got[v]):
                newly_marked.add(v)
        marked |= newly_marked

    trace["levels"].setdefault(i, {})
    trace.setdefault("iterations", {})[i] = iterations

    _cover_remaining(
        g, k, cfg, ledger, trace, H, clustering, scs, vset, sc_of_vertex,
        remaining, marked, nbr_sc, i,
    )

    # new clusters around all centers of the successful superclusters
    z_i = sorted({c for scid in joined_sc for c in scs[scid].clusters})
    trace.setdefault("z_sizes", {})[i] = len(z_i)
    new_clustering, led = grow_bfs_clusters(g, set(z_i), i, cfg, level=i)
    ledger.extend_sequential(led, name=f"grow:P{i}")
    for e in new_clustering.tree_edges():
        H.add(*e, f"sc-tree:L{i}")

    new_sc = _regroup(
        g, k, cfg, ledger, H, new_clustering,
        [scs[s] for s in sorted(joined_sc)], i,
    )
    return new_clustering, new_sc


def _cover_remaining(g, k, cfg, ledger, trace, H, clustering, scs, vset,
                     sc_of_vertex, remaining, marked, nbr_sc, i):
    """Low-expansion superclusters: direct edges into singletons, bipartite
    spanners toward the outside and recursion inside for the rest."""
    singles = {s for s in remaining if len(scs[s].clusters) == 1}
    out = {}
    for v, scid in sc_of_vertex.items():
        if scid in singles:
            out[v] = {u: Msg(8 + g.id_bits, (TAG_UNCOV, scid)) for u in g.adj[v]}
    got = exchange(g, cfg, ledger, f"sc-uncov:P{i}", out)
    out = {}
    for v in g.vertices:
        if v in marked:
            continue
        best: Dict[int, int] = {}
        for s, b in got[v]:
            if b[0] == TAG_UNCOV and (b[1] not in best or s < best[b[1]]):
                best[b[1]] = s
        for scid, u in sorted(best.items()):
            out.setdefault(v, {})[u] = Msg(8, (TAG_EDGE,))
            H.add(v, u, f"sc-single:L{i}")
    exchange(g, cfg, ledger, f"sc-single-edges:P{i}", out)

    sub_ledgers: List[RoundLedger] = []
    from ..spanner3 import Bipartition

    instances = trace.setdefault("bipartite_instances", {}).setdefault(i, [])
    for scid in sorted(remaining - singles):
        members = sorted(vset[scid])
        mset = set(members)
        outside = sorted(
            {
                u
                for v in members
                for u in g.adj[v]
                if u not in mset and u not in marked
            }
        )
        if outside:
            cross = [
                (v, u)
                for v in members
                for u in g.adj[v]
                if u not in mset and u not in marked
            ]
            bip = g.edge_subgraph(mset | set(outside), cross)
            instances.append((frozenset(mset), frozenset(outside)))
            res = sparser_bipartite_spanner(
                bip, Bipartition(mset, set(outside)), k, cfg
            )
            for e in sorted(res.spanner.edges):
                H.add(*e, f"sc-bip:L{i}")
            sub_ledgers.append(res.ledger)
        internal = [e for e in g.edge_set if e[0] in mset and e[1] in mset]
        if internal:
            sub = g.subgraph(mset)
            res = improved_spanner(sub, k, cfg)
            for e in sorted(res.spanner.edges):
                H.add(*e, f"sc-rec:L{i}")
            sub_ledgers.append(res.ledger)
    if sub_ledgers:
        ledger.extend_parallel(sub_ledgers, name=f"sc-cover:P{i}")


def _regroup(g, k, cfg, ledger, H, clustering, successful: List[Supercluster],
             i) -> Superclustering:
    """Re-group the new clusters into a nice superclustering: oversized
    clusters become singletons; each successful supercluster's tree is
    partitioned by cluster count and then by vertex count."""
    n = g.n
    big_bound = max(1, math.ceil(math.sqrt(n)))
    sizes = clustering_aggregate(
        g, cfg, ledger, f"sizes:P{i}", clustering,
        {v: 1 for v in clustering.membership},
    )
    members = clustering.members()
    big = {c for c in clustering.centers if sizes[c] >= big_bound}
    superclusters: List[Supercluster] = []
    depth_bound = max((sc.depth_bound for sc in successful), default=1)
    depth_bound = max(depth_bound, i)
    for c in sorted(big):
        # a singleton supercluster's lone center needs no connecting tree;
        # intra-supercluster traffic rides its (vertex-disjoint) cluster tree
        superclusters.append(
            Supercluster(
                sc_id=max(members[c]),
                clusters=frozenset([c]),
                tree_edges=frozenset(),
                root=c,
                depth_bound=depth_bound,
            )
        )

    b_clusters = ipow_ceil(n, k - 2 * i, 2 * k)  # n^(1/2 - i/k)
    b_vertices = big_bound
    part_ledgers: List[RoundLedger] = []
    for sc in successful:
        small_centers = [c for c in sorted(sc.clusters) if c not in big]
        if not small_centers:
            continue
        if not sc.tree_edges:
            # lone-vertex tree: the single center forms one supercluster
            c = sc.root
            if c in small_centers:
                superclusters.append(
                    Supercluster(
                        sc_id=max(members[c]), clusters=frozenset([c]),
                        tree_edges=frozenset(), root=c, depth_bound=depth_bound,
                    )
                )
            continue
        wt1 = WeightedTree(
            edges=sc.tree_edges,
            root=sc.root,
            weights={c: 1 for c in small_centers},
            bound=b_clusters,
        )
        tp1, led = partition_tree(wt1, cfg)
        part_ledgers.append(led)
        for part in tp1.parts:
            cs = [c for c in sorted(part.owned) if c in small_centers]
            if not cs:
                continue
            if not part.edges:
                superclusters.append(
                    Supercluster(
                        sc_id=max(max(members[c]) for c in cs),
                        clusters=frozenset(cs),
                        tree_edges=frozenset(),
                        root=part.root,
                        depth_bound=depth_bound,
                    )
                )
                continue
            wt2 = WeightedTree(
                edges=part.edges,
                root=part.root,
                weights={c: sizes[c] for c in cs},
                bound=b_vertices,
            )
            tp2, led = partition_tree(wt2, cfg)
            part_ledgers.append(led)
            for p2 in tp2.parts:
                cs2 = [c for c in sorted(p2.owned) if c in cs]
                if cs2:
                    superclusters.append(
                        Supercluster(
                            sc_id=max(max(members[c]) for c in cs2),
                            clusters=frozenset(cs2),
                            tree_edges=p2.edges,
                            root=p2.root,
                            depth_bound=depth_bound,
                        )
                    )
    if part_ledgers:
        ledger.extend_parallel(part_ledgers, name=f"regroup:P{i}")
    return Superclustering(
        level=i,
        superclusters=superclusters,
        vertex_bound=2 * big_bound + 1,
        cluster_bound=2 * b_clusters + 1,
        count_bound=4 * big_bound + 4,
    )
