"""Randomized cluster-sampling (2k-1)-spanner used as a size comparator.

Level by level, every cluster center survives independently with
probability n^(-1/k) (derandomized only by the run's seed: each center
draws from its own seeded stream, so the construction is reproducible).
Vertices adjacent to a surviving cluster join it through one edge; the
rest connect once to every neighboring old cluster.
"""

from __future__ import annotations

import random
from typing import Dict, Optional

from ..clustering import Clustering
from ..graph import Graph, Spanner
from ..results import SpannerRun
from ..sim import Msg, RoundLedger, SimConfig
from .common import clustering_broadcast, exchange

TAG_STATUS, TAG_EDGE = 0, 1


def _survives(seed: int, center: int, level: int, inv_prob: float) -> bool:
    rng = random.Random(seed * 1_000_003 + center * 1_009 + level)
    return rng.random() < inv_prob


def baswana_sen_baseline(
    g: Graph, k: int, seed: int, cfg: Optional[SimConfig] = None
) -> SpannerRun:
    if k < 2:
        raise ValueError("k must be >= 2")
    if g.weighted:
        raise ValueError("weighted graphs are not supported by the baseline")
    cfg = (cfg or SimConfig()).resolved(g)
    n = g.n
    H = Spanner(g)
    ledger = RoundLedger()
    prob = n ** (-1.0 / k) if n > 1 else 1.0
    clustering = Clustering.singletons(g.vertices)
    trace: Dict = {"k": k, "seed": seed, "levels": {}}

    for i in range(1, k):
        # centers flip their own seeded coin; members learn over the tree
        sampled = {
            c for c in sorted(clustering.centers)
            if _survives(seed, c, i, prob)
        }
        know = clustering_broadcast(
            g, cfg, ledger, f"bs-sample:L{i}", clustering,
            {c: 1 for c in sampled},
        )
        out = {}
        for v, c in clustering.membership.items():
            m = Msg(8 + g.id_bits + 1, (TAG_STATUS, c, know.get(v, 0)))
            out[v] = {u: m for u in g.adj[v]}
        got = exchange(g, cfg, ledger, f"bs-status:L{i}", out)

        membership: Dict[int, int] = {}
        parents: Dict[int, Optional[int]] = {}
        new_edges = []
        uncovered = []
        for v in g.vertices:
            own = clustering.membership.get(v)
            if own in sampled:
                membership[v] = own
                parents[v] = clustering.parents[v]
                continue
            offers = [
                (s, b[1]) for s, b in got[v] if b[0] == TAG_STATUS and b[2]
            ]
            if offers:
                # join one sampled neighboring cluster through one edge
                sender, c = min(offers, key=lambda sc: (sc[1], sc[0]))
                membership[v] = c
                parents[v] = sender
                new_edges.append((v, sender))
            else:
                # connect once to every neighboring old cluster
                per_cluster: Dict[int, int] = {}
                for s, b in got[v]:
                    if b[0] == TAG_STATUS and (b[1] not in per_cluster or s < per_cluster[b[1]]):
                        per_cluster[b[1]] = s
                for c, u in sorted(per_cluster.items()):
                    uncovered.append((v, u))
        out = {}
        for v, u in new_edges:
            H.add(v, u, f"bs-tree:L{i}")
            out.setdefault(v, {})[u] = Msg(8, (TAG_EDGE,))
        for v, u in uncovered:
            H.add(v, u, f"bs-cover:L{i}")
            out.setdefault(v, {})[u] = Msg(8, (TAG_EDGE,))
        exchange(g, cfg, ledger, f"bs-edges:L{i}", out)
        clustering = Clustering(
            level=i, membership=membership, parents=parents, depth_bound=i
        )
        trace["levels"][i] = len(sampled)

    # last level: everyone connects to each neighboring cluster
    out = {}
    for v, c in clustering.membership.items():
        m = Msg(8 + g.id_bits, (TAG_STATUS, c, 1))
        out[v] = {u: m for u in g.adj[v]}
    got = exchange(g, cfg, ledger, "bs-final-status", out)
    out = {}
    for v in g.vertices:
        own = clustering.membership.get(v)
        per_cluster: Dict[int, int] = {}
        for s, b in got[v]:
            if b[0] == TAG_STATUS and b[1] != own:
                if b[1] not in per_cluster or s < per_cluster[b[1]]:
                    per_cluster[b[1]] = s
        for c, u in sorted(per_cluster.items()):
            H.add(v, u, "bs-final")
            out.setdefault(v, {})[u] = Msg(8, (TAG_EDGE,))
    exchange(g, cfg, ledger, "bs-final-edges", out)
    trace["size"] = H.size
    return SpannerRun(H, ledger, trace)
