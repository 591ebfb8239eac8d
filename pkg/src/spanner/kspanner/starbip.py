"""Sparser (2k-1)-spanner for unbalanced bipartite graphs.

The B side joins stars around A-side centers, and the cluster-by-cluster
election then runs on the star graph with k' = k/2 levels (odd k: (k-1)/2),
marking whole stars instead of vertices.  Star-level clusters are realized
as vertex-disjoint trees in the original graph (member - leader - uplink
chains), so intra-cluster traffic costs O(1) rounds per star hop.  Phase 1
uses the two-sided 2-approximation of the unmarked star-degree; later
phases count exactly through per-cluster representatives and maintain the
count by marked-star deltas.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Set, Tuple

from ..clustering import Clustering
from ..graph import Graph, Spanner
from ..results import SpannerRun
from ..sim import Msg, NodeProgram, RoundLedger, SimConfig, run
from .common import (
    chunked_gather,
    chunked_scatter,
    clustering_aggregate,
    clustering_broadcast,
    exchange,
    ipow_ceil,
)

TAG_CHOSE, TAG_ACK, TAG_TUPLE, TAG_STARMAX, TAG_VACK, TAG_SUCCESS, TAG_MARKED, \
    TAG_EDGE, TAG_CID = range(9)


class StarState:
    """Host-tracked mirror of the per-vertex local knowledge."""

    def __init__(self, g: Graph, a_side: Set[int], b_side: Set[int]):
        self.g = g
        self.a = a_side
        self.b = b_side
        self.star_of: Dict[int, Optional[int]] = {}
        self.members: Dict[int, List[int]] = {}
        self.nbr_star: Dict[int, Dict[int, int]] = {v: {} for v in g.vertices}

    def star_vertices(self, s: int) -> List[int]:
        return [s] + self.members.get(s, [])

    def stars(self) -> List[int]:
        return sorted(self.members)


def _form_stars(g, cfg, ledger, st: StarState, H: Spanner) -> None:
    """One round: every B vertex with an A neighbor picks its star center
    (closest first on weighted graphs, then smallest ID) and tells all its
    neighbors; star edges enter the spanner."""
    out: Dict[int, Dict[int, Msg]] = {}
    for v in sorted(st.b):
        cands = [u for u in g.adj[v] if u in st.a]
        if not cands:
            continue
        if g.weighted:
            c = min(cands, key=lambda u: (g.weight(v, u), u))
        else:
            c = min(cands)
        st.star_of[v] = c
        H.add(v, c, "star")
        m = Msg(8 + g.id_bits, (TAG_CHOSE, c))
        out[v] = {u: m for u in g.adj[v]}
    got = exchange(g, cfg, ledger, "star-formation", out)
    for a in sorted(st.a):
        st.star_of[a] = a
        st.members[a] = []
    for v in g.vertices:
        for sender, body in got[v]:
            if body[0] == TAG_CHOSE:
                st.nbr_star[v][sender] = body[1]
        for u in g.adj[v]:
            if u in st.a:
                st.nbr_star[v][u] = u
    for v in sorted(st.b):
        c = st.star_of.get(v)
        if c is not None:
            st.members[c].append(v)


def _star_gtree(st: StarState, cluster_of: Dict[int, Optional[int]],
                uplinks: Dict[int, Tuple[int, int]], level: int) -> Clustering:
    """Realize the star-level clustering as vertex trees in g: members hang
    off their leader, each non-root star hangs off its uplink edge."""
    membership = {}
    parents: Dict[int, Optional[int]] = {}
    for s in st.stars():
        c = cluster_of.get(s)
        if c is None:
            continue
        for v in st.star_vertices(s):
            membership[v] = c
        if s == c:
            parents[s] = None
            for v in st.members[s]:
                parents[v] = s
        else:
            rel, off = uplinks[s]
            parents[rel] = off
            if rel != s:
                parents[s] = rel
            for v in st.members[s]:
                if v != rel:
                    parents[v] = s
    return Clustering(
        level=level,
        membership=membership,
        parents=parents,
        depth_bound=3 * level + 2,
    )


class StarBFS(NodeProgram):
    """Star-graph BFS from the new centers: three rounds per star hop
    (cluster vertices announce, star members relay the best offer to their
    leader, the leader adopts and broadcasts).  Ties prefer the larger
    cluster ID, then the smallest relay edge."""

    name = "star-bfs"

    TAG_OFFER, TAG_RELAY, TAG_ADOPT = 0, 1, 2

    def __init__(self, depth: int):
        self.depth = depth

    def init(self, view):
        p = view.private or {}
        return {
            "leader": p.get("leader"),      # None for non-star vertices
            "is_center": bool(p.get("center")),
            "cid": None,
            "hop": None,
            "uplink": None,
            "announced": False,
            "buffer": [],                   # buffered offers/relays
        }

    def on_round(self, state, view, rnd, inbox):
        out = {}
        phase = rnd % 3  # 1: adopt/broadcast, 2: announce, 0: relay
        for sender, body in inbox:
            tag = body[0]
            if tag == self.TAG_ADOPT and sender == state["leader"]:
                state["cid"] = body[1]
                state["hop"] = body[2]
            elif tag in (self.TAG_OFFER, self.TAG_RELAY):
                state["buffer"].append((sender, body))
        if rnd == 1 and state["is_center"]:
            state["cid"] = view.vid
            state["hop"] = 0
            m = Msg(8 + view.bits.id_bits + view.bits.counter(self.depth),
                    (self.TAG_ADOPT, view.vid, 0))
            for u in view.private.get("members", ()):
                out[u] = m
        if phase == 2 and state["cid"] is not None and not state["announced"]:
            state["announced"] = True
            m = Msg(8 + view.bits.id_bits, (self.TAG_OFFER, state["cid"]))
            for u in view.neighbors:
                out.setdefault(u, m)
        if phase == 0 and state["cid"] is None and state["buffer"]:
            if state["leader"] is not None and state["leader"] != view.vid:
                # member: relay the best offer heard to the leader
                best = None
                for sender, body in state["buffer"]:
                    if body[0] != self.TAG_OFFER:
                        continue
                    key = (body[1], -sender)
                    if best is None or key > best:
                        best = key
                if best is not None:
                    m = Msg(8 + 2 * view.bits.id_bits,
                            (self.TAG_RELAY, best[0], -best[1]))
                    out[state["leader"]] = m
                state["buffer"] = []
        if phase == 1 and rnd > 1 and state["cid"] is None \
                and state["leader"] == view.vid:
            hop = (rnd - 1) // 3
            if hop <= self.depth and state["buffer"]:
                best = None
                for sender, body in state["buffer"]:
                    if body[0] == self.TAG_RELAY:
                        key = (body[1], -sender, -body[2])
                    else:  # direct offer to the leader
                        key = (body[1], -view.vid, -sender)
                    if best is None or key > best:
                        best = key
                state["buffer"] = []
                if best is not None:
                    cid, rel, off = best[0], -best[1], -best[2]
                    state["cid"] = cid
                    state["hop"] = hop
                    state["uplink"] = (rel, off)
                    m = Msg(8 + view.bits.id_bits + view.bits.counter(self.depth),
                            (self.TAG_ADOPT, cid, hop))
                    for u in view.private.get("members", ()):
                        out[u] = m
        done = rnd >= 3 * (self.depth + 1)
        return out, done and not out

    def on_finish(self, state, view):
        return {
            "cid": state["cid"],
            "hop": state["hop"],
            "uplink": state["uplink"],
        }


def _grow_star_clusters(
    g, cfg, ledger, st: StarState, centers: Set[int], depth: int
) -> Tuple[Dict[int, Optional[int]], Dict[int, Tuple[int, int]]]:
    private = {}
    for v in g.vertices:
        s = st.star_of.get(v)
        private[v] = {
            "leader": s,
            "center": v in centers,
            "members": tuple(st.members.get(v, ())) if v == s else (),
        }
    outputs, led = run(g, StarBFS(depth), cfg, private=private)
    ledger.extend_sequential(led, name=f"star-bfs:d{depth}")
    cluster_of: Dict[int, Optional[int]] = {}
    uplinks: Dict[int, Tuple[int, int]] = {}
    for s in st.stars():
        res = outputs[s]
        cluster_of[s] = res["cid"]
        if res["uplink"] is not None:
            uplinks[s] = res["uplink"]
    return cluster_of, uplinks


def sparser_bipartite_spanner(
    g: Graph,
    part,
    k: int,
    cfg: Optional[SimConfig] = None,
    spanner: Optional[Spanner] = None,
) -> SpannerRun:
    """(2k-1)-spanner of the A-to-B edges with O(k|A|^{1+2/k} + |B|) edges
    (odd k: exponent 1 + 2/(k-1)).  Within-side edges are ignored."""
    if k < 2:
        raise ValueError("k must be >= 2")
    cfg = (cfg or SimConfig()).resolved(g)
    a_side = set(part.a)
    b_side = set(part.b)
    if k == 2:
        from ..spanner3 import bipartite_3_spanner

        res = bipartite_3_spanner(g, part, cfg)
        if spanner is not None:
            spanner.merge(res.spanner)
            res.spanner = spanner
        return res
    kp = k // 2 if k % 2 == 0 else (k - 1) // 2
    H = spanner if spanner is not None else Spanner(g)
    ledger = RoundLedger()
    trace: Dict = {"k": k, "k_prime": kp, "phases": {}, "approx": []}
    st = StarState(g, a_side, b_side)
    _form_stars(g, cfg, ledger, st, H)
    trace["stars"] = {s: tuple(ms) for s, ms in st.members.items()}
    A = len(st.stars())
    if A == 0:
        return SpannerRun(H, ledger, trace)

    cluster_of: Dict[int, Optional[int]] = {s: s for s in st.stars()}
    gtree = _star_gtree(st, cluster_of, {}, 0)
    marked: Set[int] = set()

    for i in range(1, kp):
        cluster_of, gtree, marked = _phase(
            g, cfg, ledger, trace, H, st, cluster_of, gtree, A, kp, i
        )
    _last_phase(g, cfg, ledger, H, st, cluster_of, gtree)
    trace["size"] = H.size
    return SpannerRun(H, ledger, trace)


def _announce_star_clusters(g, cfg, ledger, st, cluster_of, name):
    """Clustered vertices announce their cluster; returns v -> {nbr: cid}."""
    out = {}
    for v in g.vertices:
        s = st.star_of.get(v)
        c = cluster_of.get(s) if s is not None else None
        if c is None:
            continue
        m = Msg(8 + g.id_bits, (TAG_CID, c))
        out[v] = {u: m for u in g.adj[v]}
    got = exchange(g, cfg, ledger, name, out)
    return {
        v: {s: b[1] for s, b in got[v] if b[0] == TAG_CID} for v in g.vertices
    }


def _mark_announce(g, cfg, ledger, st, newly_marked_stars, nbr_marked, name):
    """Vertices of newly marked stars tell their neighbors."""
    out = {}
    for s in sorted(newly_marked_stars):
        for v in st.star_vertices(s):
            out[v] = {u: Msg(8, (TAG_MARKED,)) for u in g.adj[v]}
    got = exchange(g, cfg, ledger, name, out)
    for v in g.vertices:
        for sender, body in got[v]:
            if body[0] == TAG_MARKED:
                nbr_marked[v].add(sender)


def _phase(g, cfg, ledger, trace, H, st, cluster_of, gtree, A, kp, i):
    """One clustering level of the star-graph election."""
    threshold = ipow_ceil(A, i, kp)
    cap = 4 * ipow_ceil(A, kp - i, kp) + 2
    stars = st.stars()
    remaining = {c for c in set(cluster_of.values()) if c is not None}
    clustered_stars = {s for s in stars if cluster_of.get(s) is not None}
    marked: Set[int] = set()        # marked stars
    nbr_marked: Dict[int, Set[int]] = {v: set() for v in g.vertices}

    nbr_cluster = _announce_star_clusters(
        g, cfg, ledger, st, cluster_of, f"bip-announce:L{i}"
    )

    # per-cluster representatives inside each star, and exact initial counts
    reps: Dict[int, Dict[int, Tuple[int, int]]] = {s: {} for s in stars}
    deg: Dict[int, int] = {}
    if i == 1:
        deg = _approx_degree(
            g, cfg, ledger, st, cluster_of, marked, nbr_marked, f"L{i}.0"
        )
        trace["approx"].append(
            {"level": i, "deg_hat": dict(deg), "marked": frozenset(marked),
             "cluster_of": dict(cluster_of)}
        )
    else:
        reps = _compute_reps(g, cfg, ledger, st, nbr_cluster, f"L{i}")
        out = {}
        for s in stars:
            for c, (rep, contact) in reps[s].items():
                out.setdefault(rep, {})[contact] = Msg(8, (TAG_ACK,))
        got = exchange(g, cfg, ledger, f"bip-count:L{i}", out)
        acks = {v: sum(1 for _s, b in got[v] if b[0] == TAG_ACK) for v in g.vertices}
        deg = clustering_aggregate(
            g, cfg, ledger, f"bip-deg:L{i}", gtree, acks, bound=max(2, 2 * g.n)
        )

    joined: Set[int] = set()
    iterations = 0
    while True:
        iterations += 1
        if iterations > cap:
            raise RuntimeError(f"bipartite phase {i} exceeded cap {cap}")
        new_joiners = _election(
            g, cfg, ledger, st, cluster_of, gtree, remaining, marked,
            nbr_marked, deg, threshold, f"L{i}.{iterations}"
        )
        trace.setdefault("si_records", []).append(
            {"where": "bipartite", "level": i, "iteration": iterations,
             "joined": sorted(new_joiners)}
        )
        if not new_joiners:
            break
        joined |= new_joiners
        remaining -= new_joiners
        newly_marked = _mark_after_join(
            g, cfg, ledger, st, cluster_of, gtree, new_joiners, marked,
            clustered_stars, f"L{i}.{iterations}"
        )
        _mark_announce(
            g, cfg, ledger, st, newly_marked, nbr_marked,
            f"bip-marked:L{i}.{iterations}"
        )
        if i == 1:
            deg = _approx_degree(
                g, cfg, ledger, st, cluster_of, marked, nbr_marked,
                f"L{i}.{iterations}"
            )
            trace["approx"].append(
                {"level": i, "deg_hat": dict(deg), "marked": frozenset(marked),
                 "cluster_of": dict(cluster_of)}
            )
        else:
            # deltas: each newly marked star retracts one unit per cluster
            out = {}
            for s in sorted(newly_marked):
                for c, (rep, contact) in reps[s].items():
                    out.setdefault(rep, {})[contact] = Msg(8, (TAG_MARKED,))
            got = exchange(g, cfg, ledger, f"bip-delta:L{i}.{iterations}", out)
            dec = {v: sum(1 for _s, b in got[v] if b[0] == TAG_MARKED)
                   for v in g.vertices}
            drop = clustering_aggregate(
                g, cfg, ledger, f"bip-deg-delta:L{i}.{iterations}", gtree, dec,
                bound=max(2, 2 * g.n),
            )
            for c in remaining:
                deg[c] -= drop.get(c, 0)
    trace["phases"][i] = {"iterations": iterations, "joined": len(joined)}

    # uncovered stars: one edge per (unmarked star, remaining cluster) pair
    out = {}
    for s in stars:
        if s in marked:
            continue
        per_cluster: Dict[int, Tuple[int, int]] = {}
        for v in st.star_vertices(s):
            for u, c in nbr_cluster[v].items():
                if c in remaining:
                    key = (v, u)
                    if c not in per_cluster or key < per_cluster[c]:
                        per_cluster[c] = key
        for c, (v, u) in sorted(per_cluster.items()):
            out.setdefault(v, {})[u] = Msg(8, (TAG_EDGE,))
            H.add(v, u, f"star-uncovered:L{i}")
    exchange(g, cfg, ledger, f"bip-cover:L{i}", out)

    new_cluster_of, uplinks = _grow_star_clusters(g, cfg, ledger, st, joined, i)
    for s, (rel, off) in sorted(uplinks.items()):
        H.add(rel, off, f"star-tree:L{i}")
    new_gtree = _star_gtree(st, new_cluster_of, uplinks, i)
    return new_cluster_of, new_gtree, marked


def _approx_degree(g, cfg, ledger, st, cluster_of, marked, nbr_marked, label):
    """Phase-1 unmarked star-degree 2-approximation: stars seen by the
    leader's own edges, plus one ACK per unmarked star sent leader-to-star."""
    out = {}
    for leader in st.stars():
        if leader in marked:
            continue
        per_star: Dict[int, int] = {}
        for u, s2 in st.nbr_star[leader].items():
            if s2 != leader and u not in nbr_marked[leader]:
                if s2 not in per_star or u < per_star[s2]:
                    per_star[s2] = u
        if per_star:
            out[leader] = {u: Msg(8, (TAG_ACK,)) for u in per_star.values()}
    got = exchange(g, cfg, ledger, f"bip-type2:{label}", out)
    acks = {v: sum(1 for _s, b in got[v] if b[0] == TAG_ACK) for v in g.vertices}
    # members pass their ACK counts up to the leader (radius-1 gather)
    cbits = max(1, g.n.bit_length())
    out = {}
    for s in st.stars():
        for v in st.members[s]:
            if acks.get(v):
                out[v] = {s: Msg(8 + cbits, (TAG_ACK, acks[v]))}
    got = exchange(g, cfg, ledger, f"bip-type2-up:{label}", out)
    deg = {}
    for s in st.stars():
        if cluster_of.get(s) is None or s in marked:
            continue
        type2 = acks.get(s, 0) + sum(b[1] for _x, b in got[s] if b[0] == TAG_ACK)
        seen = {s}
        for u, s2 in st.nbr_star[s].items():
            if u not in nbr_marked[s]:
                seen.add(s2)
        type1 = len(seen)
        deg[s] = type1 + type2
    return deg


def _compute_reps(g, cfg, ledger, st, nbr_cluster, label):
    """Leaders learn which member can reach which cluster and assign one
    representative per neighboring cluster (chunked gather + scatter)."""
    hub_of = {}
    items = {}
    expect = {}
    for s in st.stars():
        expect[s] = list(st.members[s])
        hub_of[s] = s
        items[s] = sorted({c for c in nbr_cluster[s].values()})
        for v in st.members[s]:
            hub_of[v] = s
            items[v] = sorted({c for c in nbr_cluster[v].values()})
    gathered = chunked_gather(g, cfg, ledger, f"bip-reps-up:{label}",
                              hub_of, items, expect)
    reps: Dict[int, Dict[int, Tuple[int, int]]] = {}
    plans: Dict[int, Dict[int, List[int]]] = {}
    for s in st.stars():
        lists = gathered[s]
        per_cluster: Dict[int, int] = {}
        for member in sorted(lists):
            for c in lists[member]:
                if c not in per_cluster or member < per_cluster[c]:
                    per_cluster[c] = member
        reps[s] = {}
        # every member gets a (possibly empty) assignment stream
        plan: Dict[int, List[int]] = {v: [] for v in st.members[s]}
        for c, member in sorted(per_cluster.items()):
            contact = min(
                u for u, cc in nbr_cluster[member].items() if cc == c
            )
            reps[s][c] = (member, contact)
            if member != s:
                plan[member].append(c)
        if plan:
            plans[s] = plan
    chunked_scatter(g, cfg, ledger, f"bip-reps-down:{label}", plans, hub_of)
    return reps


def _election(g, cfg, ledger, st, cluster_of, gtree, remaining, marked,
              nbr_marked, deg, threshold, label):
    """Approximate local-maxima test by per-edge acknowledgements."""
    know = clustering_broadcast(
        g, cfg, ledger, f"bip-tuple-down:{label}", gtree,
        {c: deg.get(c, 0) for c in remaining},
    )
    cbits = max(1, (2 * g.n).bit_length())
    out = {}
    tuple_sent: Dict[int, List[int]] = {}
    for v, c in gtree.membership.items():
        if c in remaining:
            m = Msg(8 + g.id_bits + cbits, (TAG_TUPLE, know[v], c))
            out[v] = {u: m for u in g.adj[v]}
            # edges on which an acknowledgement is owed back: neighbors in
            # stars not known to be marked
            tuple_sent[v] = [
                u for u in g.adj[v]
                if u in st.nbr_star[v] and u not in nbr_marked[v]
            ]
    got = exchange(g, cfg, ledger, f"bip-tuples:{label}", out)
    heard: Dict[int, List[Tuple[int, Tuple]]] = {
        v: [(s, b) for s, b in got[v] if b[0] == TAG_TUPLE] for v in g.vertices
    }
    # members of unmarked stars relay their best tuple to the leader
    out = {}
    for s in st.stars():
        if s in marked:
            continue
        for v in st.members[s]:
            best = None
            for sender, b in heard[v]:
                key = (b[1], b[2])
                if best is None or key > best:
                    best = key
            if best is not None:
                out[v] = {s: Msg(8 + g.id_bits + cbits, (TAG_TUPLE,) + best)}
    got2 = exchange(g, cfg, ledger, f"bip-star-max-up:{label}", out)
    star_max: Dict[int, Tuple] = {}
    for s in st.stars():
        if s in marked:
            continue
        best = None
        for sender, b in list(heard[s]) + list(got2[s]):
            if b[0] != TAG_TUPLE:
                continue
            key = (b[1], b[2])
            if best is None or key > best:
                best = key
        if best is not None:
            star_max[s] = best
    out = {}
    for s, best in sorted(star_max.items()):
        m = Msg(8 + g.id_bits + cbits, (TAG_STARMAX,) + best)
        out[s] = {u: m for u in st.members[s]}
    got3 = exchange(g, cfg, ledger, f"bip-star-max-down:{label}", out)
    known_max: Dict[int, Tuple] = dict(star_max)
    for v in g.vertices:
        for sender, b in got3[v]:
            if b[0] == TAG_STARMAX:
                known_max[v] = (b[1], b[2])
    # ACK every neighbor whose tuple equals the star's maximum
    out = {}
    for v in g.vertices:
        s = st.star_of.get(v)
        if s is None or s in marked or v not in known_max:
            continue
        targets = {}
        for sender, b in heard[v]:
            if (b[1], b[2]) == known_max[v]:
                targets[sender] = Msg(8, (TAG_VACK,))
        if targets:
            out[v] = targets
    got4 = exchange(g, cfg, ledger, f"bip-vacks:{label}", out)
    ok = {}
    for v in g.vertices:
        if v not in tuple_sent:
            continue
        ackers = {s for s, b in got4[v] if b[0] == TAG_VACK}
        ok[v] = 1 if all(u in ackers for u in tuple_sent[v]) else 0
    is_max = clustering_aggregate(
        g, cfg, ledger, f"bip-maxima:{label}", gtree, ok, combine="min",
        bound=2,
    )
    joiners = {
        c for c in sorted(remaining)
        if deg.get(c, 0) >= threshold and is_max.get(c, 0) == 1
    }
    return joiners


def _mark_after_join(g, cfg, ledger, st, cluster_of, gtree, new_joiners,
                     marked, clustered_stars, label):
    """Winning clusters' vertices announce success; every star that hears it
    (or belongs to a winner) marks itself, leader included."""
    know = clustering_broadcast(
        g, cfg, ledger, f"bip-join-down:{label}", gtree,
        {c: 1 for c in new_joiners},
    )
    out = {}
    for v, c in gtree.membership.items():
        if know.get(v):
            out[v] = {u: Msg(8, (TAG_SUCCESS,)) for u in g.adj[v]}
    got = exchange(g, cfg, ledger, f"bip-success:{label}", out)
    hit: Set[int] = set()
    for v in g.vertices:
        s = st.star_of.get(v)
        if s is None:
            continue
        if know.get(v) or any(b[0] == TAG_SUCCESS for _x, b in got[v]):
            hit.add(v)
    # members relay the hit to their leader, leaders mark the star
    out = {}
    for v in sorted(hit):
        s = st.star_of[v]
        if v != s:
            out[v] = {s: Msg(8, (TAG_SUCCESS,))}
    got2 = exchange(g, cfg, ledger, f"bip-mark-up:{label}", out)
    newly = set()
    for s in st.stars():
        if s in marked:
            continue
        if s in hit or any(b[0] == TAG_SUCCESS for _x, b in got2[s]):
            newly.add(s)
    # leaders tell members the star is marked
    out = {}
    for s in sorted(newly):
        if st.members[s]:
            out[s] = {v: Msg(8, (TAG_MARKED,)) for v in st.members[s]}
    exchange(g, cfg, ledger, f"bip-mark-down:{label}", out)
    marked |= newly
    return newly


def _last_phase(g, cfg, ledger, H, st, cluster_of, gtree):
    """Every star adds one edge toward each of its neighboring clusters."""
    nbr_cluster = _announce_star_clusters(
        g, cfg, ledger, st, cluster_of, "bip-announce:last"
    )
    reps = _compute_reps(g, cfg, ledger, st, nbr_cluster, "last")
    out = {}
    for s in st.stars():
        own = cluster_of.get(s)
        for c, (rep, contact) in sorted(reps[s].items()):
            if c == own:
                continue
            out.setdefault(rep, {})[contact] = Msg(8, (TAG_EDGE,))
            H.add(rep, contact, "star-final")
    exchange(g, cfg, ledger, "bip-final-edges", out)
