"""Distributed building blocks shared by every spanner algorithm.

All primitives are NodePrograms executed under the CONGEST engine; the
host wrappers are pure functions of (graph, inputs) and return the
assembled result together with the run's RoundLedger.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .clustering import Clustering, TreePart, TreePartition, WeightedTree
from .graph import Graph, canon
from .sim import Msg, NodeProgram, RoundLedger, SimConfig, run

# ---------------------------------------------------------------------------
# BFS cluster growth
# ---------------------------------------------------------------------------


class GrowClusters(NodeProgram):
    """Multi-source BFS to a depth bound: every vertex within reach joins the
    cluster of its nearest center, breaking ties toward the larger center ID.

    Offers received in the same round share one hop distance, so the winner
    is simply the largest center ID heard that round; the parent is the
    smallest-ID neighbor that relayed the winning offer.
    """

    name = "grow-clusters"

    def __init__(self, depth: int):
        self.depth = depth

    def init(self, view):
        is_center = bool(view.private and view.private.get("center"))
        return {
            "center": view.vid if is_center else None,
            "parent": None,
            "dist": 0 if is_center else None,
        }

    def on_round(self, state, view, rnd, inbox):
        out = {}
        if rnd == 1:
            if state["center"] is not None and self.depth >= 1:
                m = view.bits.msg((state["center"], 1), ids=1, counters=(self.depth,))
                out = {u: m for u in view.neighbors}
            return out, True
        if state["center"] is None and inbox:
            best_center = -1
            best_from = None
            dist = None
            for sender, (center, d) in inbox:
                if center > best_center:
                    best_center = center
                    best_from = sender
                    dist = d
                elif center == best_center and sender < best_from:
                    best_from = sender
            state["center"] = best_center
            state["parent"] = best_from
            state["dist"] = dist
            if dist < self.depth:
                m = view.bits.msg(
                    (best_center, dist + 1), ids=1, counters=(self.depth,)
                )
                out = {u: m for u in view.neighbors if u != best_from}
        return out, True

    def on_finish(self, state, view):
        if state["center"] is None:
            return None
        return (state["center"], state["parent"], state["dist"])


def grow_bfs_clusters(
    g: Graph,
    centers: Iterable[int],
    depth: int,
    cfg: Optional[SimConfig] = None,
    level: Optional[int] = None,
) -> Tuple[Clustering, RoundLedger]:
    """Grow depth-bounded BFS clusters around the given centers."""
    centers = set(centers)
    private = {v: {"center": v in centers} for v in g.vertices}
    outputs, ledger = run(g, GrowClusters(depth), cfg, private=private)
    membership = {}
    parents = {}
    for v, outcome in outputs.items():
        if outcome is None:
            continue
        center, parent, _dist = outcome
        membership[v] = center
        parents[v] = parent
    clustering = Clustering(
        level=level if level is not None else depth,
        membership=membership,
        parents=parents,
        depth_bound=depth,
    )
    return clustering, ledger


# ---------------------------------------------------------------------------
# Tree convergecast / broadcast over edge-disjoint forests
# ---------------------------------------------------------------------------
#
# A vertex may participate in several trees at once (e.g. supercluster
# connecting trees share vertices but never edges), so its private state
# holds one role per tree: (parent, children, value).  Messages carry no
# tree identifier: the edge they travel on determines the tree.

COMBINERS = {
    "sum": (lambda a, b: a + b, 0),
    "max": (max, -(1 << 62)),
    "min": (min, 1 << 62),
}


class ForestAggregate(NodeProgram):
    """Convergecast: every tree root learns combine() over its tree's values."""

    name = "forest-aggregate"

    def __init__(self, combine: str, value_bound: int):
        self.fn, self.identity = COMBINERS[combine]
        self.bound = value_bound

    def init(self, view):
        roles = (view.private or {}).get("roles", [])
        st = []
        for parent, children, value in roles:
            st.append(
                {
                    "parent": parent,
                    "waiting": set(children),
                    "acc": value if value is not None else self.identity,
                    "sent": False,
                    "result": None,
                }
            )
        by_edge = {}
        for i, role in enumerate(st):
            if role["parent"] is not None:
                by_edge[role["parent"]] = i
            for c in roles[i][1]:
                by_edge[c] = i
        return {"roles": st, "edge_role": by_edge}

    def on_round(self, state, view, rnd, inbox):
        for sender, value in inbox:
            role = state["roles"][state["edge_role"][sender]]
            role["acc"] = self.fn(role["acc"], value)
            role["waiting"].discard(sender)
        out = {}
        done = True
        for role in state["roles"]:
            if role["waiting"]:
                done = False
                continue
            if role["parent"] is None:
                role["result"] = role["acc"]
            elif not role["sent"]:
                out[role["parent"]] = view.bits.msg(
                    role["acc"], counters=(self.bound,)
                )
                role["sent"] = True
        return out, done

    def on_finish(self, state, view):
        return [role["result"] for role in state["roles"]]


class ForestBroadcast(NodeProgram):
    """Each tree root pushes one value down to every vertex of its tree."""

    name = "forest-broadcast"

    def __init__(self, value_bound: int):
        self.bound = value_bound

    def init(self, view):
        roles = (view.private or {}).get("roles", [])
        st = []
        for parent, children, value in roles:
            st.append(
                {
                    "parent": parent,
                    "children": tuple(children),
                    "value": value if parent is None else None,
                    "sent": False,
                }
            )
        by_edge = {}
        for i, role in enumerate(st):
            if role["parent"] is not None:
                by_edge[role["parent"]] = i
            for c in role["children"]:
                by_edge[c] = i
        return {"roles": st, "edge_role": by_edge}

    def on_round(self, state, view, rnd, inbox):
        for sender, value in inbox:
            role = state["roles"][state["edge_role"][sender]]
            if sender == role["parent"]:
                role["value"] = value
        out = {}
        done = True
        for role in state["roles"]:
            if role["value"] is None:
                done = False
                continue
            if not role["sent"]:
                role["sent"] = True
                m = view.bits.msg(role["value"], counters=(self.bound,))
                for c in role["children"]:
                    out[c] = m
        return out, done

    def on_finish(self, state, view):
        return [role["value"] for role in state["roles"]]


def cluster_aggregate(
    g: Graph,
    clustering: Clustering,
    values: Dict[int, int],
    combine: str = "sum",
    value_bound: Optional[int] = None,
    cfg: Optional[SimConfig] = None,
) -> Tuple[Dict[int, int], RoundLedger]:
    """Each cluster center learns combine() over its members' values.

    Runs in O(depth_bound) rounds; clusters aggregate in parallel because
    their trees are vertex-disjoint.
    """
    if value_bound is None:
        value_bound = max(1, max((abs(v) for v in values.values()), default=1))
    bound = value_bound if combine != "sum" else value_bound * max(g.n, 1)
    children = clustering.children()
    private = {}
    for v in g.vertices:
        if v in clustering.membership:
            private[v] = {
                "roles": [
                    (clustering.parents[v], children.get(v, ()), values.get(v, None))
                ]
            }
        else:
            private[v] = {"roles": []}
    outputs, ledger = run(g, ForestAggregate(combine, bound), cfg, private=private)
    result = {}
    for c in clustering.centers:
        result[c] = outputs[c][0]
    return result, ledger


# ---------------------------------------------------------------------------
# (4, O(log n)) ruling set
# ---------------------------------------------------------------------------


class RulingSetLog(NodeProgram):
    """Deterministic ruling set by ID-bit descent.

    One level per ID bit, most significant first.  At each level the still
    active candidates whose current bit is 0 flood a radius-3 wave; active
    candidates with bit 1 that hear it drop out.  Survivors are pairwise at
    distance >= 4 and every candidate stays within 3 * id_bits of the result.
    Each level occupies 4 rounds (3 hops + 1 receive-only), so the whole run
    is O(log n) rounds with one message per edge per round.
    """

    name = "ruling-set-log"

    def __init__(self, id_bits: int):
        self.bits_total = id_bits

    def init(self, view):
        return {
            "candidate": bool(view.private and view.private.get("candidate")),
            "active": bool(view.private and view.private.get("candidate")),
            "forwarded_level": -1,
        }

    def level_of(self, rnd: int) -> int:
        return (rnd - 1) // 4

    def on_round(self, state, view, rnd, inbox):
        out = {}
        level = self.level_of(rnd)
        if level >= self.bits_total:
            return {}, True
        bit = self.bits_total - 1 - level
        for _sender, hop in inbox:
            if state["active"] and (view.vid >> bit) & 1 == 1:
                state["active"] = False
            if hop < 3 and state["forwarded_level"] < level:
                state["forwarded_level"] = level
                m = view.bits.msg(hop + 1, counters=(3,))
                for u in view.neighbors:
                    out[u] = m
        if rnd == 4 * level + 1:
            if state["active"] and (view.vid >> bit) & 1 == 0:
                state["forwarded_level"] = level
                m = view.bits.msg(1, counters=(3,))
                for u in view.neighbors:
                    out[u] = m
        # candidates stay awake for the full schedule; everyone else sleeps
        # between floods and is woken by arriving messages
        halt = not state["active"] or level >= self.bits_total - 1 and rnd >= 4 * self.bits_total
        return out, halt

    def on_finish(self, state, view):
        return state["active"]


def ruling_set_log(
    g: Graph,
    candidates: Iterable[int],
    cfg: Optional[SimConfig] = None,
) -> Tuple[Set[int], RoundLedger]:
    """(4, O(log n))-ruling set of the candidate set with respect to g."""
    cand = set(candidates)
    if not cand:
        raise ValueError("candidate set must be nonempty")
    private = {v: {"candidate": v in cand} for v in g.vertices}
    outputs, ledger = run(g, RulingSetLog(g.id_bits), cfg, private=private)
    return {v for v, kept in outputs.items() if kept}, ledger


# ---------------------------------------------------------------------------
# Ruling set on a power graph
# ---------------------------------------------------------------------------


class NeighborhoodExchange(NodeProgram):
    """One step of the multi-step neighborhood exchange: send the currently
    known ball as an ID list when it is smaller than the degree threshold,
    otherwise a single over-threshold marker.  Lists are chunked into
    budget-sized pieces over consecutive rounds."""

    name = "neighborhood-exchange"

    TAG_LIST, TAG_END, TAG_BIG = 0, 1, 2

    def __init__(self, threshold: int):
        self.threshold = threshold

    def init(self, view):
        know = view.private or {}
        ball = know.get("ball")
        big = know.get("big", False)
        if ball is None:
            ball = frozenset([view.vid])
        per_msg = max(1, (view.budget - 8) // view.bits.id_bits)
        chunks: List[Tuple] = []
        if big or len(ball) >= self.threshold:
            chunks.append((self.TAG_BIG,))
        else:
            ids = sorted(ball)
            for i in range(0, len(ids), per_msg):
                chunks.append((self.TAG_LIST, tuple(ids[i : i + per_msg])))
            chunks.append((self.TAG_END,))
        return {
            "ball": set(ball),
            "big": big,
            "chunks": chunks,
            "cursor": 0,
            "waiting": set(view.neighbors),
            "heard": set(),
            "heard_big": False,
        }

    def on_round(self, state, view, rnd, inbox):
        for sender, body in inbox:
            tag = body[0]
            if tag == self.TAG_LIST:
                state["heard"].update(body[1])
            elif tag == self.TAG_BIG:
                state["heard_big"] = True
                state["waiting"].discard(sender)
            else:
                state["waiting"].discard(sender)
        out = {}
        if state["cursor"] < len(state["chunks"]):
            body = state["chunks"][state["cursor"]]
            state["cursor"] += 1
            nids = len(body[1]) if body[0] == self.TAG_LIST else 0
            m = view.bits.msg(body, ids=nids)
            out = {u: m for u in view.neighbors}
        done = state["cursor"] >= len(state["chunks"]) and not state["waiting"]
        return out, done

    def on_finish(self, state, view):
        ball = state["ball"] | state["heard"]
        big = state["big"] or state["heard_big"] or len(ball) >= self.threshold
        return {"ball": frozenset(ball), "big": big}


class MinFlood(NodeProgram):
    """Hop-limited minimum flood: every vertex learns the smallest source ID
    within the radius.  Improvements are forwarded immediately, so the run
    quiesces as soon as the minima stabilize."""

    name = "min-flood"

    def __init__(self, radius: int):
        self.R = radius

    def init(self, view):
        src = bool(view.private and view.private.get("source"))
        return {"m": view.vid if src else None, "source": src}

    def on_round(self, state, view, rnd, inbox):
        out: Dict[int, Msg] = {}
        best_h = None
        best_from = None
        for sender, (mid, hop) in inbox:
            if state["m"] is None or mid < state["m"]:
                state["m"] = mid
                best_h = hop
                best_from = sender
        if best_h is not None and best_h < self.R:
            m = view.bits.msg((state["m"], best_h + 1), ids=1, counters=(self.R,))
            for u in view.neighbors:
                if u != best_from:
                    out[u] = m
        if rnd == 1 and state["source"]:
            m = view.bits.msg((view.vid, 1), ids=1, counters=(self.R,))
            for u in view.neighbors:
                out[u] = m
        return out, True

    def on_finish(self, state, view):
        return state["m"]


class HopFlood(NodeProgram):
    """Hop-limited reachability flood; outputs whether the vertex heard it."""

    name = "hop-flood"

    def __init__(self, radius: int):
        self.R = radius

    def init(self, view):
        src = bool(view.private and view.private.get("source"))
        return {"heard": src, "forwarded": False, "source": src}

    def on_round(self, state, view, rnd, inbox):
        out: Dict[int, Msg] = {}
        best = None
        for _sender, hop in inbox:
            state["heard"] = True
            if best is None or hop < best:
                best = hop
        if rnd == 1 and state["source"]:
            state["forwarded"] = True
            m = view.bits.msg(1, counters=(self.R,))
            for u in view.neighbors:
                out[u] = m
        elif best is not None and best < self.R and not state["forwarded"]:
            state["forwarded"] = True
            m = view.bits.msg(best + 1, counters=(self.R,))
            for u in view.neighbors:
                out[u] = m
        return out, True

    def on_finish(self, state, view):
        return state["heard"]


def degree_threshold(n: int) -> int:
    """List-size cutoff for the neighborhood exchange."""
    return max(2, math.ceil(2 ** math.sqrt(math.log2(max(n, 2)))))


def ruling_set_power(
    g: Graph,
    candidates: Iterable[int],
    t: int,
    cfg: Optional[SimConfig] = None,
) -> Tuple[Set[int], RoundLedger]:
    """Ruling set with respect to the t-th power graph: the result is a
    subset of the candidates with pairwise distance >= 3t in g, and every
    candidate lies within 4t hops of it.

    Runs the multi-step neighborhood exchange (t steps, lists truncated at
    the degree threshold, chunked within the bit budget) to classify power
    degrees, then elects ID-minima within radius 3t-1 in waves of minimum
    floods followed by deactivation floods.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    cand = set(candidates)
    if not cand:
        raise ValueError("candidate set must be nonempty")
    ledger = RoundLedger()
    gn = degree_threshold(g.n)
    knowledge: Dict[int, dict] = {v: {"ball": frozenset([v]), "big": False} for v in g.vertices}
    for _step in range(t):
        knowledge, led = run(
            g, NeighborhoodExchange(gn), cfg, private=knowledge
        )
        ledger.extend_sequential(led, name="power-exchange")
    # iterated ball-minimum election: per iteration the remaining active
    # candidates that hold the smallest ID within radius 3t-1 join, then
    # their deactivation flood removes every active candidate in range
    radius = 3 * t - 1
    active = set(cand)
    chosen: Set[int] = set()
    while active:
        private = {v: {"source": v in active} for v in g.vertices}
        minima, led = run(g, MinFlood(radius), cfg, private=private)
        ledger.extend_sequential(led, name="power-min-flood")
        joiners = {v for v in active if minima[v] == v}
        chosen |= joiners
        private = {v: {"source": v in joiners} for v in g.vertices}
        heard, led = run(g, HopFlood(radius), cfg, private=private)
        ledger.extend_sequential(led, name="power-deactivate")
        active = {v for v in active if not heard[v]}
    return chosen, ledger


# ---------------------------------------------------------------------------
# Balanced tree partitioning
# ---------------------------------------------------------------------------


class TreePartitionProgram(NodeProgram):
    """Distributed balanced partitioning of a rooted vertex-weighted tree.

    Bottom-up, every vertex receives from each child either the weight of
    the child's leftover set or a no-leftover marker, groups leftover
    children (in increasing child ID) into parts of weight in (B, 2B], and
    keeps the light tail plus itself as its own root part.  Top-down, every
    vertex that resolves a part identity pushes it into the leftover
    subtrees that merged into it.
    """

    name = "tree-partition"

    TAG_LEFT, TAG_NOLEFT, TAG_ASSIGN = 0, 1, 2

    def __init__(self, bound: int, total_bound: int):
        self.B = bound
        self.total = total_bound

    def init(self, view):
        p = view.private
        return {
            "parent": p["parent"],
            "waiting": set(p["children"]),
            "w": p["weight"],
            "leftovers": [],          # (child, weight) reports
            "tail": [],               # children merged into own root part
            "groups": [],             # finalized groups [(idx, [children])]
            "part": None,             # (root_id, idx) once resolved
            "processed": False,
            "notify": [],             # queued (child, part) notifications
        }

    def _process(self, state, view):
        state["processed"] = True
        groups: List[List[int]] = []
        acc: List[int] = []
        acc_w = 0
        for child, w in sorted(state["leftovers"]):
            acc.append(child)
            acc_w += w
            if acc_w > self.B:
                groups.append(acc)
                acc = []
                acc_w = 0
        idx = 1
        for grp in groups:
            state["groups"].append((idx, grp))
            for c in grp:
                state["notify"].append((c, (view.vid, idx)))
            idx += 1
        state["tail"] = acc
        tail_w = acc_w + state["w"]
        if state["parent"] is None:
            # global root: own part always finalizes as part 0
            state["part"] = (view.vid, 0)
            for c in state["tail"]:
                state["notify"].append((c, state["part"]))
            return None
        if tail_w <= self.B:
            return (self.TAG_LEFT, tail_w)
        # heavy root part stays here, becomes a finalized part now
        state["part"] = (view.vid, 0)
        for c in state["tail"]:
            state["notify"].append((c, state["part"]))
        return (self.TAG_NOLEFT,)

    def on_round(self, state, view, rnd, inbox):
        out = {}
        for sender, body in inbox:
            tag = body[0]
            if tag == self.TAG_LEFT:
                state["leftovers"].append((sender, body[1]))
                state["waiting"].discard(sender)
            elif tag == self.TAG_NOLEFT:
                state["waiting"].discard(sender)
            else:
                state["part"] = (body[1], body[2])
                for c in state["tail"]:
                    state["notify"].append((c, state["part"]))
        if not state["waiting"] and not state["processed"]:
            report = self._process(state, view)
            if report is not None:
                counters = (self.B,) if report[0] == self.TAG_LEFT else ()
                out[state["parent"]] = view.bits.msg(report, counters=counters)
        while state["notify"]:
            child, (root, idx) = state["notify"].pop(0)
            out[child] = view.bits.msg(
                (self.TAG_ASSIGN, root, idx), ids=1, counters=(self.total,)
            )
        return out, state["processed"] and not state["notify"]

    def on_finish(self, state, view):
        return {"part": state["part"], "groups": state["groups"]}


def partition_tree(
    t: WeightedTree, cfg: Optional[SimConfig] = None
) -> Tuple[TreePartition, RoundLedger]:
    """Partition a vertex-weighted tree into edge-disjoint parts whose owned
    weights all lie in [B, 2B] except for at most one light part rooted at
    the tree root.  Runs in O(diam) rounds on the tree's edges."""
    if t.bound < 1:
        raise ValueError("bound B must be >= 1")
    t.validate()
    tree_graph = Graph(t.vertices(), t.edges)
    adj = t.adjacency()
    parent: Dict[int, Optional[int]] = {t.root: None}
    order = [t.root]
    q = deque([t.root])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
                q.append(y)
    children: Dict[int, List[int]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    private = {
        v: {
            "parent": parent[v],
            "children": tuple(sorted(children[v])),
            "weight": t.weights.get(v, 0),
        }
        for v in parent
    }
    program = TreePartitionProgram(t.bound, total_bound=len(parent))
    outputs, ledger = run(tree_graph, program, cfg, private=private)

    keys: List[Tuple[int, int]] = []
    owned: Dict[Tuple[int, int], Set[int]] = {}
    for v in sorted(parent):
        key = outputs[v]["part"]
        if key is None:
            raise RuntimeError(f"vertex {v} left unassigned by tree partition")
        owned.setdefault(key, set()).add(v)
        if key not in keys:
            keys.append(key)
    # part 0 is the (possibly light) part owned by the global root
    root_key = outputs[t.root]["part"]
    keys.sort(key=lambda k: (k != root_key, k))
    parts = []
    for key in keys:
        vs = owned[key]
        # the part tree is exactly the parent edges of its owned vertices,
        # except the upward edge of a part whose root is itself owned
        edges = frozenset(
            canon(v, parent[v])
            for v in vs
            if parent[v] is not None and v != key[0]
        )
        parts.append(TreePart(root=key[0], owned=frozenset(vs), edges=edges))
    return TreePartition(parts=parts, leftover_index=0), ledger
