"""Protocol helpers shared by the k-spanner constructions."""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from ..clustering import Clustering
from ..graph import Graph
from ..primitives import ForestAggregate, ForestBroadcast
from ..sim import Msg, NodeProgram, RoundLedger, SimConfig, run


def ipow_ceil(n: int, num: int, den: int) -> int:
    """ceil(n^(num/den)) with float-noise protection."""
    if n <= 0:
        return 0
    return max(1, math.ceil(n ** (num / den) - 1e-9))


class ScriptedExchange(NodeProgram):
    """One communication round whose outgoing messages were precomputed from
    each vertex's tracked local state; the output is the received inbox."""

    name = "exchange"

    def __init__(self, name: str):
        self.name = name

    def init(self, view):
        return {"out": (view.private or {}).get("out", {}), "got": []}

    def on_round(self, state, view, rnd, inbox):
        state["got"].extend(inbox)
        if rnd == 1 and state["out"]:
            return dict(state["out"]), True
        return {}, True

    def on_finish(self, state, view):
        return state["got"]


def exchange(
    g: Graph,
    cfg: SimConfig,
    ledger: RoundLedger,
    name: str,
    out: Dict[int, Dict[int, Msg]],
) -> Dict[int, list]:
    """Run one scripted round and fold it into the ledger."""
    private = {v: {"out": out.get(v, {})} for v in g.vertices}
    got, led = run(g, ScriptedExchange(name), cfg, private=private)
    ledger.extend_sequential(led, name=name)
    return got


def forest_roles_for_clustering(
    g: Graph, clustering: Clustering, values: Dict[int, int]
) -> Dict[int, dict]:
    children = clustering.children()
    roles = {}
    for v in g.vertices:
        if v in clustering.membership:
            roles[v] = {
                "roles": [
                    (clustering.parents[v], tuple(children.get(v, ())), values.get(v, 0))
                ]
            }
        else:
            roles[v] = {"roles": []}
    return roles


def clustering_aggregate(
    g: Graph,
    cfg: SimConfig,
    ledger: RoundLedger,
    name: str,
    clustering: Clustering,
    values: Dict[int, int],
    combine: str = "sum",
    bound: Optional[int] = None,
) -> Dict[int, int]:
    """Convergecast per cluster tree; returns center -> aggregate."""
    bound = bound if bound is not None else max(2 * g.n + 1, 2)
    private = forest_roles_for_clustering(g, clustering, values)
    outputs, led = run(g, ForestAggregate(combine, bound), cfg, private=private)
    ledger.extend_sequential(led, name=name)
    return {c: outputs[c][0] for c in clustering.centers}


def clustering_broadcast(
    g: Graph,
    cfg: SimConfig,
    ledger: RoundLedger,
    name: str,
    clustering: Clustering,
    center_values: Dict[int, int],
    bound: Optional[int] = None,
) -> Dict[int, int]:
    """Push one value per center down its tree; returns vertex -> value."""
    bound = bound if bound is not None else max(2 * g.n + 1, 2)
    children = clustering.children()
    private = {}
    for v in g.vertices:
        if v in clustering.membership:
            # every root must push something or its tree would wait forever
            val = center_values.get(v, 0) if clustering.parents[v] is None else None
            private[v] = {
                "roles": [(clustering.parents[v], tuple(children.get(v, ())), val)]
            }
        else:
            private[v] = {"roles": []}
    outputs, led = run(g, ForestBroadcast(bound), cfg, private=private)
    ledger.extend_sequential(led, name=name)
    return {
        v: outputs[v][0]
        for v in clustering.membership
    }


class ChunkedGather(NodeProgram):
    """Radius-1 gather: members stream ID lists to their hub over as many
    rounds as the bit budget requires; hubs output {member: [ids]}."""

    name = "chunked-gather"

    TAG_ITEM, TAG_END = 0, 1

    def init(self, view):
        p = view.private or {}
        hub = p.get("hub")
        items = list(p.get("items", ()))
        per_msg = max(1, (view.budget - 8) // view.bits.id_bits)
        chunks: List[Tuple] = []
        if hub is not None and hub != view.vid:
            for i in range(0, len(items), per_msg):
                chunks.append((self.TAG_ITEM, tuple(items[i : i + per_msg])))
            chunks.append((self.TAG_END,))
        return {
            "hub": hub,
            "self_items": items if hub == view.vid else [],
            "chunks": chunks,
            "cursor": 0,
            "waiting": set(p.get("expect", ())),
            "collected": {},
        }

    def on_round(self, state, view, rnd, inbox):
        for sender, body in inbox:
            if body[0] == self.TAG_ITEM:
                state["collected"].setdefault(sender, []).extend(body[1])
            else:
                state["collected"].setdefault(sender, [])
                state["waiting"].discard(sender)
        out = {}
        if state["cursor"] < len(state["chunks"]):
            body = state["chunks"][state["cursor"]]
            state["cursor"] += 1
            nids = len(body[1]) if body[0] == self.TAG_ITEM else 0
            out[state["hub"]] = view.bits.msg(body, ids=nids)
        done = state["cursor"] >= len(state["chunks"]) and not state["waiting"]
        return out, done

    def on_finish(self, state, view):
        got = {m: tuple(v) for m, v in state["collected"].items()}
        if state["self_items"]:
            got[view.vid] = tuple(state["self_items"])
        return got


def chunked_gather(
    g: Graph,
    cfg: SimConfig,
    ledger: RoundLedger,
    name: str,
    hub_of: Dict[int, int],
    items: Dict[int, List[int]],
    expect: Dict[int, List[int]],
) -> Dict[int, Dict[int, Tuple[int, ...]]]:
    private = {
        v: {
            "hub": hub_of.get(v),
            "items": items.get(v, ()),
            "expect": expect.get(v, ()),
        }
        for v in g.vertices
    }
    outputs, led = run(g, ChunkedGather(), cfg, private=private)
    ledger.extend_sequential(led, name=name)
    return outputs


class ChunkedScatter(NodeProgram):
    """Radius-1 scatter: hubs stream per-member ID lists out; members output
    the list addressed to them."""

    name = "chunked-scatter"

    TAG_ITEM, TAG_END = 0, 1

    def init(self, view):
        p = view.private or {}
        plan: Dict[int, List[int]] = {u: list(x) for u, x in p.get("plan", {}).items()}
        per_msg = max(1, (view.budget - 8) // view.bits.id_bits)
        queues: Dict[int, List[Tuple]] = {}
        for u, items in plan.items():
            q = [
                (self.TAG_ITEM, tuple(items[i : i + per_msg]))
                for i in range(0, len(items), per_msg)
            ]
            q.append((self.TAG_END,))
            queues[u] = q
        hub = p.get("hub")
        return {
            "queues": queues,
            "done_recv": hub is None or hub == view.vid,
            "got": [],
        }

    def on_round(self, state, view, rnd, inbox):
        for _sender, body in inbox:
            if body[0] == self.TAG_ITEM:
                state["got"].extend(body[1])
            else:
                state["done_recv"] = True
        out = {}
        empty = []
        for u, q in state["queues"].items():
            body = q.pop(0)
            nids = len(body[1]) if body[0] == self.TAG_ITEM else 0
            out[u] = view.bits.msg(body, ids=nids)
            if not q:
                empty.append(u)
        for u in empty:
            del state["queues"][u]
        return out, not state["queues"] and state["done_recv"]

    def on_finish(self, state, view):
        return tuple(state["got"])


def chunked_scatter(
    g: Graph,
    cfg: SimConfig,
    ledger: RoundLedger,
    name: str,
    plans: Dict[int, Dict[int, List[int]]],
    hub_of: Dict[int, int],
) -> Dict[int, Tuple[int, ...]]:
    private = {
        v: {"plan": plans.get(v, {}), "hub": hub_of.get(v)} for v in g.vertices
    }
    outputs, led = run(g, ChunkedScatter(), cfg, private=private)
    ledger.extend_sequential(led, name=name)
    return outputs
