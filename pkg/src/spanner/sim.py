"""Round-synchronous CONGEST execution engine.

Per round every vertex may send at most ``congestion_factor`` bounded-size
messages over each incident edge.  A message sent in round r is delivered in
round r+1.  Execution is bit-deterministic: vertices are processed in ID
order and inboxes are delivered sorted by sender.

A :class:`NodeProgram` supplies three hooks:

* ``init(view)``       -> per-vertex local state
* ``on_round(state, view, rnd, inbox)`` -> (outbox, halt_vote)
* ``on_finish(state, view)`` -> local output

The engine is the referee for global termination: a run ends once every
vertex votes halt and no message is in flight.  ``rounds_used`` counts
communication rounds, i.e. the index of the last round that carried at
least one message.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .graph import Graph


class SimError(RuntimeError):
    pass


class BudgetError(SimError):
    """Strict-mode message budget or congestion violation."""


class SimTimeout(SimError):
    """max_rounds exceeded before global halt."""


class CompositionError(SimError):
    """A phase's required inputs were not produced by its predecessors."""


def default_bit_budget(n: int) -> int:
    """ceil(8 * log2 n), clamped so an ID plus a small tag always fits."""
    if n < 2:
        return 16
    raw = math.ceil(8 * math.log2(n))
    return max(raw, math.ceil(math.log2(n)) + 4)


@dataclass
class SimConfig:
    msg_bit_budget: Optional[int] = None  # None => ceil(8 log2 n) at run time
    max_rounds: int = 1_000_000
    congestion_factor: int = 1
    strict: bool = True
    stall_limit: int = 20_000  # consecutive silent rounds before deadlock error

    def budget_for(self, g: Graph) -> int:
        if self.msg_bit_budget is not None:
            return self.msg_bit_budget
        return default_bit_budget(max(g.n, 2))

    def check(self, g: Graph) -> None:
        b = self.budget_for(g)
        floor = math.ceil(math.log2(max(g.n, 2))) + 4
        if b < floor:
            raise SimError(f"msg_bit_budget {b} below minimum {floor}")

    def resolved(self, g: Graph) -> "SimConfig":
        """Freeze the bit budget at this graph's size so sub-simulations on
        smaller pieces keep the global budget."""
        if self.msg_bit_budget is not None:
            return self
        return self.with_(msg_bit_budget=self.budget_for(g))

    def with_(self, **kw) -> "SimConfig":
        d = dict(
            msg_bit_budget=self.msg_bit_budget,
            max_rounds=self.max_rounds,
            congestion_factor=self.congestion_factor,
            strict=self.strict,
            stall_limit=self.stall_limit,
        )
        d.update(kw)
        return SimConfig(**d)


class Msg:
    """A message: payload body plus its accounted bit size."""

    __slots__ = ("bits", "body")

    def __init__(self, bits: int, body: Any):
        self.bits = bits
        self.body = body

    def __repr__(self):
        return f"Msg({self.bits}b, {self.body!r})"


class BitCost:
    """Fixed-width field accounting used by every program's messages.

    Widths per run: tag 8 bits, vertex ID ceil(log2(max_id+1)) bits, counter
    fields ceil(log2(bound+1)) bits for a declared value bound.  Degrees,
    hop counts and sizes are bounded by 2n+1 unless a program declares
    otherwise.
    """

    TAG = 8

    def __init__(self, g: Graph):
        self.id_bits = g.id_bits
        self.n = g.n

    def counter(self, bound: int) -> int:
        return max(1, int(bound).bit_length())

    def msg(self, body: Any, ids: int = 0, counters: Tuple[int, ...] = ()) -> Msg:
        bits = self.TAG + ids * self.id_bits
        for bound in counters:
            bits += self.counter(bound)
        return Msg(bits, body)


@dataclass
class RoundLedger:
    """Per-run accounting of rounds, message bits, and per-edge congestion."""

    rounds_used: int = 0
    max_bits_seen: int = 0
    per_round_edge_load: int = 0
    messages_total: int = 0
    violations: List[dict] = field(default_factory=list)
    per_phase: List[Tuple[str, int]] = field(default_factory=list)

    def extend_sequential(self, other: "RoundLedger", name: Optional[str] = None):
        self.rounds_used += other.rounds_used
        self.max_bits_seen = max(self.max_bits_seen, other.max_bits_seen)
        self.per_round_edge_load = max(
            self.per_round_edge_load, other.per_round_edge_load
        )
        self.messages_total += other.messages_total
        self.violations.extend(other.violations)
        if name is not None:
            self.per_phase.append((name, other.rounds_used))
        else:
            self.per_phase.extend(other.per_phase)

    def extend_parallel(self, others: List["RoundLedger"], name: str):
        """Merge ledgers of simulations that ran side by side (rounds = max)."""
        if not others:
            return
        worst = max(o.rounds_used for o in others)
        self.rounds_used += worst
        for o in others:
            self.max_bits_seen = max(self.max_bits_seen, o.max_bits_seen)
            self.per_round_edge_load = max(
                self.per_round_edge_load, o.per_round_edge_load
            )
            self.messages_total += o.messages_total
            self.violations.extend(o.violations)
        self.per_phase.append((name, worst))

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds_used,
            "max_bits": self.max_bits_seen,
            "max_edge_load": self.per_round_edge_load,
            "messages": self.messages_total,
            "per_phase": [{"name": n, "rounds": r} for n, r in self.per_phase],
            "violations": self.violations,
        }

    def dump(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


class NodeView:
    """The local knowledge a vertex starts with: its ID, neighbors, incident
    edge weights, the global parameter block, and its private carry-over
    state from earlier phases."""

    __slots__ = ("vid", "neighbors", "n", "params", "private", "bits", "budget", "_g")

    def __init__(self, g: Graph, vid: int, params, private, bits: BitCost, budget: int):
        self.vid = vid
        self.neighbors = g.adj[vid]
        self.n = g.n
        self.params = params
        self.private = private
        self.bits = bits
        self.budget = budget
        self._g = g

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    def weight(self, u: int) -> float:
        return self._g.weight(self.vid, u)


class NodeProgram:
    """Base class; subclasses override the three hooks."""

    name = "program"

    def init(self, view: NodeView) -> Any:
        return {}

    def on_round(self, state, view: NodeView, rnd: int, inbox) -> Tuple[dict, bool]:
        raise NotImplementedError

    def on_finish(self, state, view: NodeView) -> Any:
        return state


def run(
    g: Graph,
    program: NodeProgram,
    cfg: Optional[SimConfig] = None,
    params: Optional[dict] = None,
    private: Optional[Dict[int, Any]] = None,
) -> Tuple[Dict[int, Any], RoundLedger]:
    """Execute one program on g until global halt; returns per-vertex outputs."""
    cfg = cfg or SimConfig()
    cfg.check(g)
    budget = cfg.budget_for(g)
    bits = BitCost(g)
    params = params or {}
    private = private or {}
    ledger = RoundLedger()

    views = {}
    states = {}
    for v in g.vertices:
        views[v] = NodeView(g, v, params, private.get(v), bits, budget)
        states[v] = program.init(views[v])

    inboxes: Dict[int, List[Tuple[int, Any]]] = {v: [] for v in g.vertices}
    halted: Dict[int, bool] = {v: False for v in g.vertices}
    rnd = 0
    silent = 0
    while True:
        callees = [v for v in g.vertices if not halted[v] or inboxes[v]]
        if not callees:
            break
        rnd += 1
        if rnd > cfg.max_rounds:
            raise SimTimeout(
                f"program {program.name!r} exceeded max_rounds={cfg.max_rounds}"
            )
        if silent > cfg.stall_limit:
            waiting = [v for v in callees[:5]]
            raise SimTimeout(
                f"program {program.name!r} stalled: {len(callees)} vertices "
                f"(e.g. {waiting}) neither halt nor communicate"
            )
        next_in: Dict[int, List[Tuple[int, Any]]] = {}
        sent_any = False
        edge_load: Dict[Tuple[int, int], int] = {}
        for v in callees:
            inbox = inboxes[v]
            if inbox:
                inbox.sort(key=lambda sv: sv[0])
                inboxes[v] = []
            outbox, halt = program.on_round(states[v], views[v], rnd, inbox)
            halted[v] = bool(halt)
            if not outbox:
                continue
            nbrs = views[v].neighbors
            for u in sorted(outbox):
                if u not in g.adj or (u not in nbrs):
                    raise SimError(
                        f"{program.name}: vertex {v} sent to non-neighbor {u}"
                    )
                msgs = outbox[u]
                if isinstance(msgs, Msg):
                    msgs = (msgs,)
                load = edge_load.get((v, u), 0) + len(msgs)
                edge_load[(v, u)] = load
                if load > cfg.congestion_factor:
                    rec = {
                        "kind": "congestion",
                        "round": rnd,
                        "edge": [v, u],
                        "load": load,
                        "program": program.name,
                    }
                    if cfg.strict:
                        raise BudgetError(str(rec))
                    ledger.violations.append(rec)
                for m in msgs:
                    if m.bits > budget:
                        rec = {
                            "kind": "bits",
                            "round": rnd,
                            "edge": [v, u],
                            "bits": m.bits,
                            "budget": budget,
                            "program": program.name,
                        }
                        if cfg.strict:
                            raise BudgetError(str(rec))
                        ledger.violations.append(rec)
                    ledger.max_bits_seen = max(ledger.max_bits_seen, m.bits)
                    ledger.messages_total += 1
                    sent_any = True
                    next_in.setdefault(u, []).append((v, m.body))
        if edge_load:
            ledger.per_round_edge_load = max(
                ledger.per_round_edge_load, max(edge_load.values())
            )
        if sent_any:
            ledger.rounds_used = rnd
            silent = 0
        else:
            silent += 1
        inboxes.update(next_in)
        if not sent_any and all(halted.values()):
            break

    outputs = {v: program.on_finish(states[v], views[v]) for v in g.vertices}
    ledger.per_phase.append((program.name, ledger.rounds_used))
    return outputs, ledger


def run_composed(
    g: Graph,
    programs: List[NodeProgram],
    cfg: Optional[SimConfig] = None,
    params: Optional[dict] = None,
) -> Tuple[Dict[int, Any], RoundLedger]:
    """Run program phases in sequence; each phase sees the previous phase's
    per-vertex output as its private state."""
    cfg = cfg or SimConfig()
    total = RoundLedger()
    private: Dict[int, Any] = {}
    outputs: Dict[int, Any] = {}
    for idx, prog in enumerate(programs):
        try:
            outputs, led = run(g, prog, cfg, params=params, private=private)
        except KeyError as exc:
            raise CompositionError(
                f"phase {idx} ({prog.name}) missing input {exc}"
            ) from exc
        total.extend_sequential(led)
        private = outputs
    return outputs, total


# -- small generally useful programs ---------------------------------------


class HaltNow(NodeProgram):
    """Votes halt immediately without sending; output echoes private state."""

    name = "halt-now"

    def on_round(self, state, view, rnd, inbox):
        return {}, True

    def on_finish(self, state, view):
        return view.private


class FloodMax(NodeProgram):
    """Every vertex learns the maximum vertex ID in its component."""

    name = "flood-max"

    def init(self, view):
        return {"best": view.vid, "from": None}

    def on_round(self, state, view, rnd, inbox):
        improved = False
        src = None
        for s, body in inbox:
            if body > state["best"]:
                state["best"] = body
                src = s
                improved = True
        out = {}
        if rnd == 1 or improved:
            m = view.bits.msg(state["best"], ids=1)
            for u in view.neighbors:
                if u != src:
                    out[u] = m
        return out, True

    def on_finish(self, state, view):
        return state["best"]


class Announce(NodeProgram):
    """One round: send a per-vertex label to all neighbors; output the map
    neighbor -> label received."""

    name = "announce"

    def __init__(self, label_key: str = "label", counter_bound: Optional[int] = None):
        self.key = label_key
        self.bound = counter_bound

    def init(self, view):
        return {"heard": {}}

    def on_round(self, state, view, rnd, inbox):
        for s, body in inbox:
            state["heard"][s] = body
        if rnd == 1:
            lab = view.private[self.key]
            if lab is None:
                return {}, True
            if self.bound is None:
                m = view.bits.msg(lab, ids=1)
            else:
                m = view.bits.msg(lab, counters=(self.bound,))
            return {u: m for u in view.neighbors}, True
        return {}, True

    def on_finish(self, state, view):
        return state["heard"]
