import pytest

from spanner import BudgetError, Msg, NodeProgram, SimConfig, generate, run, run_composed
from spanner.sim import Announce, FloodMax, HaltNow, SimTimeout, default_bit_budget


def test_flood_max_path4():
    g = generate("path", {"n": 4})
    out, ledger = run(g, FloodMax())
    assert out == {v: 3 for v in range(4)}
    assert ledger.rounds_used == 3


def test_immediate_halt_zero_rounds():
    g = generate("path", {"n": 4})
    out, ledger = run(g, HaltNow())
    assert ledger.rounds_used == 0
    assert ledger.messages_total == 0


class OverBudget(NodeProgram):
    name = "over-budget"

    def __init__(self, bits):
        self.bits = bits

    def on_round(self, state, view, rnd, inbox):
        if rnd == 1:
            return {view.neighbors[0]: Msg(self.bits, "x")}, True
        return {}, True


def test_budget_violation_audit_mode():
    g = generate("complete", {"n": 4})
    budget = default_bit_budget(4)
    cfg = SimConfig(strict=False)
    out, ledger = run(g, OverBudget(budget + 1), cfg)
    assert len(ledger.violations) == 4
    assert ledger.violations[0]["kind"] == "bits"
    assert ledger.max_bits_seen == budget + 1


def test_budget_violation_strict_mode():
    g = generate("complete", {"n": 4})
    with pytest.raises(BudgetError):
        run(g, OverBudget(default_bit_budget(4) + 1), SimConfig(strict=True))


class DoubleSend(NodeProgram):
    name = "double-send"

    def on_round(self, state, view, rnd, inbox):
        if rnd == 1 and view.vid == 0:
            return {view.neighbors[0]: [Msg(8, "a"), Msg(8, "b")]}, True
        return {}, True


def test_congestion_enforced():
    g = generate("path", {"n": 3})
    with pytest.raises(BudgetError):
        run(g, DoubleSend(), SimConfig(congestion_factor=1))
    out, ledger = run(g, DoubleSend(), SimConfig(congestion_factor=2))
    assert ledger.per_round_edge_load == 2


class EchoOnce(NodeProgram):
    """Sends its ID in round 1; records the round each message arrived."""

    name = "echo-once"

    def init(self, view):
        return {"arrivals": []}

    def on_round(self, state, view, rnd, inbox):
        for s, body in inbox:
            state["arrivals"].append((rnd, s))
        if rnd == 1:
            m = view.bits.msg(view.vid, ids=1)
            return {u: m for u in view.neighbors}, True
        return {}, True

    def on_finish(self, state, view):
        return state["arrivals"]


def test_synchrony_messages_arrive_next_round():
    g = generate("path", {"n": 3})
    out, _ = run(g, EchoOnce())
    assert all(rnd == 2 for arr in out.values() for rnd, _ in arr)


def test_determinism_bit_identical():
    g = generate("erdos-renyi", {"n": 30, "p": 0.2}, seed=5)
    out1, led1 = run(g, FloodMax())
    out2, led2 = run(g, FloodMax())
    assert out1 == out2
    assert led1.to_json() == led2.to_json()


def test_run_composed_halt_now_pair():
    g = generate("path", {"n": 4})
    _, ledger = run_composed(g, [HaltNow(), HaltNow()])
    assert ledger.rounds_used == 0


def test_run_composed_flood_then_halt():
    g = generate("path", {"n": 4})
    out, ledger = run_composed(g, [FloodMax(), HaltNow()])
    assert ledger.rounds_used == 3
    assert len(ledger.per_phase) == 2
    # halt-now echoes the previous phase's output through its private state
    assert out == {v: 3 for v in range(4)}


class LabelWriter(NodeProgram):
    name = "label-writer"

    def on_round(self, state, view, rnd, inbox):
        return {}, True

    def on_finish(self, state, view):
        return {"label": view.vid * 10}


def test_phase_outputs_visible_in_next_init():
    g = generate("path", {"n": 3})
    out, _ = run_composed(g, [LabelWriter(), Announce()])
    assert out[1] == {0: 0, 2: 20}


class Sleeper(NodeProgram):
    name = "sleeper"

    def on_round(self, state, view, rnd, inbox):
        return {}, False  # never halts, never sends


def test_stall_guard_raises():
    g = generate("path", {"n": 3})
    with pytest.raises(SimTimeout):
        run(g, Sleeper(), SimConfig(stall_limit=50))


def test_max_rounds_names_program():
    g = generate("path", {"n": 3})
    with pytest.raises(SimTimeout, match="sleeper"):
        run(g, Sleeper(), SimConfig(max_rounds=10))


def test_budget_floor_validated():
    g = generate("complete", {"n": 16})
    with pytest.raises(Exception):
        run(g, HaltNow(), SimConfig(msg_bit_budget=3))


def test_default_budget_formula():
    assert default_bit_budget(256) == 64
    assert default_bit_budget(4) == 16


def test_ledger_json_shape():
    g = generate("path", {"n": 4})
    _, ledger = run(g, FloodMax())
    j = ledger.to_json()
    assert set(j) >= {"rounds", "max_bits", "per_phase", "violations"}
    assert j["rounds"] == 3


class NeedsInput(NodeProgram):
    name = "needs-input"

    def init(self, view):
        return {"x": view.private["must_exist"]}

    def on_round(self, state, view, rnd, inbox):
        return {}, True


def test_run_composed_missing_dependency():
    from spanner.sim import CompositionError

    g = generate("path", {"n": 3})
    with pytest.raises(CompositionError):
        run_composed(g, [LabelWriter(), NeedsInput()])
