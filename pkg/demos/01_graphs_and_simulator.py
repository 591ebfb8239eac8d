"""A walk through the graph layer and the round-synchronous simulator.

Generates a few graphs, runs a flooding program under the CONGEST engine,
and shows what the round ledger records, including what happens when a
program exceeds the per-message bit budget.
"""

import json

from spanner import Msg, NodeProgram, SimConfig, bfs_dist, generate, run
from spanner.sim import FloodMax, default_bit_budget

# -- graphs ------------------------------------------------------------------

path = generate("path", {"n": 8})
er = generate("erdos-renyi", {"n": 40, "p": 0.1}, seed=7)
bid = generate("bounded-id", {"n": 20, "p": 0.2}, seed=3)

print("path:", path)
print("G(40, 0.1):", er, "edges:", er.m)
print("bounded-id vertex IDs:", bid.vertices[:8], "... all in [1, 2n]")
print("hop distances from 0 on the path:", bfs_dist(path, 0))

# -- a first distributed program ----------------------------------------------

out, ledger = run(path, FloodMax())
print("\nflood-max outputs:", out)
print("ledger:", json.dumps(ledger.to_json(), indent=2)[:220], "...")
print("note: a message sent in round r is seen in round r+1, so the")
print("8-vertex path needs", ledger.rounds_used, "rounds to agree on the max ID")

# -- the bit budget -----------------------------------------------------------


class Chatty(NodeProgram):
    """Sends one deliberately oversized message."""

    name = "chatty"

    def on_round(self, state, view, rnd, inbox):
        if rnd == 1 and view.vid == 0:
            return {view.neighbors[0]: Msg(view.budget + 1, "too big")}, True
        return {}, True


budget = default_bit_budget(path.n)
print(f"\nbudget on n={path.n}: {budget} bits per message")
_, audit_ledger = run(path, Chatty(), SimConfig(strict=False))
print("audit mode records the violation instead of failing:")
print(" ", audit_ledger.violations[0])

try:
    run(path, Chatty(), SimConfig(strict=True))
except Exception as exc:
    print("strict mode refuses it outright:", type(exc).__name__)
