"""Round and size scaling of the superclustered construction: reproduce the
measured series behind the acceptance pins and write a CSV suitable for
plotting."""

import csv
import sys

from spanner import generate, improved_spanner, verify_stretch
from spanner.verify import fit_exponent

K = 4
rows = []
print(f"k={K}: rounds should grow about like n^(1/2 - 1/k) = n^0.25\n")
print(f"{'n':>5} {'m':>6} {'|H|':>6} {'rounds':>7} {'bound-ratio':>12}")
for d in (6, 7, 8, 9):
    g = generate("hypercube", {"d": d})
    res = improved_spanner(g, K)
    assert verify_stretch(g, res.spanner, 2 * K - 1).passed
    cap = 2 ** (4 * K) * g.n ** (0.5 - 1 / K)
    rows.append(
        {
            "n": g.n,
            "m": g.m,
            "k": K,
            "spanner_edges": res.spanner.size,
            "rounds": res.ledger.rounds_used,
            "max_bits": res.ledger.max_bits_seen,
        }
    )
    print(f"{g.n:>5} {g.m:>6} {res.spanner.size:>6} "
          f"{res.ledger.rounds_used:>7} {res.ledger.rounds_used / cap:>12.6f}")

exponent, coeff = fit_exponent([r["n"] for r in rows], [r["rounds"] for r in rows])
print(f"\nlog-log fit: rounds ~ {coeff:.1f} * n^{exponent:.3f}")

out = sys.argv[1] if len(sys.argv) > 1 else "scaling.csv"
with open(out, "w", newline="") as fh:
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
print(f"wrote {out}")
