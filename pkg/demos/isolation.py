"""Which coefficients matter: equal error budgets aimed at DC vs AC.

The DC stream is a few percent of the nucleotides but carries every block's
brightness through differential coding, so the same number of errors hurts
far more when aimed at it. Budgets are kept small; at saturating budgets both
targets bottom out and the contrast disappears.

Run:  python demos/isolation.py [out.csv]
"""

import sys

from imgdna import SCHEMES, build_corpus
from imgdna.pipeline import run_coefficient_isolation

out = sys.argv[1] if len(sys.argv) > 1 else "isolation_demo.csv"
images = build_corpus(6)

rows = run_coefficient_isolation(images, schemes=SCHEMES, rates=(0.0002, 0.0005),
                                 trials=3, out_path=out)

print(f"{'scheme':22s} {'target':>6s} {'rate':>8s} {'mean ssim':>10s} {'ci90':>7s}")
for scheme, target, rate, mean, ci in rows:
    print(f"{scheme:22s} {target:>6s} {rate:8.2%} {mean:10.4f} {ci:7.4f}")

print("\ndc < ac check per (scheme, rate):")
by_key = {(r[0], r[2], r[1]): r[3] for r in rows}
for scheme in SCHEMES:
    for rate in (0.0002, 0.0005):
        dc, ac = by_key[(scheme, rate, "dc")], by_key[(scheme, rate, "ac")]
        verdict = "ok" if dc < ac else "VIOLATION"
        print(f"  {scheme:22s} rate {rate:.2%}: dc {dc:.4f} < ac {ac:.4f}?  {verdict}")
print(f"rows written to {out}")
