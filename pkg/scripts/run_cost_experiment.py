#!/usr/bin/env python3
"""Step-count the measured conversions on synthesized inputs and write a
CSV, contrasting the linear-time conversions with their zero-cost
variants.

Usage: python scripts/run_cost_experiment.py [--out costs.csv]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cdle.cli import classify_costs
from cdle.corpus import COST_CLASSES, load_checked_corpus, synth_input_nf
from cdle.reduction import apply_and_count, normalize

EXPERIMENTS = [
    ("v2l", [8, 16, 32, 64]),
    ("v2l!", [8, 64, 512]),
    ("l2v", [8, 16, 32, 64]),
    ("l2v!", [8, 64, 512]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="costs.csv")
    args = ap.parse_args()

    ck, report = load_checked_corpus()
    if not report.ok:
        print("corpus does not typecheck", file=sys.stderr)
        return 1

    lines = ["name,n,beta_steps,eta_steps,fuel_exhausted"]
    failures = 0
    for name, sizes in EXPERIMENTS:
        expected, kind = COST_CLASSES[name]
        fn = normalize(ck.pure_env[name]).result
        rows = []
        print(f"\n{name}  (expected: {expected})")
        print(f"  {'n':>6} {'beta':>8} {'eta':>5}")
        for n in sizes:
            out = apply_and_count(fn, [synth_input_nf(ck, kind, n)])
            rows.append((n, out.beta_steps, out.fuel_exhausted))
            lines.append(f"{name},{n},{out.beta_steps},{out.eta_steps},{str(out.fuel_exhausted).lower()}")
            print(f"  {n:>6} {out.beta_steps:>8} {out.eta_steps:>5}")
        verdict = classify_costs(rows)
        marker = "ok" if verdict == expected else "MISMATCH"
        failures += verdict != expected
        print(f"  classification: {verdict} [{marker}]")

    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"\nwrote {args.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
