#!/usr/bin/env python3
"""Check the full corpus, verify every golden erasure, and confirm the
negative suite is rejected with the expected error codes.

Usage: python scripts/check_corpus.py
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cdle.corpus import corpus_manifest, default_corpus_root, load_checked_corpus, verify_goldens
from cdle.loader import load_program
from cdle.typecheck import check_defs

NEGATIVE_EXPECT = {
    "erased_var": "ErasedVarOccursFree",
    "intersection_mismatch": "IntersectionErasureMismatch",
    "phi_mismatch": "PhiEqMismatch",
    "rho_no_occurrence": "RhoNoOccurrence",
    "unbound_name": "UnboundName",
    "kind_mismatch": "KindMismatch",
    "type_mismatch": "TypeMismatch",
    "not_a_function": "NotAFunction",
    "not_an_intersection": "NotAnIntersection",
    "eq_sides_untypeable": "EqSidesUntypeable",
    "beta_mismatch": "TypeMismatch",
}


def main() -> int:
    root = default_corpus_root()
    repo = os.path.dirname(root)
    failures = 0

    t0 = time.time()
    ck, report = load_checked_corpus(root)
    print(report.render())
    print(f"checked in {time.time() - t0:.2f}s")
    failures += not report.ok

    results = verify_goldens(corpus_manifest(root), ck)
    bad = [r for r in results if not r.ok]
    print(f"goldens: {len(results) - len(bad)}/{len(results)} pass")
    for r in bad:
        print(f"  GOLDEN FAIL {r.name}: {r.detail}")
    failures += bool(bad)

    print("negative suite:")
    for stem, want in sorted(NEGATIVE_EXPECT.items()):
        path = os.path.join(repo, "negative", f"{stem}.cdl")
        _, rep = check_defs(load_program([path], root=root))
        got = [r.code for r in rep.results if not r.ok]
        ok = got == [want]
        failures += not ok
        print(f"  {'ok ' if ok else 'BAD'} {stem}: {got[0] if got else 'accepted?!'}")

    print("ALL GREEN" if not failures else f"{failures} FAILURES")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
