"""Cross-check decide against the oracle on every small sequent.

    python3 scripts/run_envelope.py --max-size 5 --max-context 2 --csv envelope.csv
"""

import argparse
import csv
import time
from collections import Counter

from mallbes.completeness import Verdict, decide, translate
from mallbes.envelope import envelope_sequents
from mallbes.nd import check_nd, normal_form_check
from mallbes.oracle import OracleVerdict, prove_sequent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--max-context", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0, help="fresh-name permutation for the atomic mapping")
    ap.add_argument("--csv", help="write one row per sequent")
    args = ap.parse_args()

    rows, tally = [], Counter()
    start = time.perf_counter()
    for s in envelope_sequents(args.max_size, args.max_context):
        r = decide(list(s.context), s.conclusion, seed=args.seed)
        truth = prove_sequent(s) is OracleVerdict.PROVABLE
        nf = ""
        if r.provable:
            d = translate(r.derivation, r.mapping)
            nf = check_nd(d).ok and normal_form_check(d) and d.conclusion == s
            tally["translation-ok" if nf else "translation-bad"] += 1
        agree = (r.verdict is Verdict.PROVABLE) == truth
        tally[r.verdict.value] += 1
        tally["agree" if agree else "disagree"] += 1
        if not agree:
            print(f"disagreement: {s} decide={r.verdict.value} oracle={'provable' if truth else 'refuted'}")
        rows.append((str(s), r.verdict.value, "provable" if truth else "refuted", r.nodes, nf))
    elapsed = time.perf_counter() - start

    for k in sorted(tally):
        print(f"{k}: {tally[k]}")
    print(f"sequents: {len(rows)}  seconds: {elapsed:.1f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sequent", "decide", "oracle", "search_nodes", "translation_ok"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
