"""Run the randomised lemma harness and print one line per lemma."""

import argparse
import json
import time

from mallbes.lemmas import HARNESS_CONFIG, LEMMAS, check_lemma
from mallbes.support import FamilyConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lemmas", nargs="*", default=list(LEMMAS))
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--fam-size", type=int, default=HARNESS_CONFIG.size)
    ap.add_argument("--ctx-bound", type=int, default=HARNESS_CONFIG.ctx_bound)
    ap.add_argument("--ext-rules", type=int, default=HARNESS_CONFIG.ext_rules)
    args = ap.parse_args()
    cfg = FamilyConfig(size=args.fam_size, ctx_bound=args.ctx_bound, ext_rules=args.ext_rules)

    for name in args.lemmas:
        t = time.perf_counter()
        rep = check_lemma(name, args.trials, args.seed, cfg)
        print(f"{rep.summary()}  {time.perf_counter() - t:.1f}s")
        if not rep.ok:
            print(json.dumps(rep.counterexample, indent=2, default=str))


if __name__ == "__main__":
    main()
