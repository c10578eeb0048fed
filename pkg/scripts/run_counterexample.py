"""Support without derivability: the drop-p base supports p in every sampled family.

Also sweeps the family parameters to show the verdict is not an artefact of
one configuration.
"""

import argparse
import time
from itertools import product

from mallbes.base import atomic_sequent, derive_atomic
from mallbes.support import FamilyConfig, counterexample_base, eval_clause, generate_family, judgment
from mallbes.syntax import Atom


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--families", type=int, default=50)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6])
    ap.add_argument("--ctx-bounds", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()

    p = Atom("p")
    b = counterexample_base(p)
    print(f"base: {b.to_text().strip()}")
    print(f"|- p: {derive_atomic(b, atomic_sequent([], 'p')).status.value}")
    for size, bound in product(args.sizes, args.ctx_bounds):
        cfg = FamilyConfig(size=size, ctx_bound=bound)
        t = time.perf_counter()
        holds = sum(eval_clause(judgment(p, base=b), generate_family(b, cfg, s)).holds
                    for s in range(args.families))
        print(f"size={size} ctx_bound={bound}: holds in {holds}/{args.families} "
              f"({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
