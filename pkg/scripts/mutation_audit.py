"""Count how many random single-arc mutations the verifier rejects, per kind.

    python scripts/mutation_audit.py --m 5 9 15 21 --count 1000
"""
import argparse
from collections import Counter

from dirober.assembly import construct
from dirober.mutation import random_mutations
from dirober.verify import verify_decomposition


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, nargs="+", default=[5, 9, 15, 21])
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    missed = 0
    for m in args.m:
        d = construct(m)
        kinds = Counter()
        caught = 0
        for bad, what in random_mutations(d, args.count, seed=args.seed + m):
            rep = verify_decomposition(bad)
            if rep.ok:
                print(f"m={m} MISSED {what}")
            else:
                caught += 1
                kinds.update(rep.kinds())
        missed += args.count - caught
        top = ", ".join(f"{k}={n}" for k, n in kinds.most_common())
        print(f"m={m} caught {caught}/{args.count}; violation kinds: {top}")
    return 1 if missed else 0


if __name__ == "__main__":
    raise SystemExit(main())
