"""Search witnesses for a range of m and both sides, then rebuild each
decomposition from the searched witnesses instead of the stored ones.

    python scripts/search_sweep.py --hi 25 --seconds 120 --csv sweep.csv
"""
import argparse
import csv
import sys
import time

from dirober import dataset
from dirober.assembly import construct
from dirober.search import SearchBudget, SearchExhausted, derive_spec, search_witness
from dirober.verify import verify_decomposition, verify_witness


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=int, default=7)
    ap.add_argument("--hi", type=int, default=21)
    ap.add_argument("--seconds", type=float, default=120)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()
    rows = []
    for m in range(args.lo | 1, args.hi + 1, 2):
        found = {}
        for spec in derive_spec(m):
            start = time.monotonic()
            try:
                w = search_witness(spec, SearchBudget(nodes=None, seconds=args.seconds, seed=args.seed))
                ok = verify_witness(spec, w).ok
                found[spec.side] = w
                S, q, status = w.S, w.q, "found" if ok else "uncertified"
            except SearchExhausted as exc:
                S, q, status = (), None, f"exhausted after {exc.nodes} nodes"
            stored = dataset.load(m).witnesses.get(spec.side) if m in dataset.SUPPORTED else None
            rows.append(dict(m=m, side=spec.side, status=status, S=" ".join(map(str, S)),
                             q="" if q is None else q,
                             stored_S=" ".join(map(str, stored.S)) if stored else "",
                             seconds=f"{time.monotonic() - start:.2f}"))
            print(" ".join(f"{k}={v}" for k, v in rows[-1].items()), flush=True)
        if len(found) == len(derive_spec(m)):
            verdict = verify_decomposition(construct(m, found)).verdict
            print(f"m={m} rebuilt from searched witnesses: {verdict}", flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
