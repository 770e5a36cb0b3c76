"""Build, self-check and write a decomposition for every odd m in a range.

    python scripts/reproduce_all.py --out results/ --lo 5 --hi 49
"""
import argparse
import time
from pathlib import Path

from dirober.assembly import construct
from dirober.core import serialize
from dirober.verify import verify_decomposition


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--lo", type=int, default=5)
    ap.add_argument("--hi", type=int, default=49)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    total = time.monotonic()
    failed = []
    for m in range(args.lo | 1, args.hi + 1, 2):
        start = time.monotonic()
        d = construct(m)
        rep = verify_decomposition(d)
        (args.out / f"m{m:02d}.json").write_bytes(serialize(d))
        print(f"m={m:2d} classes={len(d.classes):3d} {rep.verdict} {time.monotonic() - start:.2f}s")
        if not rep.ok:
            failed.append(m)
    print(f"total {time.monotonic() - total:.1f}s, {len(failed)} failures {failed or ''}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
