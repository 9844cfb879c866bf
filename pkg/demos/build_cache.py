"""Regenerate the constant cache shipped at the repository root.

Computes every A_D with Max(D) <= DEPTH (one bucketed sweep per level, with
the cross-sweep consistency checks in nsdensity.constants) and the swept
C_{l,k} for l <= 3, k <= 2l+6, then writes the sorted cache file.

Depth 15 sweeps 4^15 ~ 1.07e9 sets at the top level and takes around two
minutes on one core.  Lower --depth for a quick cache; the library degrades
gracefully (wider intervals, same certificates).

    python demos/build_cache.py --depth 15 --out nsdensity.cache
"""

import argparse
import time

from nsdensity.constants import (
    ConstantCache,
    a_consts_batch,
    c_const,
    cache_store,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=15)
    ap.add_argument("--out", default="nsdensity.cache")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--c-lmax", type=int, default=3)
    ap.add_argument("--c-extra", type=int, default=5)
    args = ap.parse_args()

    cache = ConstantCache()
    total = time.monotonic()
    for t in range(1, args.depth + 1):
        start = time.monotonic()
        batch = a_consts_batch(t, cache, budget=args.depth, workers=args.workers)
        print(
            f"A: Max(D) = {t:2d}  {len(batch):5d} constants  "
            f"sum 3^{t - 1}  {time.monotonic() - start:7.1f}s"
        )

    for l in range(1, args.c_lmax + 1):
        for k in range(2 * l + 2, 2 * l + 2 + args.c_extra):
            if k > args.depth:
                print(f"C[{l},{k}] skipped: sweep depth {k} over --depth")
                continue
            start = time.monotonic()
            value = c_const(l, k, cache, budget=args.depth, workers=args.workers)
            print(f"C[{l},{k}] = {value:6d}  {time.monotonic() - start:7.1f}s")

    cache.provenance["a-depth"] = str(args.depth)
    cache.provenance["c-range"] = f"l<={args.c_lmax},k<=2l+{args.c_extra + 1}"
    cache.provenance["format"] = "1"
    cache_store(cache, args.out)
    print(
        f"wrote {args.out}: {len(cache.a_entries)} A constants, "
        f"{len(cache.c_entries)} C constants in {time.monotonic() - total:.1f}s"
    )


if __name__ == "__main__":
    main()
