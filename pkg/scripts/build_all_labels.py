"""Try to build a surface for every class of the classification and report the outcome.

Usage: python3 scripts/build_all_labels.py [--seed N] [--rank R]
"""

import argparse
import time

from weakdp.root_classification import classify_all
from weakdp.surface_builder import BuildError, build_surface


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rank", type=int, help="restrict to one rank")
    args = ap.parse_args()
    failed = 0
    for e in classify_all():
        if args.rank and e.rank != args.rank:
            continue
        t = time.perf_counter()
        try:
            s = build_surface(e.label, seed=args.seed)
            realized = s.lattice.effective_basis
            status = "ok" if realized == e.label else f"ok via {realized.text}"
        except BuildError as x:
            status, failed = f"failed: {x}", failed + 1
        print(f"{e.index:4d} {e.label.text:48s} {e.type:14s} {time.perf_counter() - t:6.2f}s  {status}", flush=True)
    print(f"{failed} classes not built")


if __name__ == "__main__":
    main()
