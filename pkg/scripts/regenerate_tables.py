"""Print the real-structure table and the degree-four conic family table as CSV.

Usage: python3 scripts/regenerate_tables.py [--out DIR]
"""

import argparse
import io
from pathlib import Path

from weakdp.cli import run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, help="write real_structures.csv and conic_families.csv here")
    args = ap.parse_args()
    real = [["classify-real", "--rank", str(r), "--format", "csv"] for r in range(2, 9)]
    jobs = {
        "real_structures.csv": real,
        "conic_families.csv": [["conic-families", "--degree", "4", "--format", "csv"]],
    }
    for name, argvs in jobs.items():
        lines: list[str] = []
        for argv in argvs:
            out, err = io.StringIO(), io.StringIO()
            if run(argv, out, err) != 0:
                raise SystemExit(err.getvalue())
            rows = out.getvalue().splitlines()
            lines += rows if not lines else rows[1:]
        text = "\n".join(lines) + "\n"
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / name).write_text(text)
        else:
            print(f"# {name}")
            print(text)


if __name__ == "__main__":
    main()
