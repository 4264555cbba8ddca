"""Command-line frontend.

Every command prints one document {command, version, inputs, payload}.
Exit status is 0 on success, 2 on a usage error and 1 on a domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from weakdp import __version__
from weakdp.lattice_core import C1Label, LatticeError
from weakdp.linear_series import SeriesError, forest_to_json, get_base_points, get_linear_series, \
    series_from_json, series_to_json, trees_from_json, trees_to_json
from weakdp.surface_builder import BuildError, PointConfiguration, build_surface, surface_to_json

DOMAIN_ERRORS = (LatticeError, SeriesError, BuildError, AssertionError)


class UsageError(Exception):
    pass


def _document(command: str, inputs: dict, payload) -> dict:
    return {"command": command, "version": __version__, "inputs": inputs, "payload": payload}


def _emit(doc: dict, fmt: str, out) -> None:
    payload = doc["payload"]
    if fmt == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        return
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if rows is None:
        raise UsageError(f"format {fmt!r} is only available for tabular commands")
    cols = list(rows[0]) if rows else []
    flat = [{k: _cell(r[k]) for k in cols} for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        out.write(buf.getvalue())
    else:
        widths = {c: max([len(c)] + [len(r[c]) for r in flat]) for c in cols}
        out.write("  ".join(c.ljust(widths[c]) for c in cols).rstrip() + "\n")
        for r in flat:
            out.write("  ".join(r[c].ljust(widths[c]) for c in cols).rstrip() + "\n")


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    if isinstance(v, dict):
        return " ".join(f"{k}={x}" for k, x in v.items())
    return str(v)


# ---------------------------------------------------------------------------
# commands

def cmd_classify_roots(a) -> tuple[dict, dict]:
    from weakdp.root_classification import classify
    rows = [{"index": e.index, "rank": e.rank, "label": e.label.text, "type": e.type,
             "sizes": {"C": e.invariant.size_C, "K": e.invariant.size_K}} for e in classify(a.rank)]
    return {"rank": a.rank}, {"rows": rows}


def cmd_classify_real(a) -> tuple[dict, dict]:
    from weakdp.real_structures import classify_real
    rows = [{"index": e.index, "rank": e.rank, "c1": e.c1_index, "type": e.type,
             "f0": e.f0, "f1": e.f1, "f2": e.f2, "images": [str(v) for v in e.images]}
            for e in classify_real(a.rank)]
    return {"rank": a.rank}, {"rows": rows}


def cmd_sets(a) -> tuple[dict, dict]:
    from weakdp.delpezzo_sets import (SurfaceLattice, del_pezzo_sets, effective_zero_set,
                                      indecomposable_one_set, irreducible_two_set, ruled_sets)
    if a.ruled is not None:
        s = ruled_sets(a.ruled)
        inputs = {"ruled": a.ruled}
    elif a.label is not None:
        X = SurfaceLattice(C1Label.parse(a.label))
        payload = {"rank": X.rank, "degree": X.degree,
                   "F_effective": [str(v) for v in effective_zero_set(X)],
                   "E_indecomposable": [str(v) for v in indecomposable_one_set(X)],
                   "G_irreducible": [str(v) for v in irreducible_two_set(X)]}
        return {"label": a.label}, payload
    else:
        if a.rank is None:
            raise UsageError("sets needs --rank, --label or --ruled")
        s = del_pezzo_sets(a.rank)
        inputs = {"rank": a.rank}
    payload = {"sizes": dict(zip("FEG", s.sizes())),
               "rows": [{"set": name, "class": str(v)} for name in "FEG" for v in getattr(s, name)]}
    return inputs, payload


def cmd_oracle(a) -> tuple[dict, dict]:
    from weakdp.root_classification import classify, invariant, root_table
    from weakdp.weyl_oracle import orbit_classify, subsystem_bases
    oc = orbit_classify(a.rank)
    t = root_table(a.rank)
    # map each orbit to the invariant class of one of its subsystems
    seen: dict[int, tuple] = {}
    for basis in subsystem_bases(a.rank):
        from weakdp.lattice_core import PicardVector
        from weakdp.root_classification import generated_mask
        roots = [PicardVector(tuple(int(c) for c in t.vectors[i])) for i in basis]
        orbit = oc.orbit_of_mask(generated_mask(roots, a.rank))
        seen.setdefault(orbit, invariant(roots, a.rank).key)
    keys = {e.invariant.key: e.index for e in classify(a.rank)}
    rows = [{"orbit": o, "type": oc.types[o], "class_index": keys.get(seen[o])} for o in range(oc.orbit_count)]
    bijective = sorted(r["class_index"] for r in rows) == sorted(keys.values())
    return {"rank": a.rank}, {"orbit_count": oc.orbit_count, "class_count": len(keys),
                              "bijective": bijective, "rows": rows}


def cmd_analyze_series(a) -> tuple[dict, dict]:
    series = series_from_json(json.loads(Path(a.input).read_text()))
    return {"input": a.input}, {"series": series_to_json(series), "base_points": forest_to_json(get_base_points(series))}


def cmd_construct_series(a) -> tuple[dict, dict]:
    trees = trees_from_json(json.loads(Path(a.basepoints).read_text()))
    from weakdp.linear_series import evaluation_matrix
    from weakdp.exact import format_fraction
    M = evaluation_matrix(a.degree, trees)
    series = get_linear_series(a.degree, trees)
    return ({"degree": a.degree, "basepoints": trees_to_json(trees)},
            {"conditions": [[format_fraction(x) for x in row] for row in M], "series": series_to_json(series)})


def cmd_build_surface(a) -> tuple[dict, dict]:
    config = None
    if a.points:
        config = PointConfiguration.from_json(json.loads(Path(a.points).read_text()))
    s = build_surface(C1Label.parse(a.label), seed=a.seed, points=config, retries=a.retries)
    payload = surface_to_json(s)
    if a.out:
        Path(a.out).write_text(json.dumps(payload, indent=2) + "\n")
    return {"label": a.label, "seed": a.seed, "points": a.points}, payload


def cmd_conic_families(a) -> tuple[dict, dict]:
    if a.degree != 4:
        raise UsageError("conic families are tabulated for degree 4 only")
    from weakdp.real_structures import conic_families_degree4
    rows = [{"c1": c.c1_index, "real": c.real_index, "counts": list(c.counts)}
            for c in conic_families_degree4()]
    return {"degree": a.degree}, {"rows": rows}


COMMANDS = {
    "classify-roots": cmd_classify_roots,
    "classify-real": cmd_classify_real,
    "sets": cmd_sets,
    "oracle": cmd_oracle,
    "analyze-series": cmd_analyze_series,
    "construct-series": cmd_construct_series,
    "build-surface": cmd_build_surface,
    "conic-families": cmd_conic_families,
}


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weakdp", description="Root subsystems, real structures and linear series "
                                                            "for weak Del Pezzo surfaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
        return sp

    rank = dict(type=int, choices=range(2, 9), metavar="{2..8}")
    add("classify-roots", "one label per class of root subsystems").add_argument("--rank", required=True, **rank)
    add("classify-real", "real structures with fixed-class counts").add_argument("--rank", required=True, **rank)
    sp = add("sets", "Del Pezzo zero/one/two-sets")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--rank", type=int, choices=[0] + list(range(2, 9)), metavar="{0,2..8}")
    g.add_argument("--label", help='surface lattice, e.g. "1123,45;5"')
    g.add_argument("--ruled", type=int, choices=(0, 1, 2))
    add("oracle", "Weyl orbit classification for small ranks").add_argument(
        "--rank", required=True, type=int, choices=range(2, 6), metavar="{2..5}")
    add("analyze-series", "base points of a plane series").add_argument("--input", required=True)
    sp = add("construct-series", "series with prescribed base points")
    sp.add_argument("--degree", required=True, type=int)
    sp.add_argument("--basepoints", required=True)
    sp = add("build-surface", "realize a label by a cubic series")
    sp.add_argument("--label", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", help="configuration JSON to verify instead of sampling")
    sp.add_argument("--retries", type=int, default=25)
    sp.add_argument("--out")
    add("conic-families", "real conic families in degree four").add_argument("--degree", type=int, default=4)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    p = parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        inputs, payload = COMMANDS[a.command](a)
        _emit(_document(a.command, inputs, payload), a.format, out)
    except UsageError as e:
        p.print_usage(err)
        err.write(f"weakdp: error: {e}\n")
        return 2
    except DOMAIN_ERRORS as e:
        err.write(f"weakdp: {type(e).__name__}: {e}\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError) as e:
        err.write(f"weakdp: input error: {e}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
