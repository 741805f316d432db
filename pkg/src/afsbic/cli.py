"""Command-line interface: ``afsbic <subcommand> --input FILE [options]``.

Subcommands: partition, select-refs, bicluster, cc, bench, evaluate.  A JSON
config file (``--config``) maps long option names, with dashes or
underscores, to values and overrides the command line.  Failures exit
non-zero with a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench
from .cheng_church import CcConfig, cc_discover
from .expr_matrix import FORMATS, PLAIN, MissingPolicy, load_matrix
from .partition import CONDITIONS, GENES, build_partition, delta_matrix
from .references import reference_scores
from .search import SearchConfig, discover


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=False, help="expression matrix file")
    p.add_argument("--format", default=PLAIN, choices=FORMATS)
    p.add_argument("--alpha", type=float, default=5.0)
    p.add_argument("--beta", type=float, default=1.8)
    p.add_argument("--k", type=int, default=100, help="number of biclusters / references")
    p.add_argument("--msr-threshold", type=float, default=300.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--out", default="afsbic-out", help="output directory")
    p.add_argument("--missing-sentinel", type=float, default=None)
    p.add_argument("--refs", default=None, help="comma-separated reference gene labels")
    p.add_argument("--fuzziness", type=float, default=2.0)
    p.add_argument("--dedupe-jaccard", type=float, default=0.9)
    p.add_argument("--no-inverted-rows", action="store_true")
    p.add_argument("--algorithms", default="fbc,cc")
    p.add_argument("--biclusters", default=None, help="bicluster JSON (evaluate)")
    p.add_argument("--config", default=None, help="JSON file of option overrides")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="afsbic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("partition", "write U_G, U_C (and reference deltas) as labeled CSV"),
        ("select-refs", "rank genes by reference suitability"),
        ("bicluster", "fuzzy bicluster search"),
        ("cc", "Cheng-Church baseline"),
        ("bench", "repeated comparison of the selected algorithms"),
        ("evaluate", "VAR/MFD/MSR for biclusters in a JSON file"),
    ):
        _common(sub.add_parser(name, help=help_))
    return parser


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if not args.config:
        return args
    overrides = json.loads(Path(args.config).read_text())
    if not isinstance(overrides, dict):
        raise ValueError("config file must hold a JSON object")
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in ("command", "config"):
            raise ValueError(f"unknown config key {key!r}")
        setattr(args, attr, value)
    return args


def _matrix(args):
    if not args.input:
        raise ValueError("--input is required")
    return load_matrix(args.input, args.format, MissingPolicy(args.missing_sentinel, args.seed))


def _search_config(args) -> SearchConfig:
    return SearchConfig(args.alpha, args.beta, args.k, args.dedupe_jaccard, args.fuzziness, args.seed)


def _cc_config(args) -> CcConfig:
    return CcConfig(msr_threshold=args.msr_threshold, k_biclusters=args.k,
                    inverted_rows=not args.no_inverted_rows, seed=args.seed)


def _refs(args, m):
    if not args.refs:
        return None
    labels = args.refs if isinstance(args.refs, list) else args.refs.split(",")
    pos = {g: i for i, g in enumerate(m.gene_labels)}
    missing = [g for g in labels if g not in pos]
    if missing:
        raise ValueError(f"unknown reference labels: {missing}")
    return [pos[g] for g in labels]


def _write_labeled(path: Path, values: np.ndarray, rows, cols) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gene", *cols])
        for label, row in zip(rows, values):
            w.writerow([label, *(repr(float(v)) for v in row)])


def cmd_partition(args, out: Path) -> dict:
    m = _matrix(args)
    u_g = build_partition(m, GENES)
    u_c = build_partition(m, CONDITIONS)
    _write_labeled(out / "u_g.csv", u_g.memberships, m.gene_labels, m.condition_labels)
    _write_labeled(out / "u_c.csv", u_c.memberships, m.gene_labels, m.condition_labels)
    written = ["u_g.csv", "u_c.csv"]
    for g in _refs(args, m) or []:
        name = f"delta_{m.gene_labels[g]}.csv"
        _write_labeled(out / name, delta_matrix(u_g, g).deltas, m.gene_labels, m.condition_labels)
        written.append(name)
    return {"written": written}


def cmd_select_refs(args, out: Path) -> dict:
    m = _matrix(args)
    scores = reference_scores(build_partition(m, GENES), args.fuzziness)
    with open(out / "references.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gene", "varpi", *(f"accepted_{c}" for c in m.condition_labels)])
        for s in scores[: args.k]:
            w.writerow([m.gene_labels[s.gene], repr(s.varpi), *s.accepted_counts])
    return {"written": ["references.csv"], "top": [m.gene_labels[s.gene] for s in scores[:5]]}


def _emit_biclusters(m, found, out: Path, prefix: str) -> dict:
    records = [bench.bicluster_record(m, b, f"{prefix}-{i}") for i, b in enumerate(found)]
    (out / "biclusters.json").write_text(json.dumps(records, indent=2) + "\n")
    bench.write_indicators(m, found, out)
    return {"written": ["biclusters.json", "rows_membership.csv", "cols_membership.csv"],
            "n_biclusters": len(records)}


def cmd_bicluster(args, out: Path) -> dict:
    m = _matrix(args)
    return _emit_biclusters(m, discover(m, _search_config(args), _refs(args, m)), out, "fbc")


def cmd_cc(args, out: Path) -> dict:
    m = _matrix(args)
    return _emit_biclusters(m, cc_discover(m, _cc_config(args)), out, "cc")


def cmd_bench(args, out: Path) -> dict:
    algorithms = args.algorithms if isinstance(args.algorithms, list) else args.algorithms.split(",")
    cfg = bench.ExperimentConfig(
        input=args.input, format=args.format, algorithms=tuple(a.strip() for a in algorithms),
        search=_search_config(args), cc=_cc_config(args), repetitions=args.reps,
        seed=args.seed, missing_sentinel=args.missing_sentinel, out=str(out),
    )
    if not args.input:
        raise ValueError("--input is required")
    report = bench.run_experiment(cfg)
    bench.write_report(report, out)
    result = {"written": ["report.json", "metrics.csv"], "warnings": report.warnings}
    if {"fbc", "cc"} <= set(report.algorithms):
        result["comparison"] = bench.compare_table(report)
    return result


def cmd_evaluate(args, out: Path) -> dict:
    m = _matrix(args)
    if not args.biclusters:
        raise ValueError("--biclusters is required")
    found = bench.load_biclusters(args.biclusters, m)
    rows = []
    for i, b in enumerate(found):
        rec = bench.bicluster_record(m, b, f"{b.algorithm}-{i}")
        rows.append({k: rec[k] for k in ("id", "var", "mfd", "msr", "rows", "cols")})
    bench._write_csv(out / "metrics.csv", rows)
    return {"written": ["metrics.csv"], "n_biclusters": len(rows)}


COMMANDS = {
    "partition": cmd_partition,
    "select-refs": cmd_select_refs,
    "bicluster": cmd_bicluster,
    "cc": cmd_cc,
    "bench": cmd_bench,
    "evaluate": cmd_evaluate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        result = COMMANDS[args.command](args, out)
    except Exception as exc:  # noqa: BLE001 - reported as machine-readable JSON
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
