"""Repeated benchmark runs comparing the fuzzy search with Cheng-Church."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .cheng_church import CcConfig, cc_discover
from .expr_matrix import PLAIN, BiclusterIndex, ExpressionMatrix, MissingPolicy, load_matrix
from .metrics import evaluate
from .search import Bicluster, SearchConfig, discover

log = logging.getLogger(__name__)

ALGORITHMS = ("fbc", "cc")
TIMING_KEYS = ("runtime_seconds", "timing")


@dataclass(frozen=True)
class ExperimentConfig:
    input: Optional[str] = None
    format: str = PLAIN
    algorithms: tuple[str, ...] = ALGORITHMS
    search: SearchConfig = field(default_factory=SearchConfig)
    cc: CcConfig = field(default_factory=CcConfig)
    repetitions: int = 10
    seed: int = 0
    missing_sentinel: Optional[float] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.algorithms:
            raise ValueError("select at least one algorithm")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")


def bicluster_record(m: ExpressionMatrix, b: Bicluster, ident: str) -> dict:
    """JSON-ready record of one bicluster with its quality indexes."""
    metrics = evaluate(m, b.index, b.inverted_rows)
    rec = {
        "id": ident,
        "algorithm": b.algorithm,
        "reference_label": m.gene_labels[b.reference] if b.reference is not None else None,
        "row_labels": [m.gene_labels[i] for i in b.rows],
        "col_labels": [m.condition_labels[j] for j in b.cols],
        "rows": len(b.rows),
        "cols": len(b.cols),
        "mu_score": b.mu_score,
        "u_score": b.u_score,
        "var": metrics.var,
        "mfd": metrics.mfd,
        "msr": metrics.msr,
    }
    if b.algorithm == "cc":
        rec["inverted_row_labels"] = [m.gene_labels[i] for i in b.inverted_rows]
        rec["msr_original"] = metrics.msr
        rec["msr"] = b.extra.get("msr", metrics.msr)
    return rec


def _summary(values: Sequence[float]) -> dict:
    values = [float(v) for v in values]
    if not values:
        return {"mean": None, "std": None}
    mean = math.fsum(values) / len(values)
    std = float(np.std(values, ddof=1)) if len(values) > 1 else None
    return {"mean": mean, "std": std}


def _aggregate(repetitions: list[dict]) -> dict:
    records = [r for rep in repetitions for r in rep["biclusters"]]
    return {
        "n_biclusters": len(records),
        "var": _summary([r["var"] for r in records]),
        "mfd": _summary([r["mfd"] for r in records]),
        "msr": _summary([r["msr"] for r in records]),
    }


@dataclass
class ExperimentReport:
    """Per-algorithm, per-repetition bicluster records plus aggregates."""

    dataset: dict
    config: dict
    algorithms: dict
    warnings: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def as_dict(self, timing: bool = True) -> dict:
        out = {
            "dataset": self.dataset,
            "config": self.config,
            "algorithms": self.algorithms,
            "warnings": self.warnings,
        }
        if timing:
            out["timing"] = self.timing
        return out

    def records(self, algorithm: str) -> list[dict]:
        return [r for rep in self.algorithms[algorithm]["repetitions"] for r in rep["biclusters"]]


def _config_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["algorithms"] = list(cfg.algorithms)
    d.pop("out", None)
    return d


def _matrix_digest(m: ExpressionMatrix) -> str:
    return hashlib.sha256(np.ascontiguousarray(m.values).tobytes()).hexdigest()


def run_experiment(cfg: ExperimentConfig, matrix: ExpressionMatrix | None = None) -> ExperimentReport:
    """Run every selected algorithm ``cfg.repetitions`` times.

    Repetition ``r`` uses seed ``cfg.seed + r`` for missing-value imputation
    and Cheng-Church masking.  The fuzzy search has no other randomness, so an
    unchanged matrix reuses its previous result.
    """
    if matrix is None and cfg.input is None:
        raise ValueError("experiment needs a matrix or an input path")
    algorithms = {name: {"repetitions": []} for name in cfg.algorithms}
    timing = {name: 0.0 for name in cfg.algorithms}
    fbc_cache: dict[str, list[Bicluster]] = {}
    digests = set()

    for r in range(cfg.repetitions):
        seed = cfg.seed + r
        if matrix is not None:
            m = matrix
        else:
            m = load_matrix(cfg.input, cfg.format, MissingPolicy(cfg.missing_sentinel, seed))
        digest = _matrix_digest(m)
        digests.add(digest)
        for name in cfg.algorithms:
            start = time.perf_counter()
            if name == "fbc":
                if digest not in fbc_cache:
                    fbc_cache[digest] = discover(m, replace(cfg.search, seed=seed))
                found = fbc_cache[digest]
            else:
                found = cc_discover(m, replace(cfg.cc, seed=seed))
            records = [bicluster_record(m, b, f"{name}-{r}-{i}") for i, b in enumerate(found)]
            timing[name] += time.perf_counter() - start
            algorithms[name]["repetitions"].append({"repetition": r, "seed": seed, "biclusters": records})

    warnings = []
    for name, section in algorithms.items():
        section["summary"] = _aggregate(section["repetitions"])
        if section["summary"]["n_biclusters"] == 0:
            warnings.append(f"{name}: no biclusters found in any repetition")
    if "fbc" in algorithms and len(digests) == 1 and cfg.repetitions > 1:
        algorithms["fbc"]["summary"]["deterministic"] = True

    source = m
    dataset = {
        "input": cfg.input,
        "format": cfg.format,
        "n_genes": source.n_genes,
        "n_conditions": source.n_conditions,
    }
    for w in warnings:
        log.warning(w)
    return ExperimentReport(dataset, _config_dict(cfg), algorithms, warnings,
                            {"runtime_seconds": timing})


def compare_table(report: ExperimentReport | dict, baseline: str = "cc", method: str = "fbc") -> list[dict]:
    """Mean and std of VAR and MFD per algorithm, plus the method's improvement row.

    Improvement is ``100 * (baseline - method) / baseline`` per metric, so a
    worse method gives a negative percentage.
    """
    algorithms = report.algorithms if isinstance(report, ExperimentReport) else report["algorithms"]
    for name in (baseline, method):
        if name not in algorithms:
            raise KeyError(f"report has no section for algorithm {name!r}")
    rows = []
    for name, section in algorithms.items():
        s = section["summary"]
        rows.append({
            "algorithm": name,
            "n_biclusters": s["n_biclusters"],
            "var_mean": s["var"]["mean"],
            "var_std": s["var"]["std"],
            "mfd_mean": s["mfd"]["mean"],
            "mfd_std": s["mfd"]["std"],
        })
    row = {"algorithm": f"improvement_{method}_vs_{baseline}_percent", "n_biclusters": None}
    for metric in ("var", "mfd"):
        b = algorithms[baseline]["summary"][metric]["mean"]
        v = algorithms[method]["summary"][metric]["mean"]
        row[f"{metric}_mean"] = improvement(b, v)
        row[f"{metric}_std"] = None
    rows.append(row)
    return rows


def improvement(baseline: float | None, value: float | None) -> float | None:
    if baseline is None or value is None or baseline == 0:
        return None
    return 100.0 * (baseline - value) / baseline


def _write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        path.write_text("")
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def write_report(report: ExperimentReport, out: str | Path) -> Path:
    """Write report.json, metrics.csv, comparison.csv and per-algorithm bicluster JSON."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report.as_dict(), indent=2) + "\n")
    metric_rows = []
    for name in report.algorithms:
        recs = report.records(name)
        (out / f"biclusters_{name}.json").write_text(json.dumps(recs, indent=2) + "\n")
        for rec in recs:
            metric_rows.append({k: rec[k] for k in ("id", "algorithm", "var", "mfd", "msr", "rows", "cols")})
    _write_csv(out / "metrics.csv", metric_rows)
    if {"fbc", "cc"} <= set(report.algorithms):
        _write_csv(out / "comparison.csv", compare_table(report))
    return out


def write_indicators(m: ExpressionMatrix, biclusters: Sequence[Bicluster], out: str | Path) -> None:
    """Binary row and column membership tables, one column per bicluster."""
    out = Path(out)
    names = [f"b{i}" for i in range(len(biclusters))]
    for axis, labels in (("rows", m.gene_labels), ("cols", m.condition_labels)):
        with open(out / f"{axis}_membership.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["label", *names])
            sets = [set(getattr(b, axis)) for b in biclusters]
            for k, label in enumerate(labels):
                writer.writerow([label, *(int(k in s) for s in sets)])


def load_biclusters(path: str | Path, m: ExpressionMatrix) -> list[Bicluster]:
    """Read bicluster JSON records back into index sets of ``m``."""
    gene_pos = {g: i for i, g in enumerate(m.gene_labels)}
    cond_pos = {c: j for j, c in enumerate(m.condition_labels)}
    out = []
    for rec in json.loads(Path(path).read_text()):
        idx = BiclusterIndex.from_sets([gene_pos[g] for g in rec["row_labels"]],
                                       [cond_pos[c] for c in rec["col_labels"]])
        inverted = tuple(sorted(gene_pos[g] for g in rec.get("inverted_row_labels", [])))
        ref = rec.get("reference_label")
        out.append(Bicluster(idx, gene_pos[ref] if ref is not None else None,
                             rec.get("mu_score"), rec.get("u_score"),
                             inverted_rows=inverted, algorithm=rec.get("algorithm", "fbc")))
    return out
