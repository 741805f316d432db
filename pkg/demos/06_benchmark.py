"""
Repeated comparison
===================

Both algorithms run on the same matrix over several seeds; the report holds
per-bicluster records and their means and standard deviations.
"""

import tempfile
from pathlib import Path

from afsbic.bench import ExperimentConfig, compare_table, run_experiment, write_report
from afsbic.cheng_church import CcConfig
from afsbic.expr_matrix import write_plain
from afsbic.search import SearchConfig
from afsbic.synthetic import planted_matrix

m, _ = planted_matrix(400, 17, [(60, 8), (40, 6)], seed=2, block_noise=8.0)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "matrix.txt"
    write_plain(m.values.round(), path)
    cfg = ExperimentConfig(input=str(path), search=SearchConfig(k_biclusters=20),
                           cc=CcConfig(msr_threshold=300, k_biclusters=20), repetitions=3)
    report = run_experiment(cfg)
    out = write_report(report, Path(tmp) / "report")
    print("written:", sorted(p.name for p in out.iterdir()))

for row in compare_table(report):
    print(row)
print("runtime (s):", {k: round(v, 2) for k, v in report.timing["runtime_seconds"].items()})
