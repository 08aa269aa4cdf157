"""Files written for a fuzz run: delimited iteration data plus figures.

``write_report`` drops an ``iterations.csv`` with one row per fuzz
iteration next to two rendered PNG summaries: the distribution of
round-trip errors and the pass/fail balance per check. Paths of all
written files come back to the caller, in the order written.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .fuzz import FuzzReport

__all__ = ["write_report"]


def write_report(report: FuzzReport, out_dir) -> list[Path]:
    """Writes iterations.csv and summary figures into ``out_dir``."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "iterations.csv"
    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["iteration", "inputs", "outputs", "nodes", "edges",
             "roundtrip_error", "failures"]
        )
        for r in report.records:
            writer.writerow(
                [r.index, r.n_in, r.n_out, r.node_count, r.edge_count,
                 f"{r.roundtrip_error:.6e}", "; ".join(r.failures)]
            )
    written.append(csv_path)

    errors = np.array([r.roundtrip_error for r in report.records], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    floor = 1e-18
    ax.hist(np.log10(np.maximum(errors, floor)), bins=24, color="#2a7e43",
            edgecolor="black", linewidth=0.5)
    ax.axvline(np.log10(report.tolerance), color="#b02a2a", linestyle="--",
               label=f"tolerance 1e{np.log10(report.tolerance):+.0f}")
    ax.set_xlabel("log10 round-trip error (relative)")
    ax.set_ylabel("iterations")
    ax.set_title(f"Normal form round trip, seed {report.seed}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    error_path = out / "roundtrip_errors.png"
    fig.savefig(error_path, dpi=150)
    plt.close(fig)
    written.append(error_path)

    fails = {name: 0 for name in report.check_names}
    for record in report.records:
        for failure in record.failures:
            name = failure.split(":", 1)[0]
            if name in fails:
                fails[name] += 1
    names = list(fails)
    passed = [report.iterations - fails[n] for n in names]
    failed = [fails[n] for n in names]
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = np.arange(len(names))
    ax.bar(xs - 0.18, passed, width=0.36, label="pass", color="#2a7e43")
    ax.bar(xs + 0.18, failed, width=0.36, label="fail", color="#b02a2a")
    ax.set_xticks(xs)
    ax.set_xticklabels(names)
    ax.set_ylabel("iterations")
    ax.set_title(f"Check outcomes over {report.iterations} iterations")
    ax.legend(loc="upper right")
    fig.tight_layout()
    checks_path = out / "check_outcomes.png"
    fig.savefig(checks_path, dpi=150)
    plt.close(fig)
    written.append(checks_path)

    return written
