"""
Report files.

The JSON report is written with sorted keys and no timestamps, so the same
config and seed give a byte-identical file. Plots are static PNGs rendered
with matplotlib's Agg backend.
"""
import csv
import json
import logging
import os
from typing import Any, Dict, List, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from gaudin_lab.pipelines import PipelineReport  # noqa: E402

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


def dumps(document: Mapping[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_table(rows: Sequence[Mapping[str, Any]], path: str) -> None:
    if not rows:
        return
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def write_report(report: PipelineReport, out_dir: str) -> List[str]:
    """Write report.json and one CSV per table; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, REPORT_NAME)
    with open(path, "w") as handle:
        handle.write(dumps(report.to_json()))
    written = [path]
    for name, rows in sorted(report.tables.items()):
        if rows:
            table_path = os.path.join(out_dir, f"{name}.csv")
            write_table(rows, table_path)
            written.append(table_path)
    logger.info("wrote %d report files to %s", len(written), out_dir)
    return written


def _plot_bethe(document: Mapping[str, Any], out_dir: str) -> List[str]:
    census = document.get("sections", {}).get("census")
    if not census:
        logger.warning("report has no census section; skipping Bethe plot")
        return []
    points = document.get("config", {}).get("points", [])
    fig, ax = plt.subplots(figsize=(6, 6))
    for entry in census:
        for sol in entry.get("solutions", []):
            xs = [w[0] for w in sol.get("w", [])]
            ys = [w[1] for w in sol.get("w", [])]
            ax.scatter(xs, ys, s=18, label=f"m={entry.get('m')}")
    zs = [p if isinstance(p, list) else [_to_float(p), 0.0] for p in points]
    ax.scatter([z[0] for z in zs], [z[1] for z in zs], marker="x", c="k", s=60, label="z")
    handles, labels = ax.get_legend_handles_labels()
    unique = dict(zip(labels, handles))
    ax.legend(unique.values(), unique.keys(), fontsize=8)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("Bethe roots")
    path = os.path.join(out_dir, "bethe_roots.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path]


def _plot_spectra(document: Mapping[str, Any], out_dir: str) -> List[str]:
    records = document.get("sections", {}).get("hamiltonians")
    if not records:
        logger.warning("report has no hamiltonians section; skipping spectrum plot")
        return []
    fig, ax = plt.subplots(figsize=(7, 4))
    formulas = sorted({r["formula"] for r in records})
    for k, formula in enumerate(formulas):
        values = [v[0] for r in records if r["formula"] == formula and r.get("spectrum")
                  for v in r["spectrum"]["eigenvalues"]]
        ax.scatter(values, [k] * len(values), marker="|", s=200)
    ax.set_yticks(range(len(formulas)))
    ax.set_yticklabels(formulas)
    ax.set_xlabel("Re eigenvalue")
    path = os.path.join(out_dir, "spectra.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path]


def _plot_monodromy(document: Mapping[str, Any], out_dir: str) -> List[str]:
    section = document.get("sections", {}).get("monodromy")
    if not section:
        logger.warning("report has no monodromy section; skipping distance plot")
        return []
    distances = section.get("local_distances", [])
    rows = [{"loop": k, "distance": repr(d)} for k, d in enumerate(distances)]
    csv_path = os.path.join(out_dir, "monodromy_distances.csv")
    write_table(rows, csv_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(range(len(distances)), [max(d, 1e-18) for d in distances], "o")
    ax.set_xlabel("loop")
    ax.set_ylabel("projective distance")
    path = os.path.join(out_dir, "monodromy.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, path] if rows else [path]


def _to_float(value: Any) -> float:
    if isinstance(value, str) and "/" in value:
        num, den = value.split("/")
        return int(num) / int(den)
    return float(value)


def report_plot(document: Mapping[str, Any], out_dir: str) -> List[str]:
    """
    Static plots of a JSON report: Bethe root constellations, spectra and
    monodromy distances. Missing sections are skipped with a warning.
    """
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []
    for plot in (_plot_bethe, _plot_spectra, _plot_monodromy):
        written.extend(plot(document, out_dir))
    return written


def load_report(path: str) -> Dict[str, Any]:
    with open(path) as handle:
        return json.load(handle)
