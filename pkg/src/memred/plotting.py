"""Figures and CSV for `compare --figures`."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SIZE_COLUMNS = [
    ("expanded_memory", "expanded memory"),
    ("reduced_memory", "reduced memory"),
    ("baseline_minimized", "baseline controller (min.)"),
    ("reduced_minimized", "reduced controller (min.)"),
]

CSV_COLUMNS = ["name", "condition", "vertices", "edges", "pairs", "expanded_memory",
               "full_memory_size", "reduced_memory", "expanded_states", "reduced_states",
               "baseline_controller", "baseline_minimized", "reduced_controller",
               "reduced_minimized", "sim_game_vertices", "language_preserved",
               "baseline_verified", "reduced_verified", "bound_status", "total_ms"]


def write_csv(reports, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in reports:
            row = r.to_dict()
            row["total_ms"] = round(sum(r.times_ms.values()), 3)
            writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])


def memory_figure(reports, path) -> None:
    names = [r.name for r in reports]
    x = np.arange(len(names))
    width = 0.8 / len(SIZE_COLUMNS)
    fig, ax = plt.subplots(figsize=(max(5.0, 1.4 * len(names) + 2), 3.6))
    for i, (key, label) in enumerate(SIZE_COLUMNS):
        values = [max(getattr(r, key) or 0, 0.5) for r in reports]
        ax.bar(x + (i - (len(SIZE_COLUMNS) - 1) / 2) * width, values, width, label=label)
    ax.set_yscale("log")
    ax.set_ylim(bottom=0.5)
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylabel("size")
    ax.legend(fontsize=7, frameon=False, ncol=2, loc="lower center",
              bbox_to_anchor=(0.5, 1.0))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def timing_figure(reports, path) -> None:
    stages = []
    for r in reports:
        for s in r.times_ms:
            if s not in stages:
                stages.append(s)
    names = [r.name for r in reports]
    fig, ax = plt.subplots(figsize=(max(5.0, 1.2 * len(names) + 2), 3.6))
    bottom = np.zeros(len(reports))
    for s in stages:
        values = np.array([r.times_ms.get(s, 0.0) for r in reports])
        ax.bar(names, values, bottom=bottom, label=s)
        bottom += values
    ax.set_ylabel("wall time [ms]")
    ax.tick_params(axis="x", rotation=20)
    ax.legend(fontsize=6, frameon=False, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_figures(reports, directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "memory.png", out / "timing.png", out / "summary.csv"]
    memory_figure(reports, paths[0])
    timing_figure(reports, paths[1])
    write_csv(reports, paths[2])
    return paths
