"""Learning-curve figures rendered next to the CSV/JSON reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluate import ScoreReport


def render_report(report: ScoreReport, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    xs = [idx for idx, _size, _means in report.groups]
    for k in report.k_values:
        ys = [means[k] for _idx, _size, means in report.groups]
        ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.2, label=f"top-{k}")
    for joint in report.joints:
        ax.axvline(joint / report.group_size + 1, color="gray", linewidth=0.8, linestyle="--")
    ax.set_xlabel(f"MIU group ({report.group_size} per group)")
    ax.set_ylabel("mean score")
    ax.set_title("Per-group conversion score")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
