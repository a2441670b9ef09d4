"""Figure rendering for evaluation reports and fold previews."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evalharness import EvaluationReport
from .raster import BinaryMask


def accuracy_figure(report: EvaluationReport, path) -> None:
    """Grouped bar chart: representation and proposal accuracy per item."""
    rows = sorted(report.rows, key=lambda r: (r.class_label, r.item_name))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(rows) + 2.0), 4.0))
    if rows:
        xs = np.arange(len(rows))
        rep = [r.representation_accepted / r.representation_total for r in rows]
        prop = [
            r.proposal_accepted / r.proposal_total if r.proposal_total else 0.0
            for r in rows
        ]
        ax.bar(xs - 0.2, rep, width=0.4, label="representation")
        ax.bar(xs + 0.2, prop, width=0.4, label="proposal")
        ax.set_xticks(xs)
        ax.set_xticklabels([r.item_name for r in rows], rotation=45, ha="right", fontsize=8)
        ax.legend(loc="lower right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("accuracy")
    ax.set_title("Automatic folding execution")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def fold_strip(masks: list[BinaryMask], path, initial: BinaryMask | None = None) -> None:
    """One panel per fold step, left to right; optional pre-fold panel."""
    panels: list[tuple[str, BinaryMask]] = []
    if initial is not None:
        panels.append(("input", initial))
    panels.extend((f"fold {k}", m) for k, m in enumerate(masks))
    n = max(len(panels), 1)
    fig, axes = plt.subplots(1, n, figsize=(3.0 * n, 3.2), squeeze=False)
    for ax in axes[0]:
        ax.set_axis_off()
    for ax, (title, mask) in zip(axes[0], panels):
        ax.imshow(mask.bits, cmap="gray_r", interpolation="nearest")
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
