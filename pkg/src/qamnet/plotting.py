"""Static figures written next to the CSV reports.

Everything renders through the non-interactive Agg backend into files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .patterns import index_to_pattern  # noqa: E402


def get_publication_quality_plot(width=6.0, height=None):
    """Fresh figure and axes with consistent font sizes.

    Height defaults to ``width`` times the golden ratio.
    """
    if not height:
        height = width * (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height), facecolor="w")
    for item in [ax.xaxis.label, ax.yaxis.label, ax.title]:
        item.set_fontsize(width * 2)
    ax.tick_params(labelsize=width * 1.5)
    return fig, ax


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_basis_probabilities(probabilities, path, highlight=(), title="", labels="ABCDEFGH"):
    """Bar chart over basis-state indices, stored patterns highlighted and lettered."""
    fig, ax = get_publication_quality_plot()
    idx = list(range(len(probabilities)))
    colors = ["C3" if k in highlight else "C0" for k in idx]
    ax.bar(idx, probabilities, color=colors)
    for letter, k in zip(labels, highlight):
        ax.annotate(letter, (k, probabilities[k]), ha="center", va="bottom")
    ax.set_xlabel("basis state index")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_table1(rows, path):
    """Grouped bars: probability of each two-qubit outcome for every (input, w) row."""
    fig, ax = get_publication_quality_plot(width=8.0)
    width = 0.2
    names = [f"{r['input']} w={r['w']:+d}" for r in rows]
    for k in range(4):
        label = str(list(index_to_pattern(k, 2).values))
        ax.bar([i + (k - 1.5) * width for i in range(len(rows))],
               [r["probabilities"][k] for r in rows], width, label=label)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=8, ncol=4, loc="upper center")
    return _save(fig, path)


def plot_gap_trace(trace, path, title=""):
    fig, ax = get_publication_quality_plot()
    s = [p[0] for p in trace]
    g = [p[1] if p[1] is not None and math.isfinite(p[1]) else float("nan") for p in trace]
    ax.plot(s, g, "-")
    ax.set_xlabel("s = t / T")
    ax.set_ylabel("gap")
    if title:
        ax.set_title(title)
    return _save(fig, path)
