"""Figure rendering for the CLI report paths.

Figures are an optional byproduct of the CSV output, rendered headlessly
to files; nothing here is interactive.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_QUANTITY_LABELS = {
    "conditional_prob": r"$\tilde{P}_{Ay}$",
    "inferred_phase": r"$\Theta$ (rad)",
    "snr": "SNR",
    "standard_probs": r"$P_{By}$",
    "weak_value": r"$|\langle \hat{n} \rangle_w|$",
    "fisher": "Fisher information",
}


def render_sweep_figure(x, series, quantity, path, xlabel="detuning (rad)"):
    """Line plot of the sweep, one curve per chi value.

    ``series`` maps curve labels to value lists; None entries (the CSV's
    NA cells) plot as gaps.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, values in series.items():
        y = np.array([np.nan if v is None else v for v in values], dtype=float)
        ax.plot(x, y, label=label, linewidth=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(_QUANTITY_LABELS.get(quantity, quantity))
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_counts_figure(labels, empirical, analytic, path, title=""):
    """Grouped bars comparing empirical frequencies with Born probabilities."""
    idx = np.arange(len(labels))
    width = 0.38
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(idx - width / 2, empirical, width, label="empirical")
    ax.bar(idx + width / 2, analytic, width, label="analytic")
    ax.set_xticks(idx)
    ax.set_xticklabels(labels)
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
