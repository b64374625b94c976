"""Figure rendering for CLI reports.

Figures are written next to the delimited output files; the CSV/JSONL
files remain the machine-readable boundary.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_sweep_figure(points, path) -> None:
    """Overlap curve and optimal angle for the W/Wbar mixture sweep."""
    s = [p.s for p in points]
    lam = [p.lambda_max for p in points]
    tan = [p.tan_theta for p in points]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    ax1.plot(s, lam, color="tab:blue", lw=1.5)
    ax1.axhline(2.0 / 3.0, color="0.6", ls="--", lw=0.8)
    ax1.set_ylabel(r"$\Lambda_{\max}$")
    ax2.plot(s, tan, color="tab:red", lw=1.5)
    ax2.set_xlabel("s")
    ax2.set_ylabel(r"$\tan\theta$")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_slack_figure(slacks, path, title="") -> None:
    """Histogram of inequality slacks from a verification run."""
    slacks = np.asarray(slacks, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positive = slacks[slacks > 0]
    if positive.size:
        ax.hist(np.log10(positive), bins=40, color="tab:blue", alpha=0.8)
        ax.set_xlabel("log10(slack)")
    else:
        ax.hist(slacks, bins=40, color="tab:blue", alpha=0.8)
        ax.set_xlabel("slack")
    ax.set_ylabel("count")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
