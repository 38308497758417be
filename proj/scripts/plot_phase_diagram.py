"""Scatter plot of `calx phase-diagram` regimes.

    calx phase-diagram --n 2 --betas 0.1:3:60 --gammas 0.05:2:60 --out phase.csv
    python3 scripts/plot_phase_diagram.py phase.csv phase.png
"""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

COLORS = {
    "indicator-by-beta<=gamma": "tab:blue",
    "indicator-by-monotonicity": "tab:cyan",
    "harmonic-certified": "tab:orange",
    "undetermined": "lightgrey",
}


def main(src, dst):
    with open(src) as f:
        rows = list(csv.DictReader(f))
    fig, ax = plt.subplots(figsize=(6, 5))
    for regime, color in COLORS.items():
        pts = [(float(r["beta"]), float(r["gamma"])) for r in rows if r["regime"] == regime]
        if pts:
            ax.scatter(*zip(*pts), s=6, c=color, label=regime)
    ax.set_xlabel("beta")
    ax.set_ylabel("gamma")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main(*sys.argv[1:3])
