"""Plot E(R) and E'(R) from `calx energy-curve` output.

    calx energy-curve --n 2 --beta 1 --gamma 0.34 --out curve.csv
    python3 scripts/plot_energy_curve.py curve.csv energy.png
"""
import csv
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(src, dst):
    with open(src) as f:
        rows = [tuple(map(float, (r["R"], r["E"], r["dE_dR"]))) for r in csv.DictReader(f)]
    R, E, dE = zip(*rows)
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
    top.plot(R, E)
    top.set_ylabel("E(R)")
    bottom.plot(R, dE)
    bottom.axhline(0.0, color="grey", lw=0.5)
    bottom.set_ylabel("E'(R)")
    bottom.set_xlabel("R")
    sidecar = src + ".json"
    if os.path.exists(sidecar):
        with open(sidecar) as f:
            for r in json.load(f)["critical_radii"]:
                for ax in (top, bottom):
                    ax.axvline(r, color="red", ls="--", lw=0.7)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main(*sys.argv[1:3])
