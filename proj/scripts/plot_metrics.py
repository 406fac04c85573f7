#!/usr/bin/env python3
"""Render running-average cost curves and allocation snapshots from the
CSV output of `d2dcache run`.

Usage: plot_metrics.py <rep_dir> [out_prefix]
e.g.   plot_metrics.py out/paper/rep000 figures/rep000
"""
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_metrics(path):
    series = defaultdict(lambda: ([], []))
    with open(path) as f:
        for row in csv.DictReader(f):
            slots, avgs = series[row["policy"]]
            slots.append(int(row["slot"]))
            avgs.append(float(row["running_avg"]))
    return series


def read_allocation(path):
    alloc = defaultdict(lambda: ([], []))
    with open(path) as f:
        for row in csv.DictReader(f):
            files, fracs = alloc[row["policy"]]
            files.append(int(row["file"]))
            fracs.append(float(row["total_fraction"]))
    return alloc


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    rep_dir = Path(sys.argv[1])
    prefix = Path(sys.argv[2]) if len(sys.argv) > 2 else rep_dir / "fig"
    prefix.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(6, 4))
    for policy, (slots, avgs) in sorted(read_metrics(rep_dir / "metrics.csv").items()):
        style = {"hindsight": {"ls": "--", "color": "black"}}.get(policy, {})
        ax.plot(slots, avgs, label=policy, **style)
    ax.set_xlabel("slot")
    ax.set_ylabel("running average cost")
    ax.legend()
    fig.tight_layout()
    fig.savefig(f"{prefix}_running_avg.png", dpi=150)

    for alloc_csv in sorted(rep_dir.glob("allocation_t*.csv")):
        slot = alloc_csv.stem.split("_t")[1]
        fig, ax = plt.subplots(figsize=(6, 4))
        for policy, (files, fracs) in sorted(read_allocation(alloc_csv).items()):
            order = sorted(range(len(files)), key=files.__getitem__)
            ax.plot([files[i] for i in order], [fracs[i] for i in order],
                    label=policy)
        ax.set_xlabel("file id")
        ax.set_ylabel("total cached fraction")
        ax.set_title(f"allocation at t={slot}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(f"{prefix}_allocation_t{slot}.png", dpi=150)
    print(f"figures written with prefix {prefix}")


if __name__ == "__main__":
    main()
