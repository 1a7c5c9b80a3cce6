#!/usr/bin/env python3
"""Plot quench-length-independence curves from a `xyqcr quench-length` CSV."""
import argparse
import collections

from plot_sweep import read_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("-o", "--out", default="quench_length.png")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    meta, cols, rows = read_dataset(args.csv)
    ih0, ih1, iT, isc = (cols.index(c) for c in ("h0", "h1", "T", "dE_scaled"))

    curves = collections.defaultdict(list)
    for r in rows:
        curves[(r[ih0], r[ih1])].append((r[iT], r[isc]))

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for (h0, h1), pts in sorted(curves.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="s", ms=3,
                label=f"$h_0={h0:g} \\to h_1={h1:g}$")
    ax.set_xlabel(r"$k_B T / J$")
    ax.set_ylabel(r"$\Delta\tilde{E}$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=160)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
