#!/usr/bin/env python3
"""Plot scaled-response curves from a `xyqcr sweep-temperature` CSV."""
import argparse
import collections
import csv


def read_dataset(path):
    meta, rows = {}, []
    with open(path) as f:
        for line in f:
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    k, v = body.split(":", 1)
                    meta[k.strip()] = v.strip()
            else:
                rows.append([float(x) for x in line.strip().split(",")])
    cols = meta.get("columns", "").split(",")
    return meta, cols, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("-o", "--out", default="sweep.png")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    meta, cols, rows = read_dataset(args.csv)
    ih0, iT, isc = cols.index("h0"), cols.index("T"), cols.index("dQ_scaled")

    curves = collections.defaultdict(list)
    for r in rows:
        curves[r[ih0]].append((r[iT], r[isc]))

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for h0, pts in sorted(curves.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3,
                label=f"$h_0/J = {h0:g}$")
    ax.set_xlabel(r"$k_B T / J$")
    ax.set_ylabel(r"$\Delta\tilde{\mathcal{Q}}$")
    ax.set_title(meta.get("quantity", ""))
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=160)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
