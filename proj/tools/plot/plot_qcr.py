#!/usr/bin/env python3
"""Plot T*(h0) boundaries from one or more `xyqcr map-qcr` CSVs."""
import argparse

from plot_sweep import read_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--out", default="qcr.png")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for path in args.csv:
        meta, cols, rows = read_dataset(path)
        ih0, its, ist = cols.index("h0"), cols.index("Tstar"), cols.index("status")
        pts = [(r[ih0], r[its]) for r in rows if r[ist] == 0.0]  # crossed points only
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3,
                label=meta.get("quantity", path))
    ax.set_xlabel(r"$h_0 / J$")
    ax.set_ylabel(r"$k_B T^* / J$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=160)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
