"""Achieved vs target outage on log-log axes with the y = x reference."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gplink_figs.data import CsvFormatError, load_outage_table

SERIES_STYLE = {
    "genie": dict(marker="o", color="tab:green"),
    "gpr": dict(marker="s", color="tab:blue"),
    "ma": dict(marker="^", color="tab:orange"),
}


@dataclass(frozen=True)
class FigureSpec:
    sweep_csv: Path
    output_path: Path
    value_column: str = "achieved_analytic"


def build_outage_figure(rows, value_column="achieved_analytic"):
    """One series per predictor, dashed y = x, log-log axes."""
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    by_predictor: dict[str, list] = {}
    for row in rows:
        by_predictor.setdefault(row["predictor"], []).append(row)
    targets = [row["target"] for row in rows]
    lo, hi = min(targets), max(targets)
    ax.plot([lo, hi], [lo, hi], "k--", lw=1.0, label="target = achieved", gid="reference")
    for name, series in by_predictor.items():
        series = sorted(series, key=lambda r: r["target"])
        x = [r["target"] for r in series]
        y = [r[value_column] for r in series]
        style = SERIES_STYLE.get(name, dict(marker="d"))
        ax.plot(x, y, lw=1.2, label=name, gid=f"series-{name}", **style)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlim(lo / 2, hi * 2)
    ax.set_xlabel("target outage")
    ax.set_ylabel("achieved outage")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def render_outage_plot(spec: FigureSpec) -> Path:
    rows = load_outage_table(spec.sweep_csv)
    fig = build_outage_figure(rows, spec.value_column)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render achieved-vs-target outage from a sweep CSV."
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding sweep.csv")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the rendered figure")
    parser.add_argument("--empirical", action="store_true",
                        help="plot the Bernoulli-draw column instead of the analytic one")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        sweep_csv=Path(args.in_dir) / "sweep.csv",
        output_path=Path(args.out_dir) / "outage.pdf",
        value_column="achieved_empirical" if args.empirical else "achieved_analytic",
    )
    try:
        out = render_outage_plot(spec)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
