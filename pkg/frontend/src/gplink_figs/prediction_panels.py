"""Six-panel forecast narrative: prior beliefs, then sliding-window updates.

Panel 1 shows the zero-mean prior (three sample paths and the 95% band);
panels 2-6 show each block's training points (crosses), the posterior mean
with its shaded 95% band, and the realized interference.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gplink_figs.data import CsvFormatError, load_panels, load_prior

ALL_PANELS = (0, 1, 2, 3, 4, 5)  # 0 is the prior panel
BAND_COLOR = "tab:blue"
BAND_ALPHA = 0.25


@dataclass(frozen=True)
class FigureSpec:
    prior_csv: Path
    panels_csv: Path
    output_path: Path
    panels: tuple[int, ...] = ALL_PANELS


def _draw_prior(ax, prior):
    t = prior["t"]
    ax.fill_between(t, prior["ci_low"], prior["ci_high"],
                    color=BAND_COLOR, alpha=BAND_ALPHA, gid="band")
    for i, path in enumerate(prior["paths"]):
        ax.plot(t, path, lw=0.9, gid=f"sample-{i}")
    ax.plot(t, prior["mean"], color="k", lw=1.0, gid="mean")
    ax.set_title("(a) prior")
    ax.set_ylabel("interference (dB, centered)")


def _draw_block(ax, block, label):
    post = block["posterior"]
    ax.fill_between(post["t"], post["ci_low"], post["ci_high"],
                    color=BAND_COLOR, alpha=BAND_ALPHA, gid="band")
    ax.plot(post["t"], post["value"], color=BAND_COLOR, lw=1.2, gid="posterior-mean")
    truth = block["truth"]
    ax.plot(truth["t"], truth["value"], color="k", lw=0.9, ls="--", gid="truth")
    train = block["train"]
    ax.plot(train["t"], train["value"], "rx", ms=3.5, mew=0.8, gid="train")
    ax.set_title(label)


def build_prediction_figure(prior, panels, selection=ALL_PANELS):
    """Assemble the figure from already-loaded CSV data."""
    fig, axes = plt.subplots(2, 3, figsize=(12, 6.5), sharex=False)
    axes = axes.ravel()
    letters = "abcdef"
    for slot, panel in enumerate(selection):
        ax = axes[slot]
        if panel == 0:
            _draw_prior(ax, prior)
            continue
        if panel not in panels:
            print(f"notice: panel {panel} has no rows; skipped", file=sys.stderr)
            ax.set_axis_off()
            ax.set_title(f"({letters[slot]}) no data")
            continue
        _draw_block(ax, panels[panel], f"({letters[slot]}) block {panel}")
    for ax in axes[len(selection):]:
        ax.set_axis_off()
    for ax in axes[3:]:
        ax.set_xlabel("slot")
    fig.tight_layout()
    return fig


def render_prediction_panels(spec: FigureSpec) -> Path:
    prior = load_prior(spec.prior_csv)
    panels = load_panels(spec.panels_csv)
    fig = build_prediction_figure(prior, panels, spec.panels)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render the six-panel prediction narrative from harness CSVs."
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding prior.csv and panels.csv")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the rendered figure")
    args = parser.parse_args(argv)
    in_dir = Path(args.in_dir)
    spec = FigureSpec(
        prior_csv=in_dir / "prior.csv",
        panels_csv=in_dir / "panels.csv",
        output_path=Path(args.out_dir) / "prediction_panels.pdf",
    )
    try:
        out = render_prediction_panels(spec)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
