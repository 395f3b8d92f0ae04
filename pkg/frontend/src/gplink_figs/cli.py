"""Umbrella CLI: `gplink-figs <figure> --in <dir> --out <dir>`."""

from __future__ import annotations

import sys

from gplink_figs import outage_plot, prediction_panels


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print("usage: gplink-figs {prediction-panels,outage-plot} --in DIR --out DIR")
        return 0 if argv else 2
    command, rest = argv[0], argv[1:]
    if command == "prediction-panels":
        return prediction_panels.main(rest)
    if command == "outage-plot":
        return outage_plot.main(rest)
    print(f"error: unknown figure {command!r}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
