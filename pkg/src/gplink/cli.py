"""Command-line entry point.

    gplink predict-trace  --out runs/fig-prediction
    gplink outage-sweep   --slots 100000 --out runs/fig-outage
    gplink tune-kernel    --out runs/tune
    gplink replay runs/fig-outage/manifest.json --out runs/replayed

All verbs accept --config (flat key=value file), --seed (master seed
override) and --out. The sweep also takes --slots, --conservative (allocate
on the upper confidence bound) and --empirical (Bernoulli decode draws).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from gplink.config import ConfigError, ScenarioConfig, load_config
from gplink.harness import (
    experiment_outage_sweep,
    experiment_prediction_trace,
    experiment_tune_kernel,
    replay_manifest,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gplink",
        description="Interference forecasting and finite-blocklength allocation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, slots=False):
        p.add_argument("--config", help="key=value config file (defaults otherwise)")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--out", default=None, help="output directory")
        if slots:
            p.add_argument("--slots", type=int, help="evaluated slots per episode")

    p = sub.add_parser("predict-trace", help="sliding-window forecast replay (panel data)")
    common(p)
    p = sub.add_parser("outage-sweep", help="achieved-vs-target outage table")
    common(p, slots=True)
    p.add_argument("--conservative", action="store_true",
                   help="allocate on the upper 95%% interference bound")
    p.add_argument("--empirical", action="store_true",
                   help="draw per-slot decode failures as an empirical estimate")
    p = sub.add_parser("tune-kernel", help="marginal-likelihood grid report")
    common(p)
    p = sub.add_parser("replay", help="re-run an experiment from its manifest")
    p.add_argument("manifest", help="path to manifest.json")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _load_scenario(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if getattr(args, "slots", None) is not None:
        updates["n_slots"] = args.slots
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            manifest = replay_manifest(args.manifest, args.out)
        else:
            cfg = _load_scenario(args)
            out = args.out or f"runs/{args.command}"
            if args.command == "predict-trace":
                manifest = experiment_prediction_trace(cfg, out)
            elif args.command == "outage-sweep":
                manifest = experiment_outage_sweep(
                    cfg, out, conservative=args.conservative, empirical=args.empirical
                )
            else:
                manifest = experiment_tune_kernel(cfg, out)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outputs = ", ".join(sorted(manifest.outputs.values()))
    print(f"{manifest.experiment}: wrote {outputs} + manifest.json "
          f"({manifest.duration_seconds:.2f}s)")
    if manifest.experiment == "tune-kernel":
        print(
            "chosen kernel: output_scale="
            f"{manifest.options['chosen_output_scale']:.6g}, "
            f"length_scale={manifest.options['chosen_length_scale']:.6g}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
