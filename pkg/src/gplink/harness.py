"""Seeded experiment orchestration and CSV/manifest export.

Two canonical experiments: `prediction-trace` replays the sliding-window
forecast narrative (prior panel plus per-block posterior panels) and
`outage-sweep` produces the achieved-vs-target outage table for the three
predictors under common random numbers. `tune-kernel` reports the marginal-
likelihood grid for one training window.

Every experiment derives its random streams from the master seed through
fixed labels (master, crc32(label), position), so adding experiments never
perturbs existing ones, and writes a manifest that replays to byte-identical
CSV output.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import gplink
from gplink.allocation import simulate_channel, sweep_targets, write_sweep_csv
from gplink.channel import write_trace_csv
from gplink.config import ScenarioConfig
from gplink.gp import (
    FactorizationError,
    GpModel,
    HyperGrid,
    RbfKernel,
    TrainingSet,
    log_marginal_likelihood,
    sample_prior,
)
from gplink.predictors import (
    GenieAided,
    GprSlidingWindow,
    MovingAverage,
    run_prediction_trace,
    write_predictions_csv,
)
from gplink.units import linear_to_db

PRIOR_HEADER = "t,path1,path2,path3,mean_db,ci_low_db,ci_high_db"
PANELS_HEADER = "panel,series,t,value_db,ci_low_db,ci_high_db"
CI_Z = 1.96
PANEL_GRID_STEP = 0.25
N_PRIOR_PATHS = 3


def substream(master_seed: int, label: str, index: int = 0) -> np.random.SeedSequence:
    """Deterministic per-purpose stream: entropy (master, crc32(label)), key (index,)."""
    return np.random.SeedSequence(
        entropy=[int(master_seed), zlib.crc32(label.encode("utf-8"))],
        spawn_key=(index,),
    )


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to re-execute an experiment bit-for-bit."""

    experiment: str
    config: dict
    options: dict
    outputs: dict
    code_version: str
    duration_seconds: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "experiment": self.experiment,
                "config": self.config,
                "options": self.options,
                "outputs": self.outputs,
                "code_version": self.code_version,
                "duration_seconds": self.duration_seconds,
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        return cls(
            experiment=data["experiment"],
            config=data["config"],
            options=data.get("options", {}),
            outputs=data.get("outputs", {}),
            code_version=data.get("code_version", ""),
            duration_seconds=data.get("duration_seconds", 0.0),
        )


def _write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    path = out_dir / "manifest.json"
    path.write_text(manifest.to_json() + "\n", encoding="utf-8")
    return path


def _predictor_suite(cfg: ScenarioConfig, conservative: bool = False) -> list:
    return [
        GenieAided(),
        MovingAverage(alpha=cfg.alpha),
        GprSlidingWindow(
            window=cfg.window,
            horizon=cfg.horizon,
            kernel=cfg.kernel,
            conservative=conservative,
            noise_eps=cfg.noise_eps,
        ),
    ]


def experiment_prediction_trace(cfg: ScenarioConfig, out_dir) -> RunManifest:
    """Prior panel plus block-by-block posterior panels and prediction CSV."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_blocks = 5
    n_total = cfg.window + n_blocks * cfg.horizon
    trace, desired = simulate_channel(
        cfg, n_total, substream(cfg.master_seed, "prediction-trace")
    )
    predictor = GprSlidingWindow(
        window=cfg.window, horizon=cfg.horizon, kernel=cfg.kernel, noise_eps=cfg.noise_eps
    )
    records = run_prediction_trace(predictor, trace, train_len=cfg.window)

    trace_path = out_dir / "trace.csv"
    write_trace_csv(trace_path, trace, desired)
    pred_path = out_dir / "predictions.csv"
    write_predictions_csv(pred_path, records, trace)

    times = np.arange(n_total, dtype=float)
    paths = sample_prior(
        cfg.kernel, times, N_PRIOR_PATHS, np.random.default_rng(substream(cfg.master_seed, "prior-paths"))
    )
    half = CI_Z * cfg.kernel.output_scale
    prior_path = out_dir / "prior.csv"
    with open(prior_path, "w", encoding="utf-8") as fh:
        fh.write(PRIOR_HEADER + "\n")
        for j, t in enumerate(times):
            cells = [f"{t:.17g}"] + [f"{paths[p, j]:.17g}" for p in range(N_PRIOR_PATHS)]
            cells += ["0", f"{-half:.17g}", f"{half:.17g}"]
            fh.write(",".join(cells) + "\n")

    panels_path = out_dir / "panels.csv"
    truth_db = linear_to_db(np.maximum(trace.total, 1e-30))
    noise_var = predictor.effective_noise_variance(cfg.kernel)
    with open(panels_path, "w", encoding="utf-8") as fh:
        fh.write(PANELS_HEADER + "\n")

        def row(panel, series, t, value, low=None, high=None):
            low = value if low is None else low
            high = value if high is None else high
            fh.write(f"{panel},{series},{t:.17g},{value:.17g},{low:.17g},{high:.17g}\n")

        for block in range(n_blocks):
            panel = block + 1
            start = cfg.window + block * cfg.horizon
            w0 = start - cfg.window
            window_db = truth_db[w0:start]
            mu = window_db.mean()
            train = TrainingSet(
                inputs=times[w0:start],
                targets=window_db - mu,
                noise_variance=noise_var,
            )
            model = GpModel(cfg.kernel, train)
            stop = min(start + cfg.horizon, n_total) - 1
            grid = np.arange(w0, stop + PANEL_GRID_STEP / 2, PANEL_GRID_STEP)
            post = model.predict(grid)
            for t, m, lo, hi in zip(grid, post.mean + mu, post.lower95 + mu, post.upper95 + mu):
                row(panel, "posterior", t, m, lo, hi)
            for t in range(w0, start):
                row(panel, "train", float(t), truth_db[t])
            for t in range(w0, min(start + cfg.horizon, n_total)):
                row(panel, "truth", float(t), truth_db[t])

    manifest = RunManifest(
        experiment="prediction-trace",
        config=cfg.to_dict(),
        options={},
        outputs={
            "trace": trace_path.name,
            "predictions": pred_path.name,
            "prior": prior_path.name,
            "panels": panels_path.name,
        },
        code_version=gplink.__version__,
        duration_seconds=time.perf_counter() - t0,
    )
    _write_manifest(out_dir, manifest)
    return manifest


def experiment_outage_sweep(
    cfg: ScenarioConfig, out_dir, conservative: bool = False, empirical: bool = False
) -> RunManifest:
    """Fig.-style outage table: three predictors crossed with the targets."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = sweep_targets(
        cfg,
        _predictor_suite(cfg, conservative=conservative),
        list(cfg.targets),
        cfg.n_slots,
        substream(cfg.master_seed, "outage-sweep"),
        empirical=empirical,
    )
    sweep_path = out_dir / "sweep.csv"
    write_sweep_csv(sweep_path, rows)
    manifest = RunManifest(
        experiment="outage-sweep",
        config=cfg.to_dict(),
        options={"conservative": conservative, "empirical": empirical},
        outputs={"sweep": sweep_path.name},
        code_version=gplink.__version__,
        duration_seconds=time.perf_counter() - t0,
    )
    _write_manifest(out_dir, manifest)
    return manifest


def experiment_tune_kernel(cfg: ScenarioConfig, out_dir) -> RunManifest:
    """Marginal-likelihood grid over one training window, plus the argmax."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace, _ = simulate_channel(cfg, cfg.window, substream(cfg.master_seed, "tune-kernel"))
    window_db = linear_to_db(np.maximum(trace.total, 1e-30))
    centered = window_db - window_db.mean()
    noise_var = GprSlidingWindow(
        window=cfg.window, kernel=cfg.kernel, noise_eps=cfg.noise_eps
    ).effective_noise_variance(cfg.kernel)
    train = TrainingSet(
        inputs=np.arange(cfg.window, dtype=float), targets=centered, noise_variance=noise_var
    )
    grid = HyperGrid()
    tune_path = out_dir / "tune.csv"
    best = (-np.inf, None)
    with open(tune_path, "w", encoding="utf-8") as fh:
        fh.write("output_scale,length_scale,log_marginal_likelihood\n")
        for ell in grid.length_scales:
            for sf in grid.output_scales:
                kernel = RbfKernel(output_scale=float(sf), length_scale=float(ell))
                try:
                    score = log_marginal_likelihood(kernel, train)
                except FactorizationError:
                    score = -np.inf
                fh.write(f"{sf:.17g},{ell:.17g},{score:.17g}\n")
                if score > best[0] or (score == best[0] and best[1] is not None
                                       and ell > best[1].length_scale):
                    best = (score, kernel)
    chosen = best[1]
    manifest = RunManifest(
        experiment="tune-kernel",
        config=cfg.to_dict(),
        options={
            "chosen_output_scale": chosen.output_scale if chosen else None,
            "chosen_length_scale": chosen.length_scale if chosen else None,
            "chosen_log_marginal_likelihood": best[0] if chosen else None,
        },
        outputs={"tune": tune_path.name},
        code_version=gplink.__version__,
        duration_seconds=time.perf_counter() - t0,
    )
    _write_manifest(out_dir, manifest)
    return manifest


_EXPERIMENTS = {
    "prediction-trace": experiment_prediction_trace,
    "outage-sweep": experiment_outage_sweep,
    "tune-kernel": experiment_tune_kernel,
}


def replay_manifest(manifest_path, out_dir) -> RunManifest:
    """Re-execute the experiment a manifest describes, into out_dir."""
    manifest = RunManifest.from_json(Path(manifest_path).read_text(encoding="utf-8"))
    cfg = ScenarioConfig.from_dict(manifest.config)
    if manifest.experiment == "outage-sweep":
        return experiment_outage_sweep(
            cfg,
            out_dir,
            conservative=manifest.options.get("conservative", False),
            empirical=manifest.options.get("empirical", False),
        )
    if manifest.experiment not in _EXPERIMENTS:
        raise ValueError(f"unknown experiment {manifest.experiment!r}")
    return _EXPERIMENTS[manifest.experiment](cfg, out_dir)
