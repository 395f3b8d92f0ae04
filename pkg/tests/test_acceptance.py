"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every check pins its tolerance explicitly.
"""

import dataclasses
import filecmp
import math
import time

import numpy as np
from scipy.stats import kstest

from gplink.allocation import run_episode
from gplink.blocklength import (
    CodingSpec,
    achieved_error,
    q_function,
    q_inverse,
    required_channel_uses,
)
from gplink.blocklength import _channel_uses_real
from gplink.channel import LinkConfig, build_interference_trace
from gplink.config import ScenarioConfig
from gplink.gp import posterior, sample_prior
from gplink.harness import (
    experiment_outage_sweep,
    experiment_prediction_trace,
    replay_manifest,
)
from gplink.predictors import GenieAided, GprSlidingWindow, MovingAverage, run_prediction_trace
from gplink.units import db_to_linear, linear_to_db

from test_gp import posterior_oracle, random_problem

CFG = ScenarioConfig()
SEEDS = range(5)


def report(n, name, ok, detail, t0, budget_s):
    elapsed = time.time() - t0
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {n} ({name}): {detail} [{elapsed:.1f}s]")
    assert ok, f"criterion {n}: {detail}"
    assert elapsed <= budget_s, f"criterion {n} exceeded its {budget_s}s budget"


def test_criterion_1_genie_bound():
    t0 = time.time()
    worst = -math.inf
    for seed in SEEDS:
        for target in CFG.targets:
            spec = CodingSpec(payload_bits=CFG.payload_bits, target_error=target)
            result = run_episode(CFG, GenieAided(), spec, 100_000, seed=seed,
                                 empirical=False)
            worst = max(worst, result.achieved_outage_analytic / target)
            if result.achieved_outage_analytic > target:
                report(1, "genie bound", False,
                       f"seed {seed} target {target:g} violated", t0, 120)
    report(1, "genie bound", True,
           f"max achieved/target = {worst:.3f} over 5 seeds x 5 targets", t0, 120)


def test_criterion_2_predictor_ordering():
    t0 = time.time()
    passes = 0
    details = []
    for seed in SEEDS:
        ok = True
        for target in (1e-2, 1e-3):
            spec = CodingSpec(payload_bits=CFG.payload_bits, target_error=target)
            achieved = {}
            for p in (
                GenieAided(),
                MovingAverage(alpha=CFG.alpha),
                GprSlidingWindow(window=CFG.window, horizon=CFG.horizon,
                                 kernel=CFG.kernel, noise_eps=CFG.noise_eps),
            ):
                r = run_episode(CFG, p, spec, 100_000, seed=seed, empirical=False)
                achieved[p.name] = r.achieved_outage_analytic
            ordered = achieved["genie"] <= achieved["gpr"] <= achieved["ma"]
            ma_bad_enough = achieved["ma"] >= 2.0 * target
            gpr_close_enough = achieved["gpr"] <= 3.0 * target
            ok = ok and ordered and ma_bad_enough and gpr_close_enough
            details.append(
                f"s{seed}@{target:g}: genie={achieved['genie'] / target:.2f}x "
                f"gpr={achieved['gpr'] / target:.2f}x ma={achieved['ma'] / target:.2f}x"
            )
        passes += ok
    report(2, "predictor ordering", passes >= 3,
           f"{passes}/5 seeds satisfy ordering+margins; " + "; ".join(details[:4]),
           t0, 600)


def test_criterion_3_prediction_accuracy():
    t0 = time.time()
    links = [LinkConfig(db_to_linear(x), CFG.coherence) for x in CFG.interferer_inrs_db]
    wins = 0
    for seed in range(20):
        trace = build_interference_trace(links, 200, seed=3000 + seed)
        truth_db = linear_to_db(trace.total)

        def rmse(records):
            err = [r.predicted_db - truth_db[r.slot] for r in records]
            return math.sqrt(np.mean(np.square(err)))

        gpr = GprSlidingWindow(window=75, horizon=1, kernel=CFG.kernel,
                               noise_eps=CFG.noise_eps)
        r_gpr = rmse(run_prediction_trace(gpr, trace, train_len=75))
        r_ma = rmse(run_prediction_trace(MovingAverage(alpha=0.01), trace, train_len=75))
        wins += r_gpr < r_ma
    report(3, "prediction accuracy", wins >= 18,
           f"GPR dB-RMSE below MA on {wins}/20 paired traces", t0, 120)


def test_criterion_4_ci_coverage():
    t0 = time.time()
    kernel = CFG.kernel
    gpr_proto = GprSlidingWindow(window=75, horizon=1, kernel=kernel,
                                 noise_eps=CFG.noise_eps)
    noise_sd = math.sqrt(gpr_proto.effective_noise_variance(kernel))
    inside = total = 0
    for seed in range(10):
        n = 200
        path_db = sample_prior(kernel, np.arange(float(n)), 1, seed=seed)[0]
        obs_db = path_db + np.random.default_rng(7000 + seed).normal(0, noise_sd, n)
        obs_linear = db_to_linear(obs_db)
        gpr = gpr_proto.clone()
        for t in range(75, n):
            rec = gpr.predict_next(obs_linear[:t])
            total += 1
            inside += rec.ci_low_db <= obs_db[t] <= rec.ci_high_db
    frac = inside / total
    report(4, "CI coverage", total >= 1000 and 0.90 <= frac <= 0.98,
           f"95% band covered {frac:.3f} of {total} predicted points", t0, 60)


def test_criterion_5_posterior_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(55)
    worst = 0.0
    for _ in range(100):
        kernel, train, query = random_problem(rng, n_max=50)
        post = posterior(kernel, train, query, full_covariance=True)
        mean, cov = posterior_oracle(kernel, train, query)
        worst = max(
            worst,
            float(np.max(np.abs(post.mean - mean))),
            float(np.max(np.abs(post.full_covariance - cov))),
        )
    report(5, "posterior oracle equivalence", worst <= 1e-8,
           f"max elementwise deviation {worst:.2e} over 100 problems", t0, 30)


def test_criterion_6_blocklength_solver_duality():
    t0 = time.time()
    worst_gap = 0
    for payload in (10, 50, 200):
        for delta in (1.0, 10.0, 99.0, 1000.0):
            for target in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
                spec = CodingSpec(payload_bits=payload, target_error=target)
                r = required_channel_uses(spec, delta).channel_uses
                assert achieved_error(spec, r, delta) <= target
                assert r == 1 or achieved_error(spec, r - 1, delta) > target
                scan = 1
                while achieved_error(spec, scan, delta) > target:
                    scan += 1
                assert r == scan
                r_real = _channel_uses_real(spec, delta, q_inverse(target))
                worst_gap = max(worst_gap, abs(r_real - scan))
    report(6, "blocklength solver duality", worst_gap <= 1.0 + 1e-9,
           f"closed form within {worst_gap:.3f} of the scan oracle on the full grid",
           t0, 10)


def test_criterion_7_special_function_accuracy():
    t0 = time.time()
    worst = 0.0
    for x in np.linspace(-6.0, 6.0, 24001):
        worst = max(worst, abs(q_inverse(q_function(x)) - x))
    lo, hi = 0.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > 1e-5:
            lo = mid
        else:
            hi = mid
    bisect = 0.5 * (lo + hi)
    point_ok = abs(q_inverse(1e-5) - 4.26489) <= 1e-4
    oracle_ok = abs(q_inverse(1e-5) - bisect) <= 1e-9
    report(7, "special functions", worst <= 1e-8 and point_ok and oracle_ok,
           f"round-trip max |err| {worst:.2e}; q_inverse(1e-5)={q_inverse(1e-5):.6f}",
           t0, 30)


def test_criterion_8_channel_statistics():
    t0 = time.time()
    links = [LinkConfig(db_to_linear(x), CFG.coherence) for x in CFG.interferer_inrs_db]
    trace = build_interference_trace(links, 1_000_000, seed=88)
    mean = trace.total.mean()
    mean_ok = abs(mean - 7.607) <= 0.01 * 7.607
    gains = trace.per_interferer[2] / db_to_linear(0.0)  # the 0 dB interferer
    sample = gains[:: len(gains) // 10_000]
    stat = kstest(sample, "expon").statistic
    ks_ok = stat < 1.63 / math.sqrt(len(sample))
    report(8, "channel statistics", mean_ok and ks_ok,
           f"mean={mean:.4f} (target 7.607 +/- 1%); KS={stat:.4f}", t0, 30)


def test_criterion_9_determinism(tmp_path):
    t0 = time.time()
    cfg = dataclasses.replace(CFG, n_slots=2_000)
    first = tmp_path / "first"
    experiment_outage_sweep(cfg, first, empirical=True)
    second = tmp_path / "second"
    replay_manifest(first / "manifest.json", second)
    sweep_same = filecmp.cmp(first / "sweep.csv", second / "sweep.csv", shallow=False)
    fig_a = tmp_path / "fig_a"
    fig_b = tmp_path / "fig_b"
    experiment_prediction_trace(cfg, fig_a)
    replay_manifest(fig_a / "manifest.json", fig_b)
    trace_same = all(
        filecmp.cmp(fig_a / name, fig_b / name, shallow=False)
        for name in ("trace.csv", "predictions.csv", "prior.csv", "panels.csv")
    )
    report(9, "determinism", sweep_same and trace_same,
           "manifest replay reproduced every CSV byte-for-byte", t0, 120)
