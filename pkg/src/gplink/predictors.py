"""One-step-ahead interference predictors behind a uniform interface.

Three implementations:

* GprSlidingWindow -- GP regression on the most recent `window` observations,
  in dB with the window mean removed. Every predict_next call refits on the
  current window and returns the one-step-ahead posterior mean (the
  conservative flag switches to the upper 95% bound). Because the window is
  always `window` consecutive unit-spaced slots, the kernel factorization is
  translation-invariant and cached once, which reduces a refit to a dot
  product.
* MovingAverage -- first-order IIR filter est = alpha * est_prev +
  (1 - alpha) * obs in linear power; the prediction is the current estimate.
  A raw mode replaces est_prev with the previous raw observation.
* GenieAided -- perfect foresight; returns the next slot's true interference.

Predictors hold only incremental caches over a growing history; engines that
replay multiple traces clone the configured predictor per run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import cho_solve

from gplink.channel import InterferenceTrace
from gplink.gp import RbfKernel, TrainingSet, _cholesky_with_jitter, kernel_matrix
from gplink.units import db_to_linear, linear_to_db

# Observation-noise floor relative to sigma_f^2. Keeps the window fit
# regularized; raw noise_eps^2 alone leaves the factorization chasing
# per-slot roughness.
NOISE_FLOOR_RATIO = 1e-3
CI_Z = 1.96
_TINY_POWER = 1e-30


@dataclass(frozen=True)
class PredictionRecord:
    """One slot's predicted interference with dB-domain 95% bounds."""

    slot: int
    predicted_linear: float
    predicted_db: float
    ci_low_db: float
    ci_high_db: float
    warmup: bool = False


def _default_kernel() -> RbfKernel:
    return RbfKernel(output_scale=0.5, length_scale=2.5)


class GenieAided:
    """Upper-bound benchmark: reads the next slot's interference exactly."""

    name = "genie"

    def clone(self) -> "GenieAided":
        return GenieAided()

    def predict_next(self, history, truth_next=None, rng=None) -> PredictionRecord:
        if truth_next is None:
            raise ValueError("GenieAided requires truth_next")
        db = linear_to_db(max(truth_next, _TINY_POWER))
        return PredictionRecord(
            slot=len(history),
            predicted_linear=truth_next,
            predicted_db=db,
            ci_low_db=db,
            ci_high_db=db,
        )


@dataclass
class MovingAverage:
    """First-order IIR interference filter with forgetting factor alpha."""

    name = "ma"

    alpha: float = 0.01
    use_filtered: bool = True  # False: weight the previous raw sample instead

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        self._consumed = 0
        self._estimate = math.nan

    def clone(self) -> "MovingAverage":
        return MovingAverage(alpha=self.alpha, use_filtered=self.use_filtered)

    def _advance(self, history: np.ndarray) -> None:
        n = len(history)
        if n < self._consumed:
            self._consumed = 0
        if self._consumed == 0:
            self._estimate = float(history[0])
            self._consumed = 1
        a = self.alpha
        est = self._estimate
        for x in history[self._consumed:]:
            est = a * est + (1.0 - a) * float(x)
        self._estimate = est
        self._consumed = n

    def predict_next(self, history, truth_next=None, rng=None) -> PredictionRecord:
        history = np.asarray(history, dtype=float)
        if len(history) < 2:
            raise ValueError("MovingAverage needs at least 2 observations")
        if self.use_filtered:
            self._advance(history)
            pred = self._estimate
        else:
            pred = self.alpha * float(history[-2]) + (1.0 - self.alpha) * float(history[-1])
        db = linear_to_db(max(pred, _TINY_POWER))
        return PredictionRecord(
            slot=len(history),
            predicted_linear=pred,
            predicted_db=db,
            ci_low_db=db,
            ci_high_db=db,
        )


class _WindowFit:
    """Cached GP solve for a fixed-length unit-spaced window.

    Weights and predictive deviations depend only on (kernel, noise, window,
    step), not on the window position, so they are computed once.
    """

    def __init__(self, kernel: RbfKernel, noise_variance: float, window: int, horizon: int):
        x = np.arange(window, dtype=float)
        sf2 = kernel.output_scale * kernel.output_scale
        k_train = kernel_matrix(kernel, x, x)
        k_train[np.diag_indices_from(k_train)] += noise_variance
        factor = _cholesky_with_jitter(k_train, sf2)
        queries = window - 1.0 + np.arange(1, horizon + 1, dtype=float)
        k_cross = kernel_matrix(kernel, queries, x)
        self.weights = cho_solve(factor, k_cross.T).T  # (horizon, window)
        var = sf2 - np.einsum("ij,ij->i", self.weights, k_cross)
        self.sigma = np.sqrt(np.maximum(var, 0.0))


@dataclass
class GprSlidingWindow:
    """GP regression over the last `window` dB observations."""

    name = "gpr"

    window: int = 75
    horizon: int = 5
    kernel: RbfKernel = field(default_factory=_default_kernel)
    tune: bool = False
    conservative: bool = False
    noise_eps: float = 1e-3
    noise_variance: float | None = None

    def __post_init__(self):
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        self._fit: _WindowFit | None = None
        self._fit_kernel: RbfKernel | None = None
        self._fallback = MovingAverage(alpha=0.5)
        self._db_cache = np.empty(0)
        self._db_consumed = 0

    def clone(self) -> "GprSlidingWindow":
        return replace(self)

    def effective_noise_variance(self, kernel: RbfKernel) -> float:
        if self.noise_variance is not None:
            return self.noise_variance
        sf2 = kernel.output_scale * kernel.output_scale
        return max(self.noise_eps * self.noise_eps, NOISE_FLOOR_RATIO * sf2)

    def _history_db(self, history: np.ndarray) -> np.ndarray:
        n = len(history)
        if n < self._db_consumed:
            self._db_consumed = 0
        if n > len(self._db_cache):
            grown = np.empty(max(2 * n, 256))
            grown[: self._db_consumed] = self._db_cache[: self._db_consumed]
            self._db_cache = grown
        new = np.maximum(history[self._db_consumed: n], _TINY_POWER)
        self._db_cache[self._db_consumed: n] = linear_to_db(new)
        self._db_consumed = n
        return self._db_cache[:n]

    def _window_fit(self, window_db: np.ndarray) -> _WindowFit:
        kernel = self.kernel
        if self.tune:
            if self._fit_kernel is None:
                from gplink.gp import tune_hyperparameters

                centered = window_db - window_db.mean()
                train = TrainingSet(
                    inputs=np.arange(len(window_db), dtype=float),
                    targets=centered,
                    noise_variance=self.effective_noise_variance(kernel),
                )
                self._fit_kernel = tune_hyperparameters(train)
            kernel = self._fit_kernel
        if self._fit is None or (self.tune and self._fit_kernel is not kernel):
            self._fit = _WindowFit(
                kernel, self.effective_noise_variance(kernel), self.window, self.horizon
            )
        return self._fit

    def predict_next(self, history, truth_next=None, rng=None) -> PredictionRecord:
        history = np.asarray(history, dtype=float)
        n = len(history)
        if n < self.window:
            if n < 2:
                raise ValueError("GprSlidingWindow needs at least 2 observations")
            record = self._fallback.predict_next(history)
            return replace(record, warmup=True)
        db = self._history_db(history)
        window_db = db[n - self.window: n]
        fit = self._window_fit(window_db)
        mu = window_db.mean()
        mean_db = mu + float(fit.weights[0] @ (window_db - mu))
        sigma = float(fit.sigma[0])
        ci_low = mean_db - CI_Z * sigma
        ci_high = mean_db + CI_Z * sigma
        pred_db = ci_high if self.conservative else mean_db
        if rng is not None and self.noise_eps > 0.0:
            pred_db += rng.normal(0.0, self.noise_eps)
            pred_db = min(max(pred_db, ci_low), ci_high)
        return PredictionRecord(
            slot=n,
            predicted_linear=db_to_linear(pred_db),
            predicted_db=pred_db,
            ci_low_db=ci_low,
            ci_high_db=ci_high,
        )


def _gpr_block_records(
    predictor: GprSlidingWindow, total: np.ndarray, train_len: int, rng
) -> list[PredictionRecord]:
    """Block-sliding replay: freeze the window, predict `horizon` slots, then
    absorb the observed block and slide forward."""
    records: list[PredictionRecord] = []
    n = len(total)
    start = train_len
    while start < n:
        k = min(predictor.horizon, n - start)
        history = total[:start]
        if start < predictor.window:
            for t in range(start, start + k):
                records.append(replace(predictor.predict_next(total[:t]), slot=t, warmup=True))
            start += k
            continue
        db = linear_to_db(np.maximum(history[start - predictor.window: start], _TINY_POWER))
        fit = predictor._window_fit(db)
        mu = db.mean()
        centered = db - mu
        for step in range(k):
            mean_db = mu + float(fit.weights[step] @ centered)
            sigma = float(fit.sigma[step])
            ci_low = mean_db - CI_Z * sigma
            ci_high = mean_db + CI_Z * sigma
            pred_db = ci_high if predictor.conservative else mean_db
            if rng is not None and predictor.noise_eps > 0.0:
                pred_db += rng.normal(0.0, predictor.noise_eps)
                pred_db = min(max(pred_db, ci_low), ci_high)
            records.append(
                PredictionRecord(
                    slot=start + step,
                    predicted_linear=db_to_linear(pred_db),
                    predicted_db=pred_db,
                    ci_low_db=ci_low,
                    ci_high_db=ci_high,
                )
            )
        start += k
    return records


def run_prediction_trace(predictor, trace: InterferenceTrace, train_len: int,
                         rng=None) -> list[PredictionRecord]:
    """Replay a trace: observe the first train_len slots, predict the rest.

    GPR predictors follow the block protocol (the window advances by `horizon`
    after each observed block); the moving average and the genie update every
    slot. Prediction at slot t sees only observations before t.
    """
    n = len(trace)
    if n <= train_len:
        raise ValueError(f"trace length {n} must exceed train_len {train_len}")
    if train_len < 2:
        raise ValueError("train_len must be >= 2 so predictors have a history")
    predictor = predictor.clone()
    total = trace.total
    if isinstance(predictor, GprSlidingWindow):
        return _gpr_block_records(predictor, total, train_len, rng)
    records = []
    for t in range(train_len, n):
        rec = predictor.predict_next(total[:t], truth_next=total[t], rng=rng)
        records.append(replace(rec, slot=int(trace.times[t])))
    return records


def write_predictions_csv(path, records: list[PredictionRecord],
                          trace: InterferenceTrace) -> None:
    """Export records: slot,true_db,pred_db,ci_low_db,ci_high_db,pred_linear."""
    index = {int(t): i for i, t in enumerate(trace.times)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("slot,true_db,pred_db,ci_low_db,ci_high_db,pred_linear\n")
        for rec in records:
            true_db = linear_to_db(max(trace.total[index[rec.slot]], _TINY_POWER))
            fh.write(
                f"{rec.slot},{true_db:.17g},{rec.predicted_db:.17g},"
                f"{rec.ci_low_db:.17g},{rec.ci_high_db:.17g},{rec.predicted_linear:.17g}\n"
            )
