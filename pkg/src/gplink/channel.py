"""Correlated Rayleigh fading links and the aggregate interference they cause.

Every link is a stationary circularly-symmetric complex Gaussian process h(t)
with unit variance, so the power gain |h(t)|^2 is exactly exponential(1) at
every slot (Rayleigh fading, unit mean). Temporal coherence follows a
squared-exponential law on the complex amplitude,

    E[h(t) conj(h(t+k))] = rho^(k^2),

where rho is the per-slot coherence. Lag-1 correlation equals rho; rho = 0
degenerates to i.i.d. gains per slot (memoryless block fading). Sampling uses
circulant embedding (exact for this covariance), so a million-slot trace costs
a couple of FFTs.

Interference from N links is summed per slot with independent fading across
links; SINR is formed against a unit noise floor (N0 = 1), so configured
SNR/INR values in dB convert directly to linear mean powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gplink.units import db_to_linear


@dataclass(frozen=True)
class LinkConfig:
    """Mean received power (linear, relative to noise) and per-slot coherence."""

    mean_power: float
    coherence: float = 0.0

    def __post_init__(self):
        if not self.mean_power >= 0.0 or not math.isfinite(self.mean_power):
            raise ValueError(f"mean_power must be finite and >= 0, got {self.mean_power}")
        if not 0.0 <= self.coherence < 1.0:
            raise ValueError(f"coherence must lie in [0, 1), got {self.coherence}")

    @classmethod
    def from_db(cls, mean_power_db: float, coherence: float = 0.0) -> "LinkConfig":
        return cls(mean_power=db_to_linear(mean_power_db), coherence=coherence)


@dataclass(frozen=True)
class ChannelRealization:
    """Squared channel magnitudes |h(t)|^2, one per slot, unit mean."""

    gains: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gains", np.asarray(self.gains, dtype=float))
        if self.gains.ndim != 1:
            raise ValueError("gains must be a 1-D sequence")
        if np.any(self.gains < 0.0):
            raise ValueError("gains must be nonnegative")


@dataclass(frozen=True)
class InterferenceTrace:
    """Aggregate interference per slot plus its per-interferer decomposition."""

    times: np.ndarray
    total: np.ndarray
    per_interferer: np.ndarray  # shape (n_interferers, n_slots)

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=int))
        object.__setattr__(self, "total", np.asarray(self.total, dtype=float))
        object.__setattr__(self, "per_interferer", np.asarray(self.per_interferer, dtype=float))
        if self.per_interferer.ndim != 2:
            raise ValueError("per_interferer must be 2-D (interferer x slot)")
        n = len(self.times)
        if self.total.shape != (n,) or self.per_interferer.shape[1] != n:
            raise ValueError("times, total and per_interferer lengths disagree")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class SinrSample:
    """One slot's desired power, interference and resulting SINR (all linear)."""

    desired_power: float
    interference: float
    sinr: float


def _complex_gaussian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / math.sqrt(2.0)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sample_amplitudes(coherence: float, n_steps: int, rng: np.random.Generator) -> np.ndarray:
    """Stationary CN(0,1) sequence with E[h(t) conj(h(t+k))] = coherence^(k^2).

    Exact sampling by circulant embedding: the covariance sequence is wrapped
    onto a ring of length m >= 2(n + support), its FFT gives the (nonnegative)
    circulant eigenvalues, and filtered white noise realizes the process.
    """
    if coherence == 0.0:
        return _complex_gaussian(n_steps, rng)
    log_inv_rho = -math.log(coherence)
    # lags beyond this contribute < 1e-300 to the covariance
    support = int(math.ceil(math.sqrt(700.0 / log_inv_rho))) + 1
    m = 1
    while m < 2 * (n_steps + support):
        m *= 2
    lag = np.arange(m, dtype=float)
    lag = np.minimum(lag, m - lag)
    acf = np.exp(-log_inv_rho * lag * lag)
    spectrum = np.fft.fft(acf).real
    # wrap-around truncation can leave eigenvalues a hair negative
    spectrum = np.maximum(spectrum, 0.0)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return np.fft.fft(z * np.sqrt(spectrum / (2.0 * m)))[:n_steps]


def generate_rayleigh_gains(cfg: LinkConfig, n_steps: int, seed) -> ChannelRealization:
    """Draw |h(t)|^2 for one link over n_steps slots.

    Amplitude marginals are CN(0, 1), so gains are exponential(1) with unit
    mean at any coherence. Identical seeds give identical traces.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    h = _sample_amplitudes(cfg.coherence, n_steps, _as_rng(seed))
    return ChannelRealization(gains=np.abs(h) ** 2)


def build_interference_trace(
    interferers: list[LinkConfig], n_steps: int, seed
) -> InterferenceTrace:
    """Aggregate interference from independently fading links.

    per_interferer[i, t] = mean_power_i * |h_i(t)|^2; total is the columnwise
    sum. Each interferer consumes its own child stream of the seed, so traces
    are reproducible and fading is independent across links.
    """
    if not interferers:
        raise ValueError("at least one interferer is required")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = seq.spawn(len(interferers))
    rows = []
    for cfg, child in zip(interferers, children):
        gains = generate_rayleigh_gains(cfg, n_steps, np.random.default_rng(child))
        rows.append(cfg.mean_power * gains.gains)
    per = np.vstack(rows)
    return InterferenceTrace(times=np.arange(n_steps), total=per.sum(axis=0), per_interferer=per)


def compute_sinr(desired: LinkConfig, desired_gain: float, interference: float) -> SinrSample:
    """SINR against the unit noise floor: P_d * gain / (I + 1)."""
    if desired_gain < 0.0:
        raise ValueError("desired_gain must be nonnegative")
    if interference < 0.0:
        raise ValueError("interference must be nonnegative")
    power = desired.mean_power * desired_gain
    return SinrSample(
        desired_power=power,
        interference=interference,
        sinr=power / (interference + 1.0),
    )


def write_trace_csv(path, trace: InterferenceTrace, desired_gains: np.ndarray) -> None:
    """Export a trace: header t,total,i1..iN,desired_gain; >= 12 significant digits."""
    desired_gains = np.asarray(desired_gains, dtype=float)
    if desired_gains.shape != trace.total.shape:
        raise ValueError("desired_gains length must match the trace")
    n_int = trace.per_interferer.shape[0]
    header = ["t", "total"] + [f"i{i + 1}" for i in range(n_int)] + ["desired_gain"]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for t in range(len(trace)):
            cells = [str(int(trace.times[t])), f"{trace.total[t]:.17g}"]
            cells += [f"{x:.17g}" for x in trace.per_interferer[:, t]]
            cells.append(f"{desired_gains[t]:.17g}")
            fh.write(",".join(cells) + "\n")
