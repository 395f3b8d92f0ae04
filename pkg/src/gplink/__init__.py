"""gplink: interference forecasting and finite-blocklength link adaptation.

A link-level simulator for a quasi-static indoor downlink with co-channel
interferers. Correlated Rayleigh fading feeds three one-step interference
predictors (Gaussian-process regression on a sliding window, a first-order
IIR moving average, and a perfect-foresight genie). Predicted interference
drives proactive channel-use allocation under the finite-blocklength normal
approximation, and the harness compares achieved against target outage.
"""

__version__ = "0.1.0"

from gplink.blocklength import (
    Allocation,
    CodingSpec,
    UnallocatableSlotError,
    achieved_error,
    capacity,
    dispersion,
    q_function,
    q_inverse,
    required_channel_uses,
)
from gplink.channel import (
    ChannelRealization,
    InterferenceTrace,
    LinkConfig,
    SinrSample,
    build_interference_trace,
    compute_sinr,
    generate_rayleigh_gains,
)
from gplink.config import ScenarioConfig, load_config
from gplink.gp import (
    FactorizationError,
    GpModel,
    HyperGrid,
    PosteriorPrediction,
    RbfKernel,
    TrainingSet,
    kernel_matrix,
    log_marginal_likelihood,
    posterior,
    sample_prior,
    tune_hyperparameters,
)
from gplink.predictors import (
    GenieAided,
    GprSlidingWindow,
    MovingAverage,
    PredictionRecord,
    run_prediction_trace,
)
from gplink.allocation import (
    EpisodeResult,
    SlotOutcome,
    SweepRow,
    run_episode,
    sweep_targets,
)
from gplink.harness import (
    RunManifest,
    experiment_outage_sweep,
    experiment_prediction_trace,
    experiment_tune_kernel,
    replay_manifest,
    substream,
)

__all__ = [
    "Allocation",
    "ChannelRealization",
    "CodingSpec",
    "EpisodeResult",
    "FactorizationError",
    "GenieAided",
    "GprSlidingWindow",
    "HyperGrid",
    "InterferenceTrace",
    "LinkConfig",
    "MovingAverage",
    "PosteriorPrediction",
    "PredictionRecord",
    "RbfKernel",
    "ScenarioConfig",
    "SinrSample",
    "SlotOutcome",
    "SweepRow",
    "RunManifest",
    "GpModel",
    "UnallocatableSlotError",
    "TrainingSet",
    "achieved_error",
    "build_interference_trace",
    "capacity",
    "compute_sinr",
    "dispersion",
    "generate_rayleigh_gains",
    "kernel_matrix",
    "load_config",
    "log_marginal_likelihood",
    "posterior",
    "q_function",
    "q_inverse",
    "required_channel_uses",
    "run_episode",
    "run_prediction_trace",
    "sample_prior",
    "sweep_targets",
    "tune_hyperparameters",
    "experiment_outage_sweep",
    "experiment_prediction_trace",
    "experiment_tune_kernel",
    "replay_manifest",
    "substream",
]
