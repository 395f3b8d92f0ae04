"""Exact Gaussian-process regression with an RBF kernel.

Posterior mean/covariance follow the standard conditioning identities

    mean = K(Xq, X) [K(X, X) + sn2 I]^-1 y
    cov  = K(Xq, Xq) - K(Xq, X) [K(X, X) + sn2 I]^-1 K(X, Xq)

computed through a Cholesky factorization (never an explicit inverse). A
jitter of 1e-10 * sigma_f^2 is added to every factorized diagonal, escalating
tenfold up to 1e-6 * sigma_f^2 before FactorizationError is raised. Predictive
variance is function-space (observation noise enters the training diagonal
only); 95% bounds are mean -/+ 1.96 sqrt(var).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

JITTER_START = 1e-10
JITTER_CEIL = 1e-6
CI_Z = 1.96
VARIANCE_CLAMP = -1e-10


class FactorizationError(RuntimeError):
    """Kernel matrix stayed non-positive-definite after jitter escalation."""


@dataclass(frozen=True)
class RbfKernel:
    """Squared-exponential covariance: k(a, b) = sigma_f^2 exp(-(a-b)^2 / (2 l^2))."""

    output_scale: float
    length_scale: float

    def __post_init__(self):
        if not self.output_scale > 0.0:
            raise ValueError(f"output_scale must be positive, got {self.output_scale}")
        if not self.length_scale > 0.0:
            raise ValueError(f"length_scale must be positive, got {self.length_scale}")


@dataclass(frozen=True)
class TrainingSet:
    """Observed targets at strictly increasing time indices, plus noise variance."""

    inputs: np.ndarray
    targets: np.ndarray
    noise_variance: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "inputs", np.asarray(self.inputs, dtype=float))
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=float))
        if self.inputs.ndim != 1 or self.targets.ndim != 1:
            raise ValueError("inputs and targets must be 1-D")
        if len(self.inputs) == 0:
            raise ValueError("training set must be nonempty")
        if len(self.inputs) != len(self.targets):
            raise ValueError("inputs and targets must have equal length")
        if not np.all(np.diff(self.inputs) > 0.0):
            raise ValueError("inputs must be strictly increasing")
        if not self.noise_variance >= 0.0:
            raise ValueError("noise_variance must be nonnegative")

    def __len__(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class PosteriorPrediction:
    """Predictive mean, variance and 95% bounds at the query indices."""

    query_inputs: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    lower95: np.ndarray
    upper95: np.ndarray
    full_covariance: np.ndarray | None = None


def kernel_matrix(kernel: RbfKernel, a, b) -> np.ndarray:
    """Covariance matrix between two lists of time indices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("kernel_matrix requires nonempty input lists")
    d = a[:, None] - b[None, :]
    sf2 = kernel.output_scale * kernel.output_scale
    ell2 = kernel.length_scale * kernel.length_scale
    return sf2 * np.exp(-(d * d) / (2.0 * ell2))


def _cholesky_with_jitter(mat: np.ndarray, scale: float):
    """Lower Cholesky of mat, adding jitter*I only if the plain factorization
    fails; jitter escalates tenfold from JITTER_START*scale and gives up past
    JITTER_CEIL*scale."""
    try:
        return cho_factor(mat, lower=True)
    except np.linalg.LinAlgError:
        pass
    jitter = JITTER_START * scale
    ceil = JITTER_CEIL * scale
    eye = np.eye(mat.shape[0])
    while jitter <= ceil * (1.0 + 1e-12):
        try:
            return cho_factor(mat + jitter * eye, lower=True)
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise FactorizationError(
        f"kernel matrix not positive definite with jitter up to {ceil:g}"
    )


class GpModel:
    """Kernel plus training window with a cached factorization.

    Immutable after construction; safe to share across threads for reads.
    """

    def __init__(self, kernel: RbfKernel, train: TrainingSet):
        self.kernel = kernel
        self.train = train
        sf2 = kernel.output_scale * kernel.output_scale
        k_train = kernel_matrix(kernel, train.inputs, train.inputs)
        k_train[np.diag_indices_from(k_train)] += train.noise_variance
        self._factor = _cholesky_with_jitter(k_train, sf2)
        self._alpha = cho_solve(self._factor, train.targets)

    def predict(self, query, full_covariance: bool = False) -> PosteriorPrediction:
        query = np.asarray(query, dtype=float)
        if query.size == 0:
            raise ValueError("query must be nonempty")
        k_cross = kernel_matrix(self.kernel, query, self.train.inputs)
        mean = k_cross @ self._alpha
        v = solve_triangular(self._factor[0], k_cross.T, lower=True)
        sf2 = self.kernel.output_scale * self.kernel.output_scale
        cov = None
        if full_covariance:
            cov = kernel_matrix(self.kernel, query, query) - v.T @ v
            variance = np.diag(cov).copy()
        else:
            variance = sf2 - np.einsum("ij,ij->j", v, v)
        floor = -JITTER_CEIL * sf2
        if np.any(variance < floor):
            raise FactorizationError(
                f"posterior variance fell below {floor:g} "
                f"(min {variance.min():g}); factorization is unreliable"
            )
        variance = np.maximum(variance, 0.0)
        half = CI_Z * np.sqrt(variance)
        return PosteriorPrediction(
            query_inputs=query,
            mean=mean,
            variance=variance,
            lower95=mean - half,
            upper95=mean + half,
            full_covariance=cov,
        )

    def log_marginal_likelihood(self) -> float:
        y = self.train.targets
        n = len(y)
        log_det_half = float(np.sum(np.log(np.diag(self._factor[0]))))
        return float(-0.5 * y @ self._alpha - log_det_half - 0.5 * n * math.log(2.0 * math.pi))


def posterior(kernel: RbfKernel, train: TrainingSet, query,
              full_covariance: bool = False) -> PosteriorPrediction:
    """Noise-aware posterior at the query indices (zero prior mean)."""
    return GpModel(kernel, train).predict(query, full_covariance=full_covariance)


def sample_prior(kernel: RbfKernel, inputs, n_paths: int, seed) -> np.ndarray:
    """Draw n_paths zero-mean prior sample paths at the given indices."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    inputs = np.asarray(inputs, dtype=float)
    sf2 = kernel.output_scale * kernel.output_scale
    k = kernel_matrix(kernel, inputs, inputs)
    factor = _cholesky_with_jitter(k, sf2)
    lower = np.tril(factor[0])
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal((n_paths, len(inputs)))
    return z @ lower.T


def log_marginal_likelihood(kernel: RbfKernel, train: TrainingSet) -> float:
    """log p(targets | inputs, kernel) for the Gaussian observation model."""
    return GpModel(kernel, train).log_marginal_likelihood()


@dataclass(frozen=True)
class HyperGrid:
    """Candidate output scales and length scales for likelihood search."""

    output_scales: np.ndarray = field(
        default_factory=lambda: np.geomspace(0.05, 5.0, 20)
    )
    length_scales: np.ndarray = field(
        default_factory=lambda: np.geomspace(0.25, 25.0, 20)
    )

    def __post_init__(self):
        object.__setattr__(self, "output_scales", np.asarray(self.output_scales, dtype=float))
        object.__setattr__(self, "length_scales", np.asarray(self.length_scales, dtype=float))
        if self.output_scales.size == 0 or self.length_scales.size == 0:
            raise ValueError("grid ranges must be nonempty")


def tune_hyperparameters(train: TrainingSet, grid: HyperGrid | None = None) -> RbfKernel:
    """Grid-maximize the log marginal likelihood; ties go to the larger length scale."""
    if grid is None:
        grid = HyperGrid()
    best_kernel = None
    best_score = -math.inf
    for ell in grid.length_scales:  # ascending ell so later ties win below
        for sf in grid.output_scales:
            kernel = RbfKernel(output_scale=float(sf), length_scale=float(ell))
            try:
                score = log_marginal_likelihood(kernel, train)
            except FactorizationError:
                continue
            if score > best_score or (score == best_score and best_kernel is not None
                                      and ell > best_kernel.length_scale):
                best_score = score
                best_kernel = kernel
    if best_kernel is None:
        raise FactorizationError("no grid point admitted a positive-definite factorization")
    return best_kernel
