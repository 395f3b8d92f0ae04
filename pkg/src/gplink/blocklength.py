"""Finite-blocklength normal-approximation numerics.

For a complex AWGN channel at SINR delta, the normal approximation of the
maximal number of bits D decodable in R channel uses at block error
probability eps is

    D ~= R*C(delta) - Qinv(eps) * sqrt(R * V(delta)),

with capacity C(delta) = log2(1 + delta) and dispersion
V(delta) = (1 - (1 + delta)^-2) * log2(e)^2
(Polyanskiy, Poor, Verdu, "Channel coding rate in the finite blocklength
regime", IEEE Trans. Inf. Theory 2010). This module provides the Q-function
pair, capacity/dispersion, the channel-use solver for a bit budget, and the
error evaluator at a realized SINR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
LOG2E = math.log2(math.e)

# Acklam's rational approximation to the inverse standard-normal CDF
# (relative error < 1.15e-9 before refinement).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


class UnallocatableSlotError(ValueError):
    """Raised when no finite number of channel uses can meet the target."""


@dataclass(frozen=True)
class CodingSpec:
    """Bit budget per slot and target block error probability."""

    payload_bits: int
    target_error: float

    def __post_init__(self):
        if int(self.payload_bits) != self.payload_bits or self.payload_bits < 1:
            raise ValueError(f"payload_bits must be an integer >= 1, got {self.payload_bits}")
        if not 0.0 < self.target_error <= 0.5:
            raise ValueError(
                f"target_error must lie in (0, 0.5], got {self.target_error}"
            )


@dataclass(frozen=True)
class Allocation:
    """Channel uses granted for one slot at a given predicted SINR."""

    channel_uses: int
    predicted_sinr: float

    def __post_init__(self):
        if self.channel_uses < 1:
            raise ValueError("channel_uses must be >= 1")
        if not self.predicted_sinr > 0.0:
            raise ValueError("predicted_sinr must be positive")


def q_function(x: float) -> float:
    """Standard-normal tail probability Q(x) = P(N(0,1) > x) = erfc(x/sqrt2)/2."""
    return 0.5 * math.erfc(x / _SQRT2)


def _phi(x: float) -> float:
    """Standard-normal density."""
    return math.exp(-0.5 * x * x) / _SQRT2PI


def _ppf_acklam(p: float) -> float:
    """Inverse standard-normal CDF, rational approximation (no refinement)."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
                / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    q = math.sqrt(-2.0 * math.log(1.0 - p))
    return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))


def q_inverse(p: float) -> float:
    """Inverse of q_function on (0, 1).

    Rational inverse-normal approximation refined by one Newton step on the
    small-tail side (where Q is evaluated with full relative accuracy), so the
    result is accurate to machine precision.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"q_inverse requires p in (0, 1), got {p}")
    if p > 0.5:
        # 1 - p is exact for p in [0.5, 1) (Sterbenz), refine on the small tail
        return -q_inverse(1.0 - p)
    x = -_ppf_acklam(p)  # Q^-1(p) = -Phi^-1(p)
    # Newton: Q'(x) = -phi(x)
    x += (q_function(x) - p) / _phi(x)
    return x


def capacity(delta: float) -> float:
    """Shannon capacity log2(1 + delta) in bits per channel use."""
    if delta < 0.0:
        raise ValueError("SINR must be nonnegative")
    return math.log1p(delta) / math.log(2.0)


def dispersion(delta: float) -> float:
    """AWGN channel dispersion V(delta) = (1 - (1+delta)^-2) * log2(e)^2.

    Evaluated as delta*(2+delta)/(1+delta)^2 * log2(e)^2 to avoid cancellation
    for small delta.
    """
    if delta < 0.0:
        raise ValueError("SINR must be nonnegative")
    one = 1.0 + delta
    return delta * (2.0 + delta) / (one * one) * (LOG2E * LOG2E)


def achieved_error(spec: CodingSpec, r: int, delta: float) -> float:
    """Block error probability Q((r*C(delta) - D) / sqrt(r*V(delta))).

    Degenerate dispersion (delta = 0) resolves by the sign of r*C - D:
    error 1 when the bit budget exceeds r*C, error 0 when it is below.
    """
    if r < 1:
        raise ValueError("channel uses must be >= 1")
    c = capacity(delta)
    v = dispersion(delta)
    excess = r * c - spec.payload_bits
    if v == 0.0:
        if excess > 0.0:
            return 0.0
        if excess < 0.0:
            return 1.0
        return 0.5
    return q_function(excess / math.sqrt(r * v))


def _channel_uses_real(spec: CodingSpec, delta_p: float, q_inv: float) -> float:
    """Closed-form (real-valued) channel-use estimate for the bit budget."""
    c = capacity(delta_p)
    if q_inv == 0.0:
        return spec.payload_bits / c
    v = dispersion(delta_p)
    t = q_inv * q_inv * v
    # grouped to avoid underflow of c*c at tiny SINR
    return (spec.payload_bits / c
            + (t / (2.0 * c)) / c * (1.0 + math.sqrt(1.0 + 4.0 * spec.payload_bits * c / t)))


def _min_satisfying(spec: CodingSpec, delta: float, lo: int, hi: int) -> int:
    """Bisect for the smallest r in [lo, hi] meeting the target.

    Requires achieved_error(spec, hi, delta) <= target; relies on
    achieved_error being non-increasing in r.
    """
    target = spec.target_error
    while lo < hi:
        mid = (lo + hi) // 2
        if achieved_error(spec, mid, delta) <= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def required_channel_uses(spec: CodingSpec, delta_p: float) -> Allocation:
    """Smallest integer R with achieved_error(spec, R, delta_p) <= target.

    Evaluates the closed-form estimate, rounds up, then corrects locally
    (the normal-approximation estimate is almost always within one step).
    Bisection backs up the local search so minimality holds even at
    degenerate SINRs where a unit step barely moves r*C(delta).
    """
    if not delta_p > 0.0 or not math.isfinite(delta_p):
        raise UnallocatableSlotError(
            f"no finite channel-use count meets the target at SINR {delta_p}"
        )
    target = spec.target_error
    r_real = _channel_uses_real(spec, delta_p, q_inverse(target))
    if not math.isfinite(r_real):
        raise UnallocatableSlotError(
            f"channel-use estimate overflowed at SINR {delta_p}"
        )
    r = max(1, math.ceil(r_real))
    if achieved_error(spec, r, delta_p) <= target:
        while r > 1 and achieved_error(spec, r - 1, delta_p) <= target:
            r -= 1
            if r <= r_real - 3:
                r = _min_satisfying(spec, delta_p, 1, r)
                break
    else:
        base = r
        while achieved_error(spec, r + 1, delta_p) > target:
            r += 1
            if r >= base + 3:
                hi = 2 * r
                while achieved_error(spec, hi, delta_p) > target:
                    hi *= 2
                    if hi > 2**1024:
                        raise UnallocatableSlotError(
                            f"no representable channel-use count meets the "
                            f"target at SINR {delta_p}"
                        )
                r = _min_satisfying(spec, delta_p, r + 1, hi) - 1
                break
        r += 1
    return Allocation(channel_uses=r, predicted_sinr=delta_p)
