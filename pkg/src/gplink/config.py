"""Scenario parameterization and the flat key=value config format.

Defaults reproduce the canonical indoor-downlink scenario: a 20 dB desired
link among six interferers at {5, 2, 0, -3, -10, 1} dB INR, per-slot fading
coherence 0.95, an RBF kernel with output scale 0.5 and length scale 2.5,
forgetting factor 0.01, 50-bit payloads and target error rates 1e-1..1e-5.

Config files are plain text: one `key = value` per line, `#` starts a
comment, lists are comma separated (surrounding brackets optional). Unknown
keys are rejected so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gplink.channel import LinkConfig
from gplink.gp import RbfKernel
from gplink.units import db_to_linear

DEFAULT_INRS_DB = (5.0, 2.0, 0.0, -3.0, -10.0, 1.0)
DEFAULT_TARGETS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full experiment parameterization with canonical defaults."""

    desired_snr_db: float = 20.0
    interferer_inrs_db: tuple[float, ...] = DEFAULT_INRS_DB
    coherence: float = 0.95
    kernel: RbfKernel = field(default_factory=lambda: RbfKernel(0.5, 2.5))
    noise_eps: float = 1e-3
    alpha: float = 0.01
    payload_bits: int = 50
    targets: tuple[float, ...] = DEFAULT_TARGETS
    window: int = 75
    horizon: int = 5
    n_slots: int = 100_000
    master_seed: int = 20_250
    desired_fading: bool = True

    def __post_init__(self):
        object.__setattr__(self, "interferer_inrs_db", tuple(float(x) for x in self.interferer_inrs_db))
        object.__setattr__(self, "targets", tuple(float(x) for x in self.targets))
        if not math.isfinite(self.desired_snr_db):
            raise ValueError("desired_snr_db must be finite")
        if not self.interferer_inrs_db:
            raise ValueError("interferer_inrs_db must be a nonempty list")
        if not all(math.isfinite(x) for x in self.interferer_inrs_db):
            raise ValueError("interferer_inrs_db entries must be finite")
        if not 0.0 <= self.coherence < 1.0:
            raise ValueError(f"coherence must lie in [0, 1), got {self.coherence}")
        if not self.noise_eps >= 0.0:
            raise ValueError("noise_eps must be nonnegative")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.payload_bits) != self.payload_bits or self.payload_bits < 1:
            raise ValueError("payload_bits must be an integer >= 1")
        if not self.targets:
            raise ValueError("targets must be a nonempty list")
        if not all(0.0 < t < 0.5 for t in self.targets):
            raise ValueError("targets must lie in (0, 0.5)")
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.n_slots < 1:
            raise ValueError("n_slots must be >= 1")

    def desired_link(self) -> LinkConfig:
        return LinkConfig(
            mean_power=db_to_linear(self.desired_snr_db), coherence=self.coherence
        )

    def interferer_links(self) -> list[LinkConfig]:
        return [
            LinkConfig(mean_power=db_to_linear(x), coherence=self.coherence)
            for x in self.interferer_inrs_db
        ]

    def to_dict(self) -> dict:
        return {
            "desired_snr_db": self.desired_snr_db,
            "interferer_inrs_db": list(self.interferer_inrs_db),
            "coherence": self.coherence,
            "output_scale": self.kernel.output_scale,
            "length_scale": self.kernel.length_scale,
            "noise_eps": self.noise_eps,
            "alpha": self.alpha,
            "payload_bits": self.payload_bits,
            "targets": list(self.targets),
            "window": self.window,
            "horizon": self.horizon,
            "n_slots": self.n_slots,
            "master_seed": self.master_seed,
            "desired_fading": self.desired_fading,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        kernel = RbfKernel(
            output_scale=float(data.pop("output_scale", 0.5)),
            length_scale=float(data.pop("length_scale", 2.5)),
        )
        return cls(kernel=kernel, **data)


_SCALARS = {
    "desired_snr_db": float,
    "coherence": float,
    "output_scale": float,
    "length_scale": float,
    "noise_eps": float,
    "alpha": float,
    "payload_bits": int,
    "window": int,
    "horizon": int,
    "n_slots": int,
    "master_seed": int,
}
_LISTS = {"interferer_inrs_db", "targets"}
_BOOLS = {"desired_fading"}


class ConfigError(ValueError):
    """Config file could not be parsed or violates a field constraint."""


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_list(text: str) -> tuple[float, ...]:
    inner = text.strip()
    if inner.startswith("[") and inner.endswith("]"):
        inner = inner[1:-1]
    items = [x.strip() for x in inner.split(",") if x.strip()]
    return tuple(float(x) for x in items)


def load_config(path) -> ScenarioConfig:
    """Read a key=value file; unspecified keys keep their defaults."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            text = text.strip()
            try:
                if key in _SCALARS:
                    values[key] = _SCALARS[key](text)
                elif key in _LISTS:
                    values[key] = _parse_list(text)
                elif key in _BOOLS:
                    values[key] = _parse_bool(text)
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    try:
        return ScenarioConfig.from_dict(values)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
