"""Seeded BSC and BPSK-AWGN channels producing LLR frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

CHANNEL_KINDS = ("bsc", "awgn")


@dataclass(frozen=True)
class ChannelSpec:
    """``param`` is the crossover probability (BSC) or Eb/N0 in dB (AWGN)."""

    kind: str
    param: float
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ParameterError(f"channel kind must be one of {CHANNEL_KINDS}, got {self.kind!r}")
        if not 0.0 < self.rate <= 1.0:
            raise ParameterError(f"code rate must be in (0, 1], got {self.rate}")
        if self.kind == "bsc" and not 0.0 < self.param < 0.5:
            raise ParameterError(f"BSC crossover must be in (0, 0.5), got {self.param}")
        if self.kind == "awgn" and not math.isfinite(self.param):
            raise ParameterError(f"Eb/N0 must be finite, got {self.param}")

    @property
    def noise_variance(self) -> float:
        """Per-dimension noise variance for unit-energy BPSK, energy per information bit."""
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.param / 10.0))


def frame_rng(seed: int, frame: int) -> np.random.Generator:
    """Generator for one frame; independent of how frames are split across workers.

    Frame streams are spawned children of the base seed.  A plain
    ``seed ^ frame`` would make different base seeds share frame streams.
    """
    if seed < 0 or frame < 0:
        raise ParameterError("seed and frame index must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(frame,)))


def transmit(x, spec: ChannelSpec, rng: np.random.Generator) -> np.ndarray:
    """Send codeword bits ``x`` through the channel and return their LLRs."""
    x = np.asarray(x, dtype=np.uint8)
    if spec.kind == "bsc":
        p = spec.param
        y = x ^ (rng.random(x.shape) < p)
        return (1.0 - 2.0 * y) * math.log((1.0 - p) / p)
    sigma2 = spec.noise_variance
    y = (1.0 - 2.0 * x) + rng.standard_normal(x.shape) * math.sqrt(sigma2)
    return 2.0 * y / sigma2


def count_errors(u_hat, u, frozen) -> tuple[int, int]:
    """Bit errors on information positions and whether the frame failed."""
    u_hat = np.asarray(u_hat)
    u = np.asarray(u)
    if u_hat.shape != u.shape:
        raise ParameterError(f"length mismatch: {u_hat.shape} vs {u.shape}")
    info = np.ones(u.shape[-1], dtype=bool)
    info[list(frozen)] = False
    errors = int(np.count_nonzero(u_hat[..., info] != u[..., info]))
    return errors, int(errors > 0)
