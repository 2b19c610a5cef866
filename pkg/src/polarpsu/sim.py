"""Monte-Carlo BER/FER sweeps: encode, transmit, decode, count."""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .channel import ChannelSpec, frame_rng, transmit
from .core import CodeParams, encode
from .decoder import decode
from .errors import ParameterError
from .psu import PSU_MODELS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CSV_FIELDS = ("param", "frames", "bit_errors", "frame_errors", "ber", "fer", "seconds")
DEFAULT_TARGET_ERRORS = 100
CHUNK = 200


@dataclass
class SimConfig:
    n: int
    k: int
    channel: str = "awgn"
    params: list = field(default_factory=lambda: [1.0, 2.0, 3.0])
    frames: int | None = None
    target_errors: int | None = None
    max_frames: int = 100_000
    seed: int = 0
    psu: str = "shift"
    workers: int = 1
    design_erasure: float = 0.5
    output: str | None = None

    def __post_init__(self):
        if self.frames is not None and self.target_errors is not None:
            raise ParameterError("set at most one of frames / target_errors")
        if self.frames is None and self.target_errors is None:
            self.target_errors = DEFAULT_TARGET_ERRORS
        if self.frames is not None and self.frames < 1:
            raise ParameterError(f"frames must be >= 1, got {self.frames}")
        if self.target_errors is not None and (self.target_errors < 1 or self.max_frames < 1):
            raise ParameterError("target_errors and max_frames must be >= 1")
        if not 1 <= self.k <= (1 << self.n):
            raise ParameterError(f"k must be in [1, {1 << self.n}], got {self.k}")
        if self.psu not in PSU_MODELS:
            raise ParameterError(f"unknown PSU model {self.psu!r}")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")
        self.params = [float(p) for p in self.params]
        for p in self.params:
            ChannelSpec(self.channel, p, self.k / (1 << self.n))

    @classmethod
    def from_file(cls, path, defaults=None, **overrides) -> "SimConfig":
        """Load a flat ``key = value`` TOML file.

        Precedence: non-None ``overrides``, then the file, then ``defaults``.
        """
        with open(path, "rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ParameterError(f"{path}: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        data = {**(defaults or {}), **data}
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "frames" in overrides and overrides["frames"] is not None:
            data.pop("target_errors", None)
        if "target_errors" in overrides and overrides["target_errors"] is not None:
            data.pop("frames", None)
        return cls(**data)


@dataclass
class PointResult:
    param: float
    frames: int
    bit_errors: int
    frame_errors: int
    seconds: float
    k: int

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.k)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    def row(self, timing: bool = True) -> dict:
        return {
            "param": self.param,
            "frames": self.frames,
            "bit_errors": self.bit_errors,
            "frame_errors": self.frame_errors,
            "ber": self.ber,
            "fer": self.fer,
            "seconds": round(self.seconds, 6) if timing else 0.0,
        }


@dataclass
class SimResult:
    config: SimConfig
    points: list

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for p in self.points:
            writer.writerow(p.row(timing))
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> str:
        return json.dumps([p.row(timing) for p in self.points], indent=2) + "\n"


def make_frames(params: CodeParams, spec: ChannelSpec, seed: int, frame_ids):
    """Random decisions (zeros on frozen positions) and their channel LLRs."""
    frame_ids = list(frame_ids)
    info = params.info_positions
    u = np.zeros((len(frame_ids), params.N), dtype=np.uint8)
    llrs = np.empty((len(frame_ids), params.N))
    for r, fid in enumerate(frame_ids):
        rng = frame_rng(seed, fid)
        u[r, info] = rng.integers(0, 2, size=info.size, dtype=np.uint8)
        llrs[r] = transmit(encode(u[r], params), spec, rng)
    return u, llrs


def simulate_frames(params: CodeParams, spec: ChannelSpec, psu: str, seed: int, frame_ids):
    """Run the listed frames; return per-frame bit-error and frame-error arrays."""
    u, llrs = make_frames(params, spec, seed, frame_ids)
    info = params.info_positions
    result = decode(llrs, params, psu)
    bit_errors = np.count_nonzero(result.u_hat[:, info] != u[:, info], axis=1)
    return bit_errors, (bit_errors > 0).astype(np.int64)


def _decode_job(args):
    llrs, n, frozen, psu = args
    return decode(llrs, CodeParams(n, frozen), psu).u_hat


def decode_parallel(llrs, params: CodeParams, psu: str = "shift", workers: int = 1) -> np.ndarray:
    """Decode a stack of frames split over ``workers`` processes; returns ``u_hat``."""
    llrs = np.asarray(llrs, dtype=float)
    parts = np.array_split(llrs, max(1, min(workers, len(llrs))))
    jobs = [(part, params.n, params.frozen, psu) for part in parts if len(part)]
    if workers == 1:
        return np.concatenate([_decode_job(job) for job in jobs])
    with ProcessPoolExecutor(workers) as pool:
        return np.concatenate(list(pool.map(_decode_job, jobs)))


def _chunk_job(args):
    n, frozen, kind, param, rate, psu, seed, start, stop = args
    params = CodeParams(n, frozen)
    be, fe = simulate_frames(params, ChannelSpec(kind, param, rate), psu, seed, range(start, stop))
    return int(be.sum()), int(fe.sum())


def run_simulation(config: SimConfig) -> SimResult:
    """Sweep every channel parameter in the config.

    Frame ``k`` always draws from ``seed ^ k``, and frames are grouped in
    fixed-size chunks, so results do not depend on the worker count.
    """
    params = CodeParams.from_nk(config.n, config.k, config.design_erasure)
    rate = config.k / params.N
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        points = []
        for value in config.params:
            started = time.perf_counter()
            limit = config.frames if config.frames is not None else config.max_frames
            frames = bit_errors = frame_errors = 0
            while frames < limit:
                # one round = one chunk per worker, consumed in frame order
                jobs = []
                start = frames
                for _ in range(config.workers):
                    if start >= limit:
                        break
                    stop = min(start + CHUNK, limit)
                    jobs.append((config.n, params.frozen, config.channel, value, rate, config.psu, config.seed, start, stop))
                    start = stop
                outcomes = pool.map(_chunk_job, jobs) if pool else map(_chunk_job, jobs)
                for job, (be, fe) in zip(jobs, outcomes):
                    if config.target_errors is not None and frame_errors >= config.target_errors:
                        break
                    frames = job[-1]
                    bit_errors += be
                    frame_errors += fe
                if config.target_errors is not None and frame_errors >= config.target_errors:
                    break
            elapsed = time.perf_counter() - started
            points.append(PointResult(value, frames, bit_errors, frame_errors, elapsed, config.k))
    finally:
        if pool:
            pool.shutdown()
    return SimResult(config, points)
