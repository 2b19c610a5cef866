"""Successive-cancellation decoding with min-sum kernels.

LLRs are kept in a full ``(n + 1, N)`` lattice per frame: column ``n`` holds
the channel values and column 0 the values the decisions are taken on.
Partial sums for the g kernel are fetched from a pluggable
:class:`~polarpsu.psu.PartialSumUnit`, at exactly the cycle the unit's
timing contract allows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CodeParams
from .errors import InputError, ParameterError
from .psu import B, PartialSumUnit, make_psu

__all__ = ["B", "DecodeResult", "TraceRecord", "decide", "decode", "f", "g", "bits_to_hex"]


def f(a, b):
    """Min-sum check-node kernel; ``sign(0)`` counts as positive."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sign = np.where((a < 0) ^ (b < 0), -1.0, 1.0)
    out = sign * np.minimum(np.abs(a), np.abs(b))
    return float(out) if out.ndim == 0 else out


def g(a, b, s):
    """Variable-node kernel ``b + (-1)**s * a``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = np.asarray(s)
    out = b + np.where(s & 1, -a, a)
    return float(out) if out.ndim == 0 else out


def decide(llr, index: int, params: CodeParams):
    """Hard decision on a fully propagated LLR; frozen positions give 0, ties give 0."""
    if index in params.frozen:
        return np.zeros(np.shape(llr), dtype=np.uint8) if np.ndim(llr) else 0
    bit = np.asarray(llr) < 0
    return bit.astype(np.uint8) if bit.ndim else int(bit)


def bits_to_hex(bits) -> str:
    """Hex string of a bit vector with index 0 as the least-significant bit."""
    value = 0
    for k, b in enumerate(np.asarray(bits).ravel()):
        if b:
            value |= 1 << k
    return f"{value:0{max(1, (len(bits) + 3) // 4)}x}"


@dataclass
class TraceRecord:
    frame: int
    t: int
    llr: float
    frozen: bool
    u: int
    psu_state: str


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    info_bits: np.ndarray
    trace: list = field(default_factory=list)


def _as_frames(llrs, N):
    llrs = np.asarray(llrs, dtype=float)
    single = llrs.ndim == 1
    frames = llrs[None, :] if single else llrs
    if frames.ndim != 2 or frames.shape[1] != N:
        raise InputError(f"expected {N} LLRs per frame, got shape {llrs.shape}")
    if not np.isfinite(frames).all():
        raise InputError("channel LLRs must be finite")
    return frames, single


def decode(llrs, params: CodeParams, psu: PartialSumUnit | str = "shift", trace: bool = False) -> DecodeResult:
    """Decode one frame (shape ``(N,)``) or a stack of frames (``(F, N)``).

    ``psu`` is either a model name or a unit instance whose batch size
    matches the input; instances are reset before use.
    """
    n, N = params.n, params.N
    frames, single = _as_frames(llrs, N)
    F = frames.shape[0]
    if isinstance(psu, str):
        psu = make_psu(psu, n, None if single else F)
    else:
        if psu.n != n:
            raise ParameterError(f"PSU built for n={psu.n}, code has n={n}")
        if psu.batch != (None if single else F):
            raise ParameterError(f"PSU batch {psu.batch} does not match {F} frame(s)")
        psu.reset()

    lat = np.zeros((F, n + 1, N))
    lat[:, n, :] = frames
    u_hat = np.zeros((F, N), dtype=np.uint8)
    frozen = params.frozen_mask
    records = []

    for k in range(N):
        top = n - 1 if k == 0 else min(n - 1, (k & -k).bit_length() - 1)
        for j in range(top, -1, -1):
            h = 1 << j
            if B(k, j):
                s = psu.read_block(k - h, j)
                if single:
                    s = s[None, :]
                lat[:, j, k : k + h] = g(lat[:, j + 1, k - h : k], lat[:, j + 1, k : k + h], s)
            else:
                lat[:, j, k : k + h] = f(lat[:, j + 1, k : k + h], lat[:, j + 1, k + h : k + 2 * h])
        llr = lat[:, 0, k]
        bits = decide(llr, k, params)
        u_hat[:, k] = bits
        psu.update(int(bits[0]) if single else bits)
        if trace:
            state = psu.state().reshape(F, -1)
            for fr in range(F):
                records.append(TraceRecord(fr, k, float(llr[fr]), bool(frozen[k]), int(bits[fr]), bits_to_hex(state[fr])))

    info = u_hat[:, params.info_positions]
    if single:
        return DecodeResult(u_hat[0], info[0], records)
    return DecodeResult(u_hat, info, records)
