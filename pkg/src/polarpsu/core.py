"""Code parameters, the Kronecker-power generator, encoding and frozen sets.

Bit vectors are numpy ``uint8`` arrays whose last axis has length ``N``;
index 0 is the first decided bit. Leading axes, when present, index
independent frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.uint8)
MAX_DENSE_EXPONENT = 16


@dataclass(frozen=True)
class CodeParams:
    """Length ``N = 2**n`` polar code with ``K`` information bits.

    ``frozen`` holds the ``N - K`` positions forced to zero.
    """

    n: int
    frozen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError(f"n must be an integer >= 1, got {self.n!r}")
        frozen = frozenset(int(i) for i in self.frozen)
        bad = [i for i in frozen if not 0 <= i < self.N]
        if bad:
            raise ParameterError(f"frozen indices out of range [0, {self.N - 1}]: {sorted(bad)}")
        object.__setattr__(self, "frozen", frozen)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def K(self) -> int:
        return self.N - len(self.frozen)

    @property
    def info_positions(self) -> np.ndarray:
        return np.array([i for i in range(self.N) if i not in self.frozen], dtype=np.intp)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.frozen)] = True
        return mask

    @classmethod
    def from_nk(cls, n: int, K: int, design_erasure: float = 0.5) -> "CodeParams":
        """Build parameters with the erasure-channel frozen set."""
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ParameterError(f"n must be an integer >= 1, got {n!r}")
        return cls(n, construct_frozen_set(1 << n, K, design_erasure))


def log2_exact(N: int) -> int:
    """Return ``n`` with ``N == 2**n``; raise for anything else."""
    if not isinstance(N, (int, np.integer)) or N < 1 or N & (N - 1):
        raise ParameterError(f"N must be a power of two, got {N!r}")
    return int(N).bit_length() - 1


def kronecker_power(m: int) -> np.ndarray:
    """Return the ``m``-fold Kronecker power of ``[[1, 0], [1, 1]]``.

    The result is a dense ``(2**m, 2**m)`` ``uint8`` array; ``m = 0``
    gives ``[[1]]``.
    """
    if not isinstance(m, (int, np.integer)) or not 0 <= m <= MAX_DENSE_EXPONENT:
        raise ParameterError(f"exponent must be in [0, {MAX_DENSE_EXPONENT}], got {m!r}")
    G = np.ones((1, 1), dtype=np.uint8)
    for _ in range(m):
        G = np.kron(KERNEL, G)
    return G


def subset_rule(i: int, j: int) -> int:
    """Closed form of ``c[i][j]``: 1 iff the set bits of ``j`` are a subset of those of ``i``."""
    return int(i & j == j)


def gf2_matmul(u: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Row vector(s) times matrix over GF(2)."""
    # int64 accumulation is exact for any length we can hold densely
    return (np.asarray(u, dtype=np.int64) @ G.astype(np.int64) & 1).astype(np.uint8)


def _butterfly(u: np.ndarray) -> np.ndarray:
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    half = 1
    while half < N:
        x = x.reshape(x.shape[:-1] + (N // (2 * half), 2, half))
        x[..., 0, :] ^= x[..., 1, :]
        x = x.reshape(x.shape[:-3] + (N,))
        half *= 2
    return x


def encode(u, params: CodeParams) -> np.ndarray:
    """Return ``x = u @ kron^n`` over GF(2).

    Uses the in-place butterfly rather than the dense matrix, so it works
    for any ``n``. Accepts a single vector or a stack of vectors.
    """
    u = np.asarray(u)
    if u.shape[-1:] != (params.N,):
        raise ParameterError(f"expected last axis of length {params.N}, got shape {u.shape}")
    if u.size and not np.isin(u, (0, 1)).all():
        raise ParameterError("bit vectors may only contain 0 and 1")
    return _butterfly(u)


def bhattacharyya_erasure(N: int, design_erasure: float = 0.5) -> np.ndarray:
    """Bhattacharyya parameters of the ``N`` synthetic channels of a BEC.

    The channel-side split is the most significant index bit, matching the
    natural-order factor graph used by the decoder.
    """
    n = log2_exact(N)
    z = np.array([float(design_erasure)])
    for _ in range(n):
        nxt = np.empty(2 * z.size)
        nxt[0::2] = 2 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def construct_frozen_set(N: int, K: int, design_erasure: float = 0.5) -> frozenset:
    """Freeze the ``N - K`` least reliable positions.

    Ties in the Bhattacharyya parameter freeze the smaller index first.
    """
    log2_exact(N)
    if not isinstance(K, (int, np.integer)) or not 0 <= K <= N:
        raise ParameterError(f"K must be in [0, {N}], got {K!r}")
    if not 0.0 < design_erasure < 1.0:
        raise ParameterError(f"design erasure probability must be in (0, 1), got {design_erasure!r}")
    z = bhattacharyya_erasure(N, design_erasure)
    order = sorted(range(N), key=lambda i: (-z[i], i))
    return frozenset(order[: N - K])
