"""Register-chain generator for the rows of the Kronecker-power matrix.

Each step computes the next row from the current one with
``M[0] = 1`` and ``M[j] = M[j-1] ^ M[j]``, so no row table is stored.
The sequence is periodic with period equal to the width, which lets one
stream serve both halves of a decode without a restart signal.
"""

from __future__ import annotations

import numpy as np

from .core import kronecker_power, log2_exact
from .errors import ParameterError


class GeneratorRowStream:
    """Emits row ``t mod W`` of ``kron^m`` at step ``t`` (``W = 2**m``)."""

    def __init__(self, width: int):
        self.m = log2_exact(width)
        self.width = width
        self.regs = np.zeros(width, dtype=np.uint8)
        self.t = -1

    def reset(self):
        self.regs[:] = 0
        self.t = -1

    def step(self) -> np.ndarray:
        """Advance one row and return a copy of the register contents."""
        nxt = self.regs.copy()
        nxt[1:] ^= self.regs[:-1]
        nxt[0] = 1
        self.regs = nxt
        self.t += 1
        return nxt.copy()

    def __iter__(self):
        while True:
            yield self.step()

    def rows(self, count: int) -> np.ndarray:
        """Step ``count`` times and stack the emitted rows."""
        if count < 0:
            raise ParameterError(f"row count must be non-negative, got {count}")
        out = np.empty((count, self.width), dtype=np.uint8)
        for r in range(count):
            out[r] = self.step()
        return out


def diagonal_equals_column_check(m: int) -> bool:
    """True iff ``c[t][t-d] == c[t][d]`` for every ``0 <= d <= t < 2**m``.

    This is the property that lets the shift-register unit consume the
    stream rows unmodified.
    """
    if not 0 <= m <= 10:
        raise ParameterError(f"m must be in [0, 10], got {m}")
    G = kronecker_power(m)
    t, d = np.tril_indices(G.shape[0])
    return bool(np.array_equal(G[t, t - d], G[t, d]))
