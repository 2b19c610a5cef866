"""Partial-sum units and the index arithmetic that locates partial sums.

Notation follows the natural-order factor graph: ``S(i, j)`` is the partial
sum on row ``i`` of column ``j``, i.e. bit ``i - a`` of the sub-block
``u[a..b] @ kron^j`` where ``a..b`` is the ``2**j``-aligned block holding
``i``.  Only sums with ``B(i, j) == 0`` are ever consumed by the decoder.

All three units are bit-sliced: constructed with ``batch=F`` they run ``F``
independent frames in lock-step, accepting a length-``F`` bit array per
update and answering reads with length-``F`` arrays.  With ``batch=None``
they accept and return plain ints.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .core import kronecker_power
from .errors import (
    AvailabilityError,
    ParameterError,
    PsuOverflowError,
    TimingViolation,
)
from .matrix_gen import GeneratorRowStream


def B(i: int, j: int) -> int:
    """Bit ``j`` of ``i``: 0 selects the f kernel at node (i, j), 1 the g kernel."""
    return (i >> j) & 1


def _check_ij(i, j, n, j_max):
    if i < 0 or j < 0:
        raise ParameterError(f"indices must be non-negative, got (i={i}, j={j})")
    if n is not None and (i >= 1 << n or j > j_max):
        raise ParameterError(f"(i={i}, j={j}) outside the graph of a length-{1 << n} code")


def subblock_bounds(i: int, j: int, n: int | None = None) -> tuple[int, int]:
    """First and last bit index of the sub-block that ``S(i, j)`` encodes."""
    _check_ij(i, j, n, n)
    a = (i >> j) << j
    return a, a + (1 << j) - 1


def tau(i: int, j: int, n: int | None = None) -> int:
    """Index of the decision after which ``S(i, j)`` becomes valid."""
    _check_ij(i, j, n, None if n is None else n - 1)
    return ((i >> j) + 1) * (1 << j) - 1


def pe_required_sums(x: int, p: int, N: int) -> list[int]:
    """Rows of the column-``p`` partial sums consumed by PE(x, p)."""
    if p < 0 or (1 << (p + 1)) > N or not 0 <= x < 1 << p:
        raise ParameterError(f"no PE({x}, {p}) in a length-{N} decoder")
    return list(range(x, N, 1 << (p + 1)))


def dff_index(x: int, p: int) -> int:
    """Shift-register cell that holds every partial sum PE(x, p) needs."""
    return (1 << p) - 1 - (x % (1 << p))


def pe_for(i: int, j: int) -> tuple[int, int]:
    """PE coordinates serving ``S(i, j)``."""
    return i % (1 << j), j


@lru_cache(maxsize=None)
def _kron(m):
    G = kronecker_power(m)
    G.flags.writeable = False
    return G


def partial_sum_oracle(u, i: int, j: int):
    """Evaluate ``S(i, j)`` directly from the decided prefix ``u``.

    ``u`` may be a 1-D prefix or a stack of prefixes (last axis = time).
    """
    u = np.asarray(u, dtype=np.int64)
    a, b = subblock_bounds(i, j)
    if u.shape[-1] <= b:
        raise AvailabilityError(
            f"S({i},{j}) needs bits {a}..{b} but only {u.shape[-1]} are decided"
        )
    col = _kron(j)[:, i - a].astype(np.int64)
    out = (u[..., a : b + 1] @ col) & 1
    return int(out) if np.ndim(out) == 0 else out.astype(np.uint8)


class PartialSumUnit:
    """Common update/read protocol.

    ``t`` is the index of the most recent decision (-1 before the first).
    Reads are only legal at exactly ``t == tau(i, j)``: in the shifted
    architecture the value moves every cycle, so a late read is wrong.
    """

    name = "abstract"

    def __init__(self, n: int, batch: int | None = None):
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        self.n = n
        self.N = 1 << n
        self.batch = batch
        self._shape = () if batch is None else (batch,)
        self.t = -1

    def reset(self):
        self.t = -1

    def _bits(self, bits):
        bits = np.asarray(bits)
        if bits.size and (bits.min() < 0 or bits.max() > 1):
            raise ParameterError("decisions must be 0 or 1")
        return np.broadcast_to(bits.astype(np.uint8), self._shape)

    def _out(self, value):
        return int(value) if self.batch is None else value

    def update(self, bits):
        """Absorb decision ``u[t+1]`` (one bit per frame)."""
        if self.t + 1 > self.N - 1:
            raise PsuOverflowError(f"unit of length {self.N} already holds all decisions")
        self._absorb(self._bits(bits))
        self.t += 1

    def _check_read(self, i, j):
        _check_ij(i, j, self.n, self.n - 1)
        if B(i, j):
            raise ParameterError(f"S({i},{j}) has B=1 and is never consumed")
        when = tau(i, j)
        if self.t != when:
            raise TimingViolation(f"S({i},{j}) is available at t={when}, read at t={self.t}")

    def read(self, i: int, j: int):
        """Return ``S(i, j)``; legal only at ``t == tau(i, j)``."""
        self._check_read(i, j)
        return self._out(self._read(i, j))

    def read_block(self, start: int, j: int):
        """All column-``j`` sums a g-stage needs: rows ``start .. start + 2**j - 1``.

        ``start`` must be a multiple of ``2**(j+1)``; the last axis of the
        result runs over the rows.
        """
        h = 1 << j
        if start % (2 * h):
            raise ParameterError(f"block start {start} not aligned to {2 * h}")
        self._check_read(start, j)
        return self._read_block(start, h)

    def _read_block(self, start, h):
        j = h.bit_length() - 1
        return np.stack([np.asarray(self._read(start + x, j)) for x in range(h)], axis=-1)

    def state(self) -> np.ndarray:
        """Register bank contents, last axis = cell index."""
        raise NotImplementedError

    def _absorb(self, bits):
        raise NotImplementedError

    def _read(self, i, j):
        raise NotImplementedError


class MatrixPsu(PartialSumUnit):
    """Reference model: reads bit ``i`` of ``U(t) @ kron^n`` from the decided prefix."""

    name = "matrix"

    def __init__(self, n, batch=None):
        super().__init__(n, batch)
        self.G = _kron(n).astype(np.int64)
        self.u = np.zeros(self._shape + (self.N,), dtype=np.int64)

    def reset(self):
        super().reset()
        self.u[...] = 0

    def _absorb(self, bits):
        self.u[..., self.t + 1] = bits

    def _read(self, i, j):
        return ((self.u[..., : self.t + 1] @ self.G[: self.t + 1, i]) & 1).astype(np.uint8)

    def _read_block(self, start, h):
        prod = self.u[..., : self.t + 1] @ self.G[: self.t + 1, start : start + h]
        return (prod & 1).astype(np.uint8)

    def state(self):
        return ((self.u @ self.G) & 1).astype(np.uint8)


class RegisterPsu(PartialSumUnit):
    """N cells, ``R[j] ^= u_t & c[t][j]``; row ``i``'s sums live in ``R[i]``."""

    name = "register"

    def __init__(self, n, batch=None):
        super().__init__(n, batch)
        self.rows = GeneratorRowStream(self.N)
        self.regs = np.zeros(self._shape + (self.N,), dtype=np.uint8)

    def reset(self):
        super().reset()
        self.rows.reset()
        self.regs[...] = 0

    def _absorb(self, bits):
        self.regs ^= bits[..., None] & self.rows.step()

    def _read(self, i, j):
        return self.regs[..., i].copy()

    def _read_block(self, start, h):
        return self.regs[..., start : start + h].copy()

    def state(self):
        return self.regs.copy()


class ShiftRegisterPsu(PartialSumUnit):
    """N/2 cells, ``R[d] = R[d-1] ^ u_t & c[t][d]`` with ``R[-1] = 0``.

    After decision ``t`` cell ``d`` holds ``p_{t-d}(t)``, so every sum a
    given PE needs appears in the one cell ``dff_index(x, p)``.  Row
    coefficients come from a cyclic width-N/2 generator stream.
    """

    name = "shift"

    def __init__(self, n, batch=None):
        super().__init__(n, batch)
        self.width = self.N // 2
        self.rows = GeneratorRowStream(self.width)
        self.regs = np.zeros(self._shape + (self.width,), dtype=np.uint8)

    def reset(self):
        super().reset()
        self.rows.reset()
        self.regs[...] = 0

    def _absorb(self, bits):
        shifted = np.zeros_like(self.regs)
        shifted[..., 1:] = self.regs[..., :-1]
        self.regs = shifted ^ (bits[..., None] & self.rows.step())

    def _read(self, i, j):
        x, p = pe_for(i, j)
        return self.regs[..., dff_index(x, p)].copy()

    def _read_block(self, start, h):
        # row start + x sits in cell h - 1 - x
        return self.regs[..., h - 1 :: -1].copy()

    def state(self):
        return self.regs.copy()


PSU_MODELS = {cls.name: cls for cls in (MatrixPsu, RegisterPsu, ShiftRegisterPsu)}


def make_psu(model: str, n: int, batch: int | None = None) -> PartialSumUnit:
    try:
        cls = PSU_MODELS[model]
    except KeyError:
        raise ParameterError(f"unknown PSU model {model!r}; choose from {sorted(PSU_MODELS)}") from None
    return cls(n, batch)


def _cumulative_rows(u, rows):
    """Stack of prefix products ``u[:t+1] @ rows`` for every ``t`` (GF(2))."""
    return np.bitwise_xor.accumulate(u[..., :, None] * rows, axis=-2)


def decomposition_identity_check(n: int, u) -> bool:
    """Check the half-split form of ``U(t) @ kron^(n+1)`` for all ``t``.

    For ``t < N`` the product must be ``[V(t) @ kron^n, 0]``; afterwards it
    must be ``[(V + W(t)) @ kron^n, W(t) @ kron^n]``, with ``V`` the first
    ``N`` decisions and ``W(t)`` the decided part of the second half.
    ``u`` holds one or more length-``2N`` decision vectors.
    """
    if not 0 <= n <= 9:
        raise ParameterError(f"n must be in [0, 9], got {n}")
    N = 1 << n
    u = np.atleast_2d(np.asarray(u, dtype=np.uint8))
    if u.shape[-1] != 2 * N:
        raise ParameterError(f"expected vectors of length {2 * N}, got {u.shape[-1]}")
    if N % 8 == 0:
        # byte-packed columns; halves stay byte aligned
        big = np.packbits(_kron(n + 1), axis=-1)
        small = np.packbits(_kron(n), axis=-1)
    else:
        big, small = _kron(n + 1), _kron(n)
    for lo in range(0, u.shape[0], 64):
        chunk = u[lo : lo + 64]
        full = _cumulative_rows(chunk, big)
        v_prod = _cumulative_rows(chunk[:, :N], small)
        w_prod = _cumulative_rows(chunk[:, N:], small)
        first = np.concatenate([v_prod, np.zeros_like(v_prod)], axis=-1)
        second = np.concatenate([v_prod[:, -1:] ^ w_prod, w_prod], axis=-1)
        if not np.array_equal(full, np.concatenate([first, second], axis=-2)):
            return False
    return True
