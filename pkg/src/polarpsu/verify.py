"""Brute-force oracles and the PSU verification campaign.

The symbolic oracle propagates sets of decision indices through the
encoding butterfly, independently of the sub-block formula, so it can
judge both the availability times and the three PSU models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import kronecker_power
from .decoder import bits_to_hex
from .errors import PolarError, TimingViolation
from .matrix_gen import GeneratorRowStream, diagonal_equals_column_check
from .psu import (
    B,
    MatrixPsu,
    RegisterPsu,
    ShiftRegisterPsu,
    decomposition_identity_check,
    dff_index,
    partial_sum_oracle,
    pe_for,
    pe_required_sums,
    tau,
)

EXHAUSTIVE_MAX_N = 4


def symbolic_partial_sums(n: int) -> list[list[int]]:
    """``masks[j][i]`` has bit ``l`` set iff ``S(i, j)`` depends on ``u[l]``."""
    N = 1 << n
    masks = [[1 << i for i in range(N)]]
    for j in range(n):
        prev = masks[-1]
        h = 1 << j
        masks.append([prev[i] ^ prev[i + h] if not B(i, j) else prev[i] for i in range(N)])
    return masks


def brute_force_tau(masks, i: int, j: int) -> int:
    """Largest decision index ``S(i, j)`` depends on."""
    return masks[j][i].bit_length() - 1


def legal_reads(n: int, tau_fn=tau) -> dict[int, list[tuple[int, int]]]:
    """Decoder-consumed ``(i, j)`` pairs grouped by the time ``tau_fn`` assigns them."""
    schedule: dict[int, list[tuple[int, int]]] = {}
    for j in range(n):
        for i in range(1 << n):
            if not B(i, j):
                schedule.setdefault(tau_fn(i, j), []).append((i, j))
    return schedule


@dataclass
class Failure:
    check: str
    N: int
    u: str | None = None
    i: int | None = None
    j: int | None = None
    expected: object = None
    got: object = None
    detail: str = ""

    def __str__(self):
        parts = [f"[{self.check}] N={self.N}"]
        if self.u is not None:
            parts.append(f"u={self.u}")
        if self.i is not None:
            parts.append(f"i={self.i} j={self.j}")
        parts.append(f"expected={self.expected} got={self.got}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


@dataclass
class VerificationReport:
    passed: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self):
        for name in self.passed:
            yield f"PASS {name}"
        for fail in self.failures:
            yield f"FAIL {fail}"


def _bitstr(row) -> str:
    return "".join(str(int(b)) for b in row)


def check_base_case() -> Failure | None:
    """Length-2 products ``[u0, 0]`` then ``[u0^u1, u1]`` on every unit, all four inputs."""
    for u0, u1 in itertools.product((0, 1), repeat=2):
        expected = ([u0, 0], [u0 ^ u1, u1])
        units = [MatrixPsu(1), RegisterPsu(1), ShiftRegisterPsu(1)]
        for t, bit in enumerate((u0, u1)):
            for unit in units:
                unit.update(bit)
            for unit in units[:2]:
                if list(unit.state()) != expected[t]:
                    return Failure("base-case", 2, f"{u0}{u1}", expected=expected[t], got=list(unit.state()),
                                   detail=f"{unit.name} psu at t={t}")
            # the single shift cell holds p_t(t)
            if int(units[2].state()[0]) != expected[t][t]:
                return Failure("base-case", 2, f"{u0}{u1}", expected=expected[t][t], got=int(units[2].state()[0]),
                               detail=f"shift psu at t={t}")
    return None


def check_tau(n: int, tau_fn=tau) -> Failure | None:
    masks = symbolic_partial_sums(n)
    for j in range(n):
        for i in range(1 << n):
            want, got = brute_force_tau(masks, i, j), tau_fn(i, j)
            if want != got:
                return Failure("tau", 1 << n, i=i, j=j, expected=want, got=got)
    return None


def check_same_dff(n: int, tau_fn=tau) -> Failure | None:
    N = 1 << n
    for p in range(n):
        for x in range(1 << p):
            cell = dff_index(x, p)
            if not 0 <= cell < N // 2:
                return Failure("same-dff", N, i=x, j=p, expected=f"[0, {N // 2})", got=cell)
            for i in pe_required_sums(x, p, N):
                if tau_fn(i, p) - i != cell:
                    return Failure("same-dff", N, i=i, j=p, expected=cell, got=tau_fn(i, p) - i,
                                   detail=f"PE({x},{p})")
    return None


def check_generator_stream(m: int) -> Failure | None:
    G = kronecker_power(m)
    W = G.shape[0]
    stream = GeneratorRowStream(W)
    rows = stream.rows(2 * W)
    for t in range(2 * W):
        if not np.array_equal(rows[t], G[t % W]):
            return Failure("generator-stream", W, expected=_bitstr(G[t % W]), got=_bitstr(rows[t]), detail=f"step {t}")
    return None


def all_vectors(N: int) -> np.ndarray:
    """Every length-``N`` bit vector, one per row."""
    codes = np.arange(1 << N, dtype=np.int64)
    return ((codes[:, None] >> np.arange(N)) & 1).astype(np.uint8)


def check_equivalence(n: int, u: np.ndarray, tau_fn=tau) -> Failure | None:
    """Run the three units in lock-step on every row of ``u`` (shape ``(F, N)``).

    Checks full register state after every update and every legal read
    against the sub-block oracle.
    """
    N = 1 << n
    F = u.shape[0]
    units = [MatrixPsu(n, F), RegisterPsu(n, F), ShiftRegisterPsu(n, F)]
    schedule = legal_reads(n, tau_fn)
    half = N // 2
    G = kronecker_power(n)
    product = np.zeros((F, N), dtype=np.uint8)

    def frame_failure(mask, check, **kw):
        r = int(np.flatnonzero(mask)[0])
        return Failure(check, N, _bitstr(u[r]), **{k: (v[r] if isinstance(v, np.ndarray) else v) for k, v in kw.items()})

    for t in range(N):
        for unit in units:
            unit.update(u[:, t])
        # U(t) @ G accumulated one dense row per decision
        product ^= u[:, t, None] & G[t]
        bad = (units[1].state() != product).any(axis=1)
        if bad.any():
            return frame_failure(bad, "register-state", detail=f"t={t}")
        d = np.arange(min(t, half - 1) + 1)
        bad = (units[2].state()[:, d] != product[:, t - d]).any(axis=1)
        if bad.any():
            return frame_failure(bad, "shift-state", detail=f"t={t}")
        for i, j in schedule.get(t, ()):
            want = partial_sum_oracle(u[:, : t + 1], i, j)
            for unit in units:
                try:
                    got = unit.read(i, j)
                except TimingViolation as exc:
                    return Failure("timing", N, _bitstr(u[0]), i, j, expected=tau(i, j), got=t, detail=str(exc))
                bad = got != want
                if bad.any():
                    return frame_failure(bad, "read", i=i, j=j, expected=want, got=got, detail=f"{unit.name} psu")
                if unit is units[2] and dff_index(*pe_for(i, j)) >= half:
                    return Failure("shift-sufficiency", N, i=i, j=j, expected=f"< {half}", got=dff_index(*pe_for(i, j)))
    bad = (units[0].state() != product).any(axis=1)
    if bad.any():
        return frame_failure(bad, "matrix-state", detail=f"t={N - 1}")
    return None


def run_verification(n_max: int = 10, frames: int = 100, seed: int = 0, tau_fn=tau) -> VerificationReport:
    """Run every PSU and generator property for code lengths ``2 .. 2**n_max``.

    Equivalence is exhaustive over all inputs up to ``N = 16`` and uses
    ``frames`` random inputs beyond.  ``tau_fn`` lets the harness itself be
    mutation-tested.
    """
    report = VerificationReport()
    rng = np.random.default_rng(seed)

    def record(name, failure):
        if failure is None:
            report.passed.append(name)
        else:
            report.failures.append(failure)

    if n_max >= 1:
        record("base-case N=2", check_base_case())
    for n in range(1, n_max + 1):
        N = 1 << n
        record(f"tau N={N}", check_tau(n, tau_fn))
        record(f"same-dff N={N}", check_same_dff(n, tau_fn))
        u = all_vectors(N) if n <= EXHAUSTIVE_MAX_N else rng.integers(0, 2, (frames, N), dtype=np.uint8)
        try:
            record(f"equivalence N={N} ({u.shape[0]} frames)", check_equivalence(n, u, tau_fn))
        except PolarError as exc:
            record(f"equivalence N={N}", Failure("equivalence", N, detail=repr(exc)))
    for m in range(0, n_max + 1):
        record(f"generator-stream m={m}", check_generator_stream(m))
        if m <= 10:
            ok = diagonal_equals_column_check(m)
            record(f"diagonal-column m={m}", None if ok else Failure("diagonal-column", 1 << m, expected=True, got=False))
    for n in range(1, min(n_max - 1, 9) + 1):
        N = 1 << n
        u = all_vectors(2 * N) if n <= 2 else rng.integers(0, 2, (frames, 2 * N), dtype=np.uint8)
        ok = decomposition_identity_check(n, u)
        record(f"decomposition n={n}", None if ok else Failure("decomposition", 2 * N, expected=True, got=False))
    return report


TRACE_FIELDS = ("t", "u_t", "row_bits", "regs_register_psu", "regs_shift_psu", "reads")


def trace_psu(n: int, bits) -> list[dict]:
    """Cycle-by-cycle register and read trace for one decision sequence.

    ``reads`` lists every partial sum that becomes available at ``t`` as
    ``S(i,j)=v@Rd`` with ``d`` the shift-register cell served.
    """
    bits = [int(b) for b in bits]
    reg, shift = RegisterPsu(n), ShiftRegisterPsu(n)
    schedule = legal_reads(n)
    rows = []
    for t, bit in enumerate(bits):
        reg.update(bit)
        shift.update(bit)
        reads = []
        for i, j in schedule.get(t, ()):
            a, b = reg.read(i, j), shift.read(i, j)
            if a != b:
                raise AssertionError(f"register and shift PSUs disagree on S({i},{j}) at t={t}")
            reads.append(f"S({i},{j})={b}@R{dff_index(*pe_for(i, j))}")
        rows.append({
            "t": t,
            "u_t": bit,
            "row_bits": _bitstr(reg.rows.regs),
            "regs_register_psu": bits_to_hex(reg.state()),
            "regs_shift_psu": bits_to_hex(shift.state()),
            "reads": ";".join(reads),
        })
    return rows
