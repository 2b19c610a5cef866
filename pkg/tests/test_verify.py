from polarpsu.psu import tau
from polarpsu.verify import (
    all_vectors,
    check_base_case,
    check_equivalence,
    legal_reads,
    run_verification,
    symbolic_partial_sums,
    trace_psu,
)


def test_symbolic_masks_small():
    masks = symbolic_partial_sums(2)
    assert masks[0] == [1, 2, 4, 8]
    # column 1: S(0,1) = u0^u1, S(1,1) = u1, S(2,1) = u2^u3, S(3,1) = u3
    assert masks[1] == [0b11, 0b10, 0b1100, 0b1000]
    # last column is the codeword: x = u @ kron^2
    assert masks[2] == [0b1111, 0b1010, 0b1100, 0b1000]


def test_legal_reads_count():
    for n in range(1, 8):
        total = sum(len(v) for v in legal_reads(n).values())
        assert total == n * (1 << n) // 2


def test_default_run_passes():
    report = run_verification(6, 20, 0)
    assert report.ok, [str(f) for f in report.failures]
    assert "base-case N=2" in report.passed


def test_n_max_one_is_base_case():
    report = run_verification(1, 5, 0)
    assert report.ok
    assert report.passed[0] == "base-case N=2"
    assert "equivalence N=2 (4 frames)" in report.passed


def test_mutated_tau_reports_counterexample():
    def off_by_one(i, j):
        return tau(i, j) + (1 if j == 1 else 0)

    report = run_verification(3, 5, 0, tau_fn=off_by_one)
    assert not report.ok
    kinds = {f.check for f in report.failures}
    assert {"tau", "same-dff", "timing"} <= kinds
    timing = next(f for f in report.failures if f.check == "timing")
    assert timing.got == timing.expected + 1
    assert "N=4" in str(timing) and "u=" in str(timing)


def test_equivalence_flags_corrupted_unit(monkeypatch):
    import polarpsu.verify as verify
    from polarpsu.psu import ShiftRegisterPsu

    class Broken(ShiftRegisterPsu):
        def _read(self, i, j):
            out = super()._read(i, j)
            return out ^ 1 if (i, j) == (4, 1) else out

    monkeypatch.setattr(verify, "ShiftRegisterPsu", Broken)
    failure = check_equivalence(3, all_vectors(8))
    assert failure is not None and (failure.i, failure.j) == (4, 1)


def test_base_case():
    assert check_base_case() is None


def test_trace_example():
    rows = trace_psu(2, "1011")
    assert [r["t"] for r in rows] == [0, 1, 2, 3]
    assert rows[3]["regs_shift_psu"] == "1"  # R = (1, 0)
    assert rows[3]["regs_register_psu"] == "b"  # 1101, LSB first
    assert rows[1]["reads"] == "S(0,1)=1@R1;S(1,1)=0@R0"
    assert rows[1]["row_bits"] == "1100"
