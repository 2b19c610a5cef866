"""Command-line entry point: ``polarpsu <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import os
import sys

import numpy as np

from .core import CodeParams, encode
from .decoder import decode
from .errors import PolarError
from .matrix_gen import GeneratorRowStream
from .psu import PSU_MODELS
from .sim import SimConfig, run_simulation
from .verify import TRACE_FIELDS, run_verification, trace_psu

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env_seed():
    raw = os.environ.get("POLAR_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"POLAR_SEED must be an integer, got {raw!r}") from None


def _open_out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _read_lines(path):
    if path in (None, "-"):
        return [line.strip() for line in sys.stdin if line.strip()]
    with open(path) as fh:
        return [line.strip() for line in fh if line.strip()]


def _parse_bits(text, length, what):
    if len(text) != length or set(text) - {"0", "1"}:
        raise UsageError(f"{what} must be {length} characters of 0/1, got {text!r}")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def cmd_gen_matrix(args):
    if not 0 <= args.n <= 16:
        raise UsageError("--n must be in [0, 16]")
    stream = GeneratorRowStream(1 << args.n)
    count = (1 << args.n) if args.rows is None else args.rows
    for _ in range(count):
        print("".join(map(str, stream.step())))
    return EXIT_OK


def cmd_encode(args):
    params = CodeParams.from_nk(args.n, args.k, args.design_erasure)
    with _open_out(args.output) as out:
        for line in _read_lines(args.input):
            u = np.zeros(params.N, dtype=np.uint8)
            u[params.info_positions] = _parse_bits(line, params.K, "info bits")
            out.write("".join(map(str, encode(u, params))) + "\n")
    return EXIT_OK


def cmd_decode(args):
    params = CodeParams.from_nk(args.n, args.k, args.design_erasure)
    try:
        frames = [[float(v) for v in line.split()] for line in _read_lines(args.llrs)]
    except ValueError as exc:
        raise UsageError(f"bad LLR value: {exc}") from None
    if not frames:
        return EXIT_OK
    bad = [r for r, fr in enumerate(frames, 1) if len(fr) != params.N]
    if bad:
        raise UsageError(f"frame on line {bad[0]} does not have {params.N} LLRs")
    result = decode(np.array(frames), params, args.psu, trace=args.trace is not None)
    with _open_out(args.output) as out:
        for row in result.info_bits:
            out.write("".join(map(str, row)) + "\n")
    if args.trace is not None:
        with open(args.trace, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["frame", "t", "llr", "frozen", "u_t", "psu_state"])
            for r in result.trace:
                writer.writerow([r.frame, r.t, repr(r.llr), int(r.frozen), r.u, r.psu_state])
    return EXIT_OK


def cmd_simulate(args):
    params = None if args.params is None else [float(v) for v in args.params.split(",") if v]
    overrides = {
        "n": args.n, "k": args.k, "channel": args.channel, "params": params,
        "frames": args.frames, "target_errors": args.target_errors, "max_frames": args.max_frames,
        "seed": args.seed, "psu": args.psu,
        "workers": args.workers, "design_erasure": args.design_erasure, "output": args.output,
    }
    defaults = {"seed": _env_seed() or 0}
    if args.config:
        config = SimConfig.from_file(args.config, defaults=defaults, **overrides)
    else:
        if args.n is None or args.k is None:
            raise UsageError("--n and --k are required without --config")
        config = SimConfig(**{**defaults, **{k: v for k, v in overrides.items() if v is not None}})
    result = run_simulation(config)
    fmt = args.format or ("json" if (config.output or "").endswith(".json") else "csv")
    text = result.to_json(not args.no_timing) if fmt == "json" else result.to_csv(not args.no_timing)
    with _open_out(config.output) as out:
        out.write(text)
    return EXIT_OK


def cmd_verify_psu(args):
    if not 1 <= args.n <= 10 or args.frames < 1:
        raise UsageError("--n must be in [1, 10] and --frames >= 1")
    seed = args.seed if args.seed is not None else (_env_seed() or 0)
    report = run_verification(args.n, args.frames, seed)
    if not args.quiet:
        for line in report.lines():
            print(line)
    if report.ok:
        print(f"OK: {len(report.passed)} checks passed")
        return EXIT_OK
    print(f"counterexample: {report.failures[0]}", file=sys.stderr)
    return EXIT_FAIL


def cmd_trace_psu(args):
    N = 1 << args.n
    text = args.input.strip()
    if not 1 <= len(text) <= N or set(text) - {"0", "1"}:
        raise UsageError(f"--input must be 1..{N} characters of 0/1")
    rows = trace_psu(args.n, text)
    with _open_out(args.output) as out:
        writer = csv.DictWriter(out, fieldnames=TRACE_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarpsu", description="Polar SC decoding with partial-sum unit models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-matrix", help="print rows of kron^n from the register-chain generator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rows", type=int, help="rows to emit (defaults to 2**n; more wraps around)")
    p.set_defaults(func=cmd_gen_matrix)

    def code_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--design-erasure", type=float, default=0.5)
        p.add_argument("--output", "-o")

    p = sub.add_parser("encode", help="encode K-bit info words (one per line) into codewords")
    code_args(p)
    p.add_argument("--input", "-i", help="input file (default stdin)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="SC-decode LLR frames (one whitespace-separated frame per line)")
    code_args(p)
    p.add_argument("--llrs", required=True, help="LLR file, '-' for stdin")
    p.add_argument("--psu", choices=sorted(PSU_MODELS), default="shift")
    p.add_argument("--trace", help="write a per-decision CSV trace here")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte-Carlo BER/FER sweep")
    p.add_argument("--config", help="flat key = value TOML file; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--channel", choices=("awgn", "bsc"))
    p.add_argument("--params", help="comma-separated Eb/N0 dB (awgn) or crossover probabilities (bsc)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--frames", type=int)
    group.add_argument("--target-errors", type=int)
    p.add_argument("--max-frames", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--psu", choices=sorted(PSU_MODELS))
    p.add_argument("--workers", type=int)
    p.add_argument("--design-erasure", type=float)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-timing", action="store_true", help="write seconds as 0 for byte-reproducible output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-psu", help="run the PSU equivalence and timing suites")
    p.add_argument("--n", type=int, default=10, help="largest code exponent checked")
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--quiet", "-q", action="store_true")
    p.set_defaults(func=cmd_verify_psu)

    p = sub.add_parser("trace-psu", help="CSV trace of register and shift-register PSUs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True, help="decision bits, e.g. 1011")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_trace_psu)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PolarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
