"""Command-line front end: state generation, synthesis, benchmarking and
verification."""
from __future__ import annotations

import argparse
import sys

from . import _kernels
from .bench import (
    FIDELITY_THRESHOLD,
    VERIFY_MAX_QUBITS,
    random_sparse_state,
    records_to_csv,
    resolve_m,
    run_bench,
    verify_state_circuit,
)
from .core import load_state, save_state
from .decomp import lower_circuit
from .errors import WalkprepError
from .ordering import ORDERING_NAMES, build_order
from .qasm import emit_qasm, parse_qasm
from .synth import SynthOptions, cx_count, synthesize


def _parse_ns(spec: str) -> list[int]:
    out: list[int] = []
    for part in spec.split(","):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _opts(args) -> SynthOptions:
    return SynthOptions(
        control_reduction=not args.no_control_reduction,
        frame_propagation=not args.no_frame_propagation,
    )


def _add_opt_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-control-reduction", action="store_true", help="use all n-1 controls")
    p.add_argument("--no-frame-propagation", action="store_true", help="emit mirrored conjugation CXs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkprep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("random-state", help="generate a seeded random sparse state file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", required=True, help="n | n2 | half-dense | <int>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("synthesize", help="compile a state file to an OpenQASM circuit")
    p.add_argument("--state", required=True)
    p.add_argument("--order", default="mhs-nonlinear", choices=ORDERING_NAMES)
    p.add_argument("--seed", type=int, default=0, help="seed for the random ordering")
    p.add_argument("--out", required=True, help="output .qasm path")
    _add_opt_flags(p)

    p = sub.add_parser("verify", help="check a qasm file against a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--qasm", required=True)

    p = sub.add_parser("bench", help="benchmark orderings over seeded random states")
    p.add_argument("--n", required=True, help="qubit counts, e.g. 5,6,7 or 5-8")
    p.add_argument("--m", default="n", help="n | n2 | half-dense | <int>")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", default="mhs-nonlinear", help="comma-separated ordering names")
    p.add_argument("--csv", help="write per-record CSV here")
    _add_opt_flags(p)
    return parser


def _cmd_random_state(args) -> int:
    m = resolve_m(args.m, args.n)
    save_state(random_sparse_state(args.n, m, args.seed), args.out)
    print(f"wrote n={args.n} m={m} seed={args.seed} state to {args.out}")
    return 0


def _cmd_synthesize(args) -> int:
    state = load_state(args.state)
    opts = _opts(args)
    order = build_order(args.order, state, args.seed, opts)
    circuit = synthesize(state, order, opts)
    lowered = lower_circuit(circuit)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(emit_qasm(lowered))
    print(f"order={args.order} n={state.n} m={state.m} cx={cx_count(lowered)} -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    state = load_state(args.state)
    if state.n > VERIFY_MAX_QUBITS:
        print(f"error: verification limited to {VERIFY_MAX_QUBITS} qubits", file=sys.stderr)
        return 2
    with open(args.qasm, encoding="utf-8") as fh:
        circuit = parse_qasm(fh.read())
    fid = verify_state_circuit(state, circuit)
    ok = fid >= FIDELITY_THRESHOLD
    print(f"fidelity = {fid:.12f}  {'PASS' if ok else 'FAIL'} (threshold {FIDELITY_THRESHOLD})")
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    ns = _parse_ns(args.n)
    orderings = [o.strip() for o in args.order.split(",")]
    for name in orderings:
        if name not in ORDERING_NAMES:
            print(f"error: unknown ordering {name!r}", file=sys.stderr)
            return 2
    records, summaries = run_bench(ns, args.m, orderings, args.count, args.seed, _opts(args))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(records_to_csv(records))
    print(f"kernel backend: {_kernels.BACKEND}")
    print(f"{'n':>3} {'m':>5} {'order':<14} {'count':>5} {'mean_cx':>10} {'ci95':>8}")
    for s in summaries:
        print(f"{s.n:>3} {s.m:>5} {s.order:<14} {s.count:>5} {s.mean_cx:>10.2f} {s.ci95:>8.2f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "random-state": _cmd_random_state,
        "synthesize": _cmd_synthesize,
        "verify": _cmd_verify,
        "bench": _cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except WalkprepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
