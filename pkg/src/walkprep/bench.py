"""Random instances, benchmark sweeps and verification.

Sweeps run over seeded random states and report mean CX counts per
(n, ordering) with 95% confidence intervals; every record is verified by
exact simulation (skipped with a warning above 14 qubits).
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .core import BasisState, SparseState
from .decomp import lower_circuit
from .errors import BenchVerificationError
from .ordering import build_order
from .sim import StateVector, fidelity, run_circuit
from .synth import SynthOptions, cx_count, synthesize

FIDELITY_THRESHOLD = 1 - 1e-9
VERIFY_MAX_QUBITS = 14
CSV_HEADER = "n,m,order,seed,cx,time_ms,fidelity"


def random_sparse_state(n: int, m: int, seed: int) -> SparseState:
    """m distinct uniform basis states with normalized complex-Gaussian
    amplitudes; fully determined by the seed."""
    dim = 1 << n
    if not 1 <= m <= dim:
        raise ValueError(f"m={m} outside [1, 2^{n}]")
    rng = np.random.default_rng(seed)
    if dim <= 1 << 16 or m * 4 >= dim:
        keys = [int(v) for v in rng.permutation(dim)[:m]]
    else:
        chosen: list[int] = []
        seen: set[int] = set()
        while len(chosen) < m:
            for v in rng.integers(0, dim, size=2 * (m - len(chosen))):
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    chosen.append(v)
                    if len(chosen) == m:
                        break
        keys = chosen
    while True:
        amps = rng.normal(size=m) + 1j * rng.normal(size=m)
        amps /= np.linalg.norm(amps)
        if np.min(np.abs(amps)) > 1e-10:
            break
    return SparseState(n, {BasisState(n, k): complex(a) for k, a in zip(keys, amps)})


def resolve_m(spec: str, n: int) -> int:
    """Benchmark m expressions: n, n2 (= n^2, capped at 2^n), half-dense
    (= 2^(n-1)), or a literal integer."""
    if spec == "n":
        return n
    if spec == "n2":
        return min(n * n, 1 << n)
    if spec == "half-dense":
        return 1 << (n - 1)
    return int(spec)


@dataclass(frozen=True)
class BenchRecord:
    n: int
    m: int
    order: str
    seed: int
    cx: int
    time_ms: float
    fidelity: float


@dataclass(frozen=True)
class BenchSummary:
    n: int
    m: int
    order: str
    count: int
    mean_cx: float
    ci95: float


def _summarize(records: list[BenchRecord]) -> list[BenchSummary]:
    groups: dict[tuple[int, int, str], list[int]] = {}
    for rec in records:
        groups.setdefault((rec.n, rec.m, rec.order), []).append(rec.cx)
    out = []
    for (n, m, order), xs in sorted(groups.items()):
        mean = float(np.mean(xs))
        ci = 0.0 if len(xs) < 2 else 1.96 * float(np.std(xs, ddof=1)) / math.sqrt(len(xs))
        out.append(BenchSummary(n, m, order, len(xs), mean, ci))
    return out


def bench_instance(
    s: SparseState,
    order_name: str,
    seed: int,
    opts: SynthOptions = SynthOptions(),
    verify_limit: int = VERIFY_MAX_QUBITS,
) -> BenchRecord:
    t0 = time.perf_counter()
    order = build_order(order_name, s, seed, opts)
    circuit = synthesize(s, order, opts)
    lowered = lower_circuit(circuit)
    cx = cx_count(lowered)
    elapsed = (time.perf_counter() - t0) * 1e3
    if s.n <= verify_limit:
        fid = fidelity(s, run_circuit(circuit, StateVector.ground(s.n)))
        if fid < FIDELITY_THRESHOLD:
            raise BenchVerificationError(
                f"fidelity {fid} below threshold for n={s.n} m={s.m} order={order_name} seed={seed}",
                seed=seed,
            )
    else:
        fid = float("nan")
        print(f"warning: n={s.n} exceeds verification limit {verify_limit}, skipping", file=sys.stderr)
    return BenchRecord(s.n, s.m, order_name, seed, cx, elapsed, fid)


def run_bench(
    ns: list[int],
    m_spec: str,
    orderings: list[str],
    count: int,
    base_seed: int = 0,
    opts: SynthOptions = SynthOptions(),
    verify_limit: int = VERIFY_MAX_QUBITS,
) -> tuple[list[BenchRecord], list[BenchSummary]]:
    """Sweep the grid; abort (with the offending seed) if any record fails
    verification."""
    if count < 1:
        raise ValueError("count must be at least 1")
    records: list[BenchRecord] = []
    for n in ns:
        m = resolve_m(m_spec, n)
        for i in range(count):
            seed = base_seed + i
            s = random_sparse_state(n, m, seed)
            for name in orderings:
                records.append(bench_instance(s, name, seed, opts, verify_limit))
    return records, _summarize(records)


def records_to_csv(records: list[BenchRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        fid = "nan" if math.isnan(r.fidelity) else f"{r.fidelity:.12f}"
        lines.append(f"{r.n},{r.m},{r.order},{r.seed},{r.cx},{r.time_ms:.3f},{fid}")
    return "\n".join(lines) + "\n"


def verify_state_circuit(s: SparseState, c: Circuit) -> float:
    """Fidelity of the circuit's output (from the ground state) with s."""
    if c.n != s.n:
        raise ValueError(f"state has {s.n} qubits but circuit has {c.n}")
    return fidelity(s, run_circuit(c, StateVector.ground(c.n)))
