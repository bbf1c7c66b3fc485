"""Exact reference semantics: dense walk propagators, statevector execution,
fidelity.  Every other module is checked against this one.

Propagators are built analytically from their closed forms, never by a
numerical matrix exponential.  Statevector layout: the index of a bitstring
is its big-endian integer value (qubit 0 = most significant bit).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .circuit import CX, Circuit, Gate, PauliX
from .core import BasisState, EdgeWalk, MergeStep, SelfLoopWalk, SparseState, WalkStep
from .errors import (
    DimensionError,
    InvalidWalkError,
    ResourceLimitError,
    UnsupportedStepError,
)

ORACLE_MAX_QUBITS = 12
STATEVECTOR_MAX_QUBITS = 24


@dataclass(frozen=True)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        if self.n > STATEVECTOR_MAX_QUBITS:
            raise ResourceLimitError(f"statevector limited to {STATEVECTOR_MAX_QUBITS} qubits")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise DimensionError(f"expected {1 << self.n} amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def ground(cls, n: int) -> StateVector:
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @classmethod
    def from_basis(cls, b: BasisState) -> StateVector:
        amps = np.zeros(1 << b.n, dtype=complex)
        amps[b.value] = 1.0
        return cls(b.n, amps)

    @classmethod
    def from_sparse(cls, s: SparseState) -> StateVector:
        amps = np.zeros(1 << s.n, dtype=complex)
        for basis, amp in s.amplitudes.items():
            amps[basis.value] = amp
        return cls(s.n, amps)


def _check_oracle_scale(n: int) -> None:
    if n > ORACLE_MAX_QUBITS:
        raise ResourceLimitError(f"dense oracle limited to {ORACLE_MAX_QUBITS} qubits")


def edge_propagator(j: BasisState, k: BasisState, t: float, n: int) -> np.ndarray:
    """Dense unitary of the single-edge walk exp(-it A(j,k)).

    cos(t) on the {j, k} diagonal, -i sin(t) between them, identity
    elsewhere.
    """
    if j.n != n or k.n != n:
        raise DimensionError("endpoint length does not match qubit count")
    if j == k:
        raise InvalidWalkError("edge walk needs two distinct states")
    _check_oracle_scale(n)
    u = np.eye(1 << n, dtype=complex)
    c, s = np.cos(t), np.sin(t)
    u[j.value, j.value] = c
    u[k.value, k.value] = c
    u[j.value, k.value] = -1j * s
    u[k.value, j.value] = -1j * s
    return u


def self_loop_propagator(j: BasisState, t: float, n: int) -> np.ndarray:
    """Dense unitary of the self-loop walk: exp(-it) at j, 1 elsewhere."""
    if j.n != n:
        raise DimensionError("state length does not match qubit count")
    _check_oracle_scale(n)
    u = np.eye(1 << n, dtype=complex)
    u[j.value, j.value] = np.exp(-1j * t)
    return u


def run_walks(walks: list[WalkStep], psi0: StateVector) -> StateVector:
    """Evolve psi0 through the walk sequence in order.

    Implemented with O(1) sparse updates per walk rather than dense
    matrix products.
    """
    amps = psi0.amps.copy()
    for walk in walks:
        if isinstance(walk, EdgeWalk):
            if walk.j.n != psi0.n:
                raise DimensionError("walk register does not match state")
            c, s = np.cos(walk.t), np.sin(walk.t)
            aj, ak = amps[walk.j.value], amps[walk.k.value]
            amps[walk.j.value] = c * aj - 1j * s * ak
            amps[walk.k.value] = -1j * s * aj + c * ak
        elif isinstance(walk, SelfLoopWalk):
            if walk.j.n != psi0.n:
                raise DimensionError("walk register does not match state")
            amps[walk.j.value] *= np.exp(-1j * walk.t)
        elif isinstance(walk, MergeStep):
            raise UnsupportedStepError("merge steps have no fixed time; synthesize them instead")
        else:
            raise UnsupportedStepError(f"unknown walk step {walk!r}")
    return StateVector(psi0.n, amps)


def _apply_gate(amps: np.ndarray, n: int, gate: Gate) -> None:
    if isinstance(gate, PauliX):
        _kernels.apply_x(amps, n - 1 - gate.qubit)
    elif isinstance(gate, CX):
        cpos = n - 1 - gate.control
        _kernels.apply_x(amps, n - 1 - gate.target, 1 << cpos, 1 << cpos)
    else:
        cmask = 0
        cval = 0
        for q, pol in gate.controls:
            bit = 1 << (n - 1 - q)
            cmask |= bit
            if pol:
                cval |= bit
        m = gate.body.matrix()
        tpos = n - 1 - gate.target
        if cmask:
            _kernels.apply_ctrl_1q(amps, tpos, cmask, cval, m[0, 0], m[0, 1], m[1, 0], m[1, 1])
        else:
            _kernels.apply_1q(amps, tpos, m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def run_circuit(c: Circuit, psi0: StateVector) -> StateVector:
    """Exact statevector after applying the circuit's gates in order."""
    if c.n != psi0.n:
        raise DimensionError("circuit and state have different qubit counts")
    amps = psi0.amps.copy()
    for gate in c.gates:
        _apply_gate(amps, c.n, gate)
    return StateVector(c.n, amps)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary of a circuit (oracle scale only)."""
    _check_oracle_scale(c.n)
    rows = np.eye(1 << c.n, dtype=complex)
    for col in range(1 << c.n):
        for gate in c.gates:
            _apply_gate(rows[col], c.n, gate)
    return rows.T


def fidelity(a: StateVector | SparseState, b: StateVector) -> float:
    """|<a|b>|^2."""
    if isinstance(a, SparseState):
        a = StateVector.from_sparse(a)
    if a.n != b.n:
        raise DimensionError("states have different qubit counts")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)
