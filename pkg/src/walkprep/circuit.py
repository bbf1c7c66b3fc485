"""Gates and circuits.

A circuit is an ordered gate sequence over ``n`` qubits.  Gates are X, CX
and multi-controlled single-qubit unitaries with per-control polarity; the
controlled body carries a tag (Rx/Ry/Rz/P/SU2/U2) so lowering can route it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, StateValidationError

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class Rx:
    theta: float

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])

    def adjoint(self) -> Rx:
        return Rx(-self.theta)


@dataclass(frozen=True)
class Ry:
    theta: float

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)

    def adjoint(self) -> Ry:
        return Ry(-self.theta)


@dataclass(frozen=True)
class Rz:
    theta: float

    def matrix(self) -> np.ndarray:
        return np.array([[cmath.exp(-0.5j * self.theta), 0], [0, cmath.exp(0.5j * self.theta)]])

    def adjoint(self) -> Rz:
        return Rz(-self.theta)


@dataclass(frozen=True)
class Phase:
    """The phase gate P: diag(1, exp(i theta)).  Not special unitary."""

    theta: float

    def matrix(self) -> np.ndarray:
        return np.array([[1, 0], [0, cmath.exp(1j * self.theta)]])

    def adjoint(self) -> Phase:
        return Phase(-self.theta)


@dataclass(frozen=True)
class SU2:
    """[[a, b], [-conj(b), conj(a)]] with |a|^2 + |b|^2 = 1 (determinant 1)."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0) > UNITARY_TOL:
            raise StateValidationError("SU2 parameters must satisfy |a|^2 + |b|^2 = 1")

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> SU2:
        mat = np.asarray(mat, dtype=complex)
        if abs(np.linalg.det(mat) - 1.0) > 1e-10:
            raise StateValidationError("matrix is not special unitary")
        return cls(complex(mat[0, 0]), complex(mat[0, 1]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [-self.b.conjugate(), self.a.conjugate()]])

    def adjoint(self) -> SU2:
        return SU2(self.a.conjugate(), -self.b)


@dataclass(frozen=True)
class U2:
    """An arbitrary 2x2 unitary body."""

    mat: tuple[tuple[complex, complex], tuple[complex, complex]]

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> U2:
        mat = np.asarray(mat, dtype=complex)
        return cls(((complex(mat[0, 0]), complex(mat[0, 1])), (complex(mat[1, 0]), complex(mat[1, 1]))))

    def matrix(self) -> np.ndarray:
        return np.array(self.mat)

    def adjoint(self) -> U2:
        return U2.from_matrix(self.matrix().conj().T)


Body = Rx | Ry | Rz | Phase | SU2 | U2


def _check_unitary(mat: np.ndarray) -> None:
    if np.max(np.abs(mat @ mat.conj().T - np.eye(2))) > 10 * UNITARY_TOL:
        raise StateValidationError("gate body is not unitary")


@dataclass(frozen=True)
class PauliX:
    qubit: int


@dataclass(frozen=True)
class CX:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise DimensionError("CX control and target must differ")


@dataclass(frozen=True)
class Controlled1Q:
    """Apply ``body`` to ``target`` when every control matches its polarity.

    ``controls`` is a sequence of (qubit, polarity) pairs; zero controls make
    this a plain single-qubit gate.
    """

    controls: tuple[tuple[int, int], ...]
    target: int
    body: Body

    def __post_init__(self):
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits) or self.target in qubits:
            raise DimensionError("control qubits must be pairwise distinct and differ from target")
        if any(p not in (0, 1) for _, p in self.controls):
            raise StateValidationError("control polarity must be 0 or 1")
        _check_unitary(self.body.matrix())


Gate = PauliX | CX | Controlled1Q


def gate_qubits(gate: Gate) -> list[int]:
    if isinstance(gate, PauliX):
        return [gate.qubit]
    if isinstance(gate, CX):
        return [gate.control, gate.target]
    return [q for q, _ in gate.controls] + [gate.target]


def inverse_gate(gate: Gate) -> Gate:
    if isinstance(gate, (PauliX, CX)):
        return gate
    return Controlled1Q(gate.controls, gate.target, gate.body.adjoint())


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            bad = [q for q in gate_qubits(gate) if not 0 <= q < self.n]
            if bad:
                raise DimensionError(f"gate {gate} uses qubits {bad} outside register of size {self.n}")

    def inverse(self) -> Circuit:
        return Circuit(self.n, tuple(inverse_gate(g) for g in reversed(self.gates)))

    def concat(self, other: Circuit) -> Circuit:
        if other.n != self.n:
            raise DimensionError("cannot concatenate circuits of different widths")
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)
