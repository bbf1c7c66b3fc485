"""Domain types and bit conventions shared by every other module.

Conventions used throughout the package:

* Qubit 0 is the LEFTMOST character of a written bitstring.
* The integer value of a basis state is the big-endian value of its
  bitstring, so qubit 0 is the most significant bit.  This integer is also
  the state's index into a dense statevector.
* ``CX(c, t)`` means control qubit ``c``, target qubit ``t``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DimensionError, StateValidationError

MAX_QUBITS = 24
AMPLITUDE_EPS = 1e-12
NORM_TOL = 1e-10


@dataclass(frozen=True, order=True)
class BasisState:
    """A computational basis vector, identified by a fixed-length bitstring."""

    n: int
    value: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise DimensionError(f"qubit count {self.n} outside [1, {MAX_QUBITS}]")
        if not 0 <= self.value < (1 << self.n):
            raise StateValidationError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: str) -> BasisState:
        if not bits or any(c not in "01" for c in bits):
            raise StateValidationError(f"not a bitstring: {bits!r}")
        return cls(len(bits), int(bits, 2))

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.n}b")

    def bit(self, qubit: int) -> int:
        """Value of the given qubit (0 = leftmost bit of the bitstring)."""
        if not 0 <= qubit < self.n:
            raise DimensionError(f"qubit {qubit} outside register of size {self.n}")
        return (self.value >> (self.n - 1 - qubit)) & 1

    def flip(self, qubit: int) -> BasisState:
        if not 0 <= qubit < self.n:
            raise DimensionError(f"qubit {qubit} outside register of size {self.n}")
        return BasisState(self.n, self.value ^ (1 << (self.n - 1 - qubit)))

    def __str__(self) -> str:
        return self.bits


def qubit_to_bitpos(n: int, qubit: int) -> int:
    """Map a qubit index to its bit position in the integer encoding."""
    return n - 1 - qubit


def hamming_distance(a: BasisState, b: BasisState) -> int:
    """Number of positions where two equal-length basis states differ."""
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} != {b.n}")
    return (a.value ^ b.value).bit_count()


def diff_bits(a: BasisState, b: BasisState, exclude: int | None = None) -> set[int]:
    """Qubit indices where ``a`` and ``b`` differ, minus ``exclude`` if given."""
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} != {b.n}")
    diff = a.value ^ b.value
    out = {q for q in range(a.n) if (diff >> (a.n - 1 - q)) & 1}
    out.discard(exclude)
    return out


@dataclass(frozen=True)
class SparseState:
    """A normalized state with ``m`` nonzero amplitudes on ``n`` qubits.

    Amplitudes are stored keyed by basis state, in ascending basis-value
    order.  Construction rejects near-zero amplitudes instead of dropping
    them, so fidelity accounting never silently loses weight.
    """

    n: int
    amplitudes: dict[BasisState, complex] = field(compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise DimensionError(f"qubit count {self.n} outside [1, {MAX_QUBITS}]")
        if not self.amplitudes:
            raise StateValidationError("state needs at least one nonzero amplitude")
        norm2 = 0.0
        for basis, amp in self.amplitudes.items():
            if basis.n != self.n:
                raise DimensionError(f"basis state {basis} has wrong length for n={self.n}")
            if abs(amp) <= AMPLITUDE_EPS:
                raise StateValidationError(f"amplitude of {basis} below {AMPLITUDE_EPS:g}")
            norm2 += abs(amp) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateValidationError(f"squared norm {norm2} deviates from 1 by more than {NORM_TOL:g}")
        ordered = dict(sorted(self.amplitudes.items(), key=lambda kv: kv[0].value))
        object.__setattr__(self, "amplitudes", ordered)

    @property
    def m(self) -> int:
        return len(self.amplitudes)

    @classmethod
    def from_dict(cls, amplitudes: dict[str, complex]) -> SparseState:
        keys = list(amplitudes)
        if not keys:
            raise StateValidationError("state needs at least one nonzero amplitude")
        n = len(keys[0])
        return cls(n, {BasisState.from_bits(b): complex(a) for b, a in amplitudes.items()})

    def basis_states(self) -> list[BasisState]:
        return list(self.amplitudes)


@dataclass(frozen=True)
class EdgeWalk:
    """Walk on the single edge {j, k}: transfers amplitude for time ``t``."""

    j: BasisState
    k: BasisState
    t: float

    def __post_init__(self):
        if self.j.n != self.k.n:
            raise DimensionError("edge endpoints live on different registers")
        if self.j == self.k:
            from .errors import InvalidWalkError

            raise InvalidWalkError(f"edge walk needs two distinct states, got {self.j} twice")


@dataclass(frozen=True)
class SelfLoopWalk:
    """Walk on a single self-loop: applies phase exp(-it) to ``j``."""

    j: BasisState
    t: float


@dataclass(frozen=True)
class MergeStep:
    """One splitting step of a walk order: ``z1`` (reached) feeds ``z2`` (new).

    ``target``, when set, is the qubit the merge rotation acts on; the two
    states need not differ there, CX conjugation handles the rest.
    """

    z1: BasisState
    z2: BasisState
    target: int | None = None

    def __post_init__(self):
        if self.z1.n != self.z2.n:
            raise DimensionError("merge endpoints live on different registers")
        if self.z1 == self.z2:
            raise StateValidationError(f"merge step needs two distinct states, got {self.z1} twice")
        if self.target is not None and not 0 <= self.target < self.z1.n:
            raise DimensionError(f"target qubit {self.target} outside register of size {self.z1.n}")


WalkStep = EdgeWalk | SelfLoopWalk | MergeStep


def state_to_json(state: SparseState) -> str:
    """Serialize to the CLI text format: ``n`` plus bitstring -> [re, im]."""
    doc = {
        "n": state.n,
        "amplitudes": {b.bits: [a.real, a.imag] for b, a in state.amplitudes.items()},
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def state_from_json(text: str) -> SparseState:
    """Parse the CLI text format, rejecting malformed documents."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateValidationError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "amplitudes" not in doc:
        raise StateValidationError("document must have fields 'n' and 'amplitudes'")
    n = doc["n"]
    if not isinstance(n, int):
        raise StateValidationError("'n' must be an integer")
    raw = doc["amplitudes"]
    if not isinstance(raw, dict):
        raise StateValidationError("'amplitudes' must be an object keyed by bitstring")
    amps: dict[BasisState, complex] = {}
    for bits, pair in raw.items():
        if len(bits) != n:
            raise StateValidationError(f"key {bits!r} does not have length n={n}")
        if not (isinstance(pair, list) and len(pair) == 2):
            raise StateValidationError(f"value for {bits!r} must be a [real, imag] pair")
        amps[BasisState.from_bits(bits)] = complex(pair[0], pair[1])
    return SparseState(n, amps)


def load_state(path: str) -> SparseState:
    with open(path, encoding="utf-8") as fh:
        return state_from_json(fh.read())


def save_state(state: SparseState, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_to_json(state) + "\n")
