"""The core compiler: converts walk sequences and walk orders into circuits,
with CX conjugation, hitting-set control reduction, CX frame propagation and
merge-gate computation.

``synthesize`` processes a walk order in the reverse (merging) direction,
keeping a live table of basis labels and amplitudes.  Decisions (target
choice, conjugation, control reduction) are always made in the propagated
frame; the ``frame_propagation`` option only controls whether the mirror
branch of the conjugating CXs is dropped against the all-zeros state or
emitted as a block before the initial X layer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

import numpy as np

from . import _kernels
from .circuit import CX, SU2, Circuit, Controlled1Q, Gate, PauliX, Phase, Rx, Rz
from .combinat import DiffFamily, auto_hitting_set
from .core import BasisState, MergeStep, SparseState, diff_bits
from .decomp import su2_lowered_cx
from .errors import (
    DegenerateMergeError,
    InfeasibleFamilyError,
    InvalidWalkError,
    LoweringError,
    OrderCoverageError,
    WalkprepError,
)

if TYPE_CHECKING:
    from .ordering import WalkOrder


@dataclass(frozen=True)
class SynthOptions:
    control_reduction: bool = True
    frame_propagation: bool = True


DEFAULT_OPTIONS = SynthOptions()


@dataclass(frozen=True)
class Frame:
    """An accumulated CX sequence acting as a basis relabeling."""

    n: int
    cxs: tuple[tuple[int, int], ...] = ()

    def apply_value(self, v: int) -> int:
        for control, target in self.cxs:
            if (v >> (self.n - 1 - control)) & 1:
                v ^= 1 << (self.n - 1 - target)
        return v

    def apply(self, b: BasisState) -> BasisState:
        return BasisState(self.n, self.apply_value(b.value))

    def extend(self, pairs) -> Frame:
        return Frame(self.n, self.cxs + tuple(pairs))

    def gates(self) -> list[Gate]:
        return [CX(c, t) for c, t in self.cxs]


def frame_apply(f: Frame, step: MergeStep) -> MergeStep:
    """Map both endpoints of a merge step through the frame bijection."""
    return MergeStep(f.apply(step.z1), f.apply(step.z2), step.target)


def conj_cx_pairs(a: int, b: int, target: int, n: int) -> list[tuple[int, int]]:
    """CX pairs (control, target qubit) that bring labels a, b to differ
    only at `target`.

    When the pair already differs there, the conjugation is controlled on
    the target qubit; otherwise one extra CX first routes the difference
    through the target.
    """
    delta = a ^ b
    tbit = 1 << (n - 1 - target)
    if delta & tbit:
        rest = delta & ~tbit
        return [(target, q) for q in range(n) if (rest >> (n - 1 - q)) & 1]
    pivot = n - delta.bit_length()
    return [(pivot, target)] + [(target, q) for q in range(n) if (delta >> (n - 1 - q)) & 1]


def _apply_pairs(v: int, pairs, n: int) -> int:
    for control, target in pairs:
        if (v >> (n - 1 - control)) & 1:
            v ^= 1 << (n - 1 - target)
    return v


# ---------------------------------------------------------------------------
# walk-to-circuit conversions


def convert_edge_walk(j: BasisState, k: BasisState, t: float) -> Circuit:
    """Circuit for the single-edge walk exp(-it A(j,k)); exactly equals the
    propagator.

    Distance-1 pairs become one controlled Rx(2t) on the differing bit; at
    larger Hamming distance the rotation is conjugated by CX gates whose
    control is the rotation target.
    """
    if j == k:
        raise InvalidWalkError("edge walk needs two distinct states")
    n = j.n
    delta = sorted(diff_bits(j, k))
    tq = delta[0]
    pairs = conj_cx_pairs(j.value, k.value, tq, n)
    j2 = _apply_pairs(j.value, pairs, n)
    controls = tuple((q, (j2 >> (n - 1 - q)) & 1) for q in range(n) if q != tq)
    gates: list[Gate] = [CX(c, d) for c, d in pairs]
    gates.append(Controlled1Q(controls, tq, Rx(2 * t)))
    gates += [CX(c, d) for c, d in reversed(pairs)]
    return Circuit(n, gates)


def convert_self_loop_walk(j: BasisState, t: float, zero_partner: BasisState | None = None) -> Circuit:
    """Circuit applying phase exp(-it) to basis state j.

    Without a partner this is a controlled phase gate targeting a 1-bit of
    j (X-conjugated when j is all zeros) and is exact.  With a promised
    zero-amplitude partner it becomes a CX-conjugated controlled Rz, exact
    on the subspace where the partner carries no amplitude.
    """
    n = j.n
    if zero_partner is None:
        if j.value == 0:
            flipped = j.flip(0)
            controls = tuple((q, flipped.bit(q)) for q in range(1, n))
            inner = Controlled1Q(controls, 0, Phase(-t))
            return Circuit(n, [PauliX(0), inner, PauliX(0)])
        tq = min(q for q in range(n) if j.bit(q))
        controls = tuple((q, j.bit(q)) for q in range(n) if q != tq)
        return Circuit(n, [Controlled1Q(controls, tq, Phase(-t))])
    if zero_partner == j:
        raise InvalidWalkError("zero-amplitude partner must differ from the walk vertex")
    tq = min(diff_bits(j, zero_partner))
    pairs = conj_cx_pairs(j.value, zero_partner.value, tq, n)
    j2 = _apply_pairs(j.value, pairs, n)
    controls = tuple((q, (j2 >> (n - 1 - q)) & 1) for q in range(n) if q != tq)
    theta = 2 * t if (j2 >> (n - 1 - tq)) & 1 == 0 else -2 * t
    gates: list[Gate] = [CX(c, d) for c, d in pairs]
    gates.append(Controlled1Q(controls, tq, Rz(theta)))
    gates += [CX(c, d) for c, d in reversed(pairs)]
    return Circuit(n, gates)


# ---------------------------------------------------------------------------
# merge gates and control reduction


@dataclass(frozen=True)
class MergeGate:
    """SU(2) action sending the amplitude pair (a1, a2) to (r, 0), r >= 0."""

    gate: SU2
    a1: complex
    a2: complex
    r: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", math.hypot(abs(self.a1), abs(self.a2)))

    def matrix(self) -> np.ndarray:
        return self.gate.matrix()


def compute_merge_gate(a1: complex, a2: complex) -> MergeGate:
    """Canonical SU(2) merge: M = [[a1*, a2*], [-a2, a1]] / r."""
    r = math.hypot(abs(a1), abs(a2))
    if r <= 1e-300:
        raise DegenerateMergeError("both amplitudes are zero")
    return MergeGate(SU2(complex(a1).conjugate() / r, complex(a2).conjugate() / r), a1, a2)


def reduce_controls(z1: BasisState, target: int, live: set[BasisState]) -> tuple[tuple[int, int], ...]:
    """Smallest sufficient control set for a gate that must act on z1 only.

    Controls are a hitting set of the differing-bit family D = {diff(s, z1)
    minus target : s in live minus z1}, with polarities equal to z1's bits.
    The caller must have excluded the merge partner from `live`.
    """
    if z1 not in live:
        raise OrderCoverageError("z1 must be a live state")
    others = sorted(live - {z1}, key=lambda b: b.value)
    sets = []
    for s in others:
        d = diff_bits(s, z1, exclude=target)
        if not d:
            raise InfeasibleFamilyError(f"live state {s} differs from {z1} only at the target qubit")
        sets.append(d)
    hit = auto_hitting_set(DiffFamily.from_sets(sets))
    return tuple((q, z1.bit(q)) for q in sorted(hit))


# ---------------------------------------------------------------------------
# the conversion pipeline (walk order -> circuit)


def _su2_x_conjugate(g: SU2) -> SU2:
    return SU2(g.a.conjugate(), -g.b.conjugate())


def synthesize(s: SparseState, order: "WalkOrder", opts: SynthOptions = DEFAULT_OPTIONS) -> Circuit:
    """Compile a walk order for the target state into a circuit.

    Merge steps run in reverse; each brings its pair to Hamming distance 1
    (CX conjugation absorbed into the frame), transfers the absorbed
    state's amplitude with a controlled SU(2) merge gate under hitting-set
    control reduction, and updates the live table.  The returned circuit is
    the inverse of the merging circuit and prepares the state from the
    ground state with fidelity >= 1 - 1e-9.
    """
    n = s.n
    states = [order.root] + [step.z2 for step in order.steps]
    if len(states) != len(set(states)) or set(states) != set(s.amplitudes):
        raise OrderCoverageError("walk order does not cover exactly the target basis states")
    index = {b: i for i, b in enumerate(states)}
    labels = np.array([b.value for b in states], dtype=np.int64)
    alive = np.ones(len(states), dtype=np.uint8)
    amp: dict[int, complex] = {i: s.amplitudes[b] for i, b in enumerate(states)}
    gates: list[Gate] = []
    frame_pairs: list[tuple[int, int]] = []
    for step in reversed(order.steps):
        i1, i2 = index[step.z1], index[step.z2]
        if not (alive[i1] and alive[i2]):
            raise OrderCoverageError("merge step references an absorbed state")
        a, b = int(labels[i1]), int(labels[i2])
        tgt = -1 if step.target is None else step.target
        t, cmask, _ = _kernels.merge_step_decision(labels, alive, i1, i2, tgt, n, opts.control_reduction)
        pairs = conj_cx_pairs(a, b, t, n)
        gates += [CX(c, d) for c, d in pairs]
        cz1 = _apply_pairs(a, pairs, n)
        merge = compute_merge_gate(amp[i1], amp[i2])
        body = merge.gate if (cz1 >> (n - 1 - t)) & 1 == 0 else _su2_x_conjugate(merge.gate)
        controls = tuple((q, (cz1 >> (n - 1 - q)) & 1) for q in range(n) if (cmask >> (n - 1 - q)) & 1)
        gates.append(Controlled1Q(controls, t, body))
        amp[i1] = merge.r
        del amp[i2]
        alive[i2] = 0
        _kernels.conj_apply_labels(labels, alive, a, b, t, n)
        frame_pairs += pairs
    (root_amp,) = amp.values()
    # every merge leaves a real nonnegative amplitude, so after the last one
    # the survivor holds exactly 1; with no merges only the modulus is fixed
    # (the lone amplitude may carry a global phase, which fidelity ignores)
    deviation = abs(root_amp - 1.0) if order.steps else abs(abs(root_amp) - 1.0)
    if deviation > 1e-9:
        raise WalkprepError(f"merge chain left amplitude {root_amp}, expected 1")
    croot = int(labels[0])
    if opts.frame_propagation:
        final_bits = croot
    else:
        gates += [CX(c, d) for c, d in reversed(frame_pairs)]
        final_bits = order.root.value
    gates += [PauliX(q) for q in range(n) if (final_bits >> (n - 1 - q)) & 1]
    return Circuit(n, gates).inverse()


def cx_count(c: Circuit) -> int:
    """Number of CX gates in a fully lowered circuit."""
    count = 0
    for gate in c.gates:
        if isinstance(gate, CX):
            count += 1
        elif isinstance(gate, Controlled1Q) and gate.controls:
            raise LoweringError("circuit is not fully lowered")
    return count


def walk_order_cx_cost(s: SparseState, order: "WalkOrder", opts: SynthOptions = DEFAULT_OPTIONS) -> int:
    """CX count of synthesize + lowering for this order, without building
    gates.  Kernel-backed; equals cx_count(lower_circuit(synthesize(...)))."""
    n = s.n
    states = [order.root] + [step.z2 for step in order.steps]
    if len(states) != len(set(states)) or not set(states) <= set(s.amplitudes):
        raise OrderCoverageError("walk order visits states outside the target basis")
    index = {b: i for i, b in enumerate(states)}
    z1i = np.array([index[st.z1] for st in order.steps], dtype=np.int64)
    z2i = np.array([index[st.z2] for st in order.steps], dtype=np.int64)
    tgts = np.array([-1 if st.target is None else st.target for st in order.steps], dtype=np.int64)
    values = np.array([b.value for b in states], dtype=np.int64)
    btable = np.array([su2_lowered_cx(k) for k in range(n + 1)], dtype=np.int64)
    return int(
        _kernels.walk_cx_cost(values, z1i, z2i, tgts, n, btable, opts.control_reduction, opts.frame_propagation)
    )


CostFn = Callable[[SparseState, "WalkOrder"], int]


class _DefaultCostFn:
    """Default circuit CX counter used by the greedy orderings.

    Besides the (state, order) call, exposes ``linear`` for raw linear
    paths so greedy insertion can skip building step objects in its inner
    loop; both routes share the same kernel.
    """

    def __init__(self, opts: SynthOptions):
        self.opts = opts
        self._arange = np.arange(2, dtype=np.int64)
        self._no_tgt = np.full(1, -1, dtype=np.int64)
        self._btables: dict[int, np.ndarray] = {}

    def __call__(self, s: SparseState, order: "WalkOrder") -> int:
        return walk_order_cx_cost(s, order, self.opts)

    def _btable(self, n: int) -> np.ndarray:
        if n not in self._btables:
            self._btables[n] = np.array([su2_lowered_cx(k) for k in range(n + 1)], dtype=np.int64)
        return self._btables[n]

    def linear(self, n: int, values: list[int]) -> int:
        m = len(values)
        if m <= 1:
            return 0
        if m > len(self._arange):
            self._arange = np.arange(2 * m, dtype=np.int64)
            self._no_tgt = np.full(2 * m, -1, dtype=np.int64)
        return int(
            _kernels.walk_cx_cost(
                np.array(values, dtype=np.int64),
                self._arange[: m - 1],
                self._arange[1:m],
                self._no_tgt[: m - 1],
                n,
                self._btable(n),
                self.opts.control_reduction,
                self.opts.frame_propagation,
            )
        )


def make_cost_fn(opts: SynthOptions = DEFAULT_OPTIONS) -> CostFn:
    """Default circuit CX counter used by the greedy orderings."""
    return _DefaultCostFn(opts)
