"""walkprep: sparse quantum state preparation via quantum-walk compilation.

Compiles sequences of single-edge and self-loop continuous-time quantum
walks into CX + single-qubit circuits, with hitting-set control reduction,
CX frame propagation and a family of walk-order heuristics, plus built-in
exact verification.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .circuit import CX, SU2, U2, Circuit, Controlled1Q, PauliX, Phase, Rx, Ry, Rz
from .core import (
    BasisState,
    EdgeWalk,
    MergeStep,
    SelfLoopWalk,
    SparseState,
    diff_bits,
    hamming_distance,
    load_state,
    save_state,
)
from .ordering import ORDERING_NAMES, WalkOrder, build_order
from .synth import SynthOptions, cx_count, synthesize

__version__ = "0.1.0"

__all__ = [
    "BasisState",
    "CX",
    "Circuit",
    "Controlled1Q",
    "EdgeWalk",
    "KERNEL_BACKEND",
    "MergeStep",
    "ORDERING_NAMES",
    "PauliX",
    "Phase",
    "Rx",
    "Ry",
    "Rz",
    "SU2",
    "SelfLoopWalk",
    "SparseState",
    "SynthOptions",
    "U2",
    "WalkOrder",
    "build_order",
    "cx_count",
    "diff_bits",
    "hamming_distance",
    "load_state",
    "save_state",
    "synthesize",
]
