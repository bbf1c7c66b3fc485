"""Walk orders: rooted trees (plus traversal) over the target's nonzero
basis states, produced by the ordering heuristics the synthesis pipeline
compares.

Reverse-time heuristics (the MHS family) make their decisions in the
CX-propagated frame, mirroring what synthesis will do, but record steps in
terms of the original basis states.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .combinat import WeightedBasisGraph, gray_code, hypercube_mst, mst_prim, shp_heuristic
from .core import BasisState, MergeStep, SparseState
from .errors import OrderCoverageError
from .synth import CostFn, Frame, SynthOptions, conj_cx_pairs, make_cost_fn


@dataclass(frozen=True)
class WalkOrder:
    """Splitting-direction merge steps: each step's z1 is already reached
    and its z2 newly reached, so the steps form a tree on m states."""

    root: BasisState
    steps: tuple[MergeStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        reached = {self.root}
        for step in self.steps:
            if step.z1 not in reached:
                raise OrderCoverageError(f"step source {step.z1} not reached yet")
            if step.z2 in reached:
                raise OrderCoverageError(f"step destination {step.z2} reached twice")
            reached.add(step.z2)

    @property
    def m(self) -> int:
        return len(self.steps) + 1

    def states(self) -> list[BasisState]:
        return [self.root] + [step.z2 for step in self.steps]

    def is_linear(self) -> bool:
        return all(
            step.z1 == (self.root if i == 0 else self.steps[i - 1].z2)
            for i, step in enumerate(self.steps)
        )


def _linear_order(path: list[BasisState], targets: list[int | None] | None = None) -> WalkOrder:
    steps = []
    for i in range(len(path) - 1):
        target = targets[i] if targets else None
        steps.append(MergeStep(path[i], path[i + 1], target))
    return WalkOrder(path[0], tuple(steps))


def order_sorted(s: SparseState) -> WalkOrder:
    """Linear path over the basis states in ascending integer order."""
    return _linear_order(sorted(s.basis_states(), key=lambda b: b.value))


def order_random(s: SparseState, seed: int) -> WalkOrder:
    """Linear path over a seeded uniform permutation of the basis states."""
    basis = sorted(s.basis_states(), key=lambda b: b.value)
    perm = np.random.default_rng(seed).permutation(len(basis))
    return _linear_order([basis[i] for i in perm])


def order_mst(s: SparseState) -> WalkOrder:
    """Depth-first preorder over the minimum spanning tree of the basis
    states (hypercube shortcut when the state is fully dense)."""
    basis = s.basis_states()
    if s.m == 1 << s.n:
        parent = hypercube_mst(s.n)
    else:
        parent = mst_prim(WeightedBasisGraph(tuple(basis)))
    children: dict[BasisState, list[BasisState]] = {b: [] for b in parent}
    root = None
    for child, par in parent.items():
        if par is None:
            root = child
        else:
            children[par].append(child)
    assert root is not None
    steps: list[MergeStep] = []
    stack = [root]
    while stack:
        node = stack.pop()
        par = parent[node]
        if par is not None:
            steps.append(MergeStep(par, node))
        stack.extend(sorted(children[node], key=lambda b: b.value, reverse=True))
    return WalkOrder(root, tuple(steps))


def order_shp(s: SparseState) -> WalkOrder:
    """Linear path along the nearest-neighbor Hamiltonian-path heuristic
    (Gray code when the state is fully dense)."""
    if s.m == 1 << s.n:
        return _linear_order(gray_code(s.n))
    path = shp_heuristic(WeightedBasisGraph(tuple(s.basis_states())))
    return _linear_order(path)


# ---------------------------------------------------------------------------
# reverse-time MHS constructions


class _ReverseBuilder:
    """Shared machinery for the reverse-time (merging) constructions."""

    def __init__(self, s: SparseState):
        self.n = s.n
        self.originals = sorted(s.basis_states(), key=lambda b: b.value)
        self.values = [b.value for b in self.originals]
        self.labels = np.array(self.values, dtype=np.int64)
        self.alive_flags = np.ones(len(self.values), dtype=np.uint8)
        self.alive = list(range(len(self.values)))
        self.rev: list[MergeStep] = []

    def separation(self, i: int) -> tuple[int, list[int]]:
        """Hitting-set mask for separating state i from the other live
        states, plus its difference lists."""
        fam = [int(self.labels[j] ^ self.labels[i]) for j in self.alive if j != i]
        return _kernels.auto_hitting_mask(fam, self.n), fam

    def pick_z1(self, forbidden: int | None = None) -> tuple[int, int, list[int]]:
        """State needing the fewest controls to separate; ties prefer the
        one with the most differing bits, then the lowest value."""
        best_key = None
        best = None
        for i in self.alive:
            if i == forbidden:
                continue
            mask, fam = self.separation(i)
            union = 0
            for f in fam:
                union |= f
            key = (mask.bit_count(), -union.bit_count(), self.values[i])
            if best_key is None or key < best_key:
                best_key = key
                best = (i, mask, fam)
        assert best is not None
        return best

    def pick_target(self, mhs_mask: int, family: list[int]) -> int:
        """The hitting-set bit hit by the fewest difference lists."""
        best_q = -1
        best = None
        for q in range(self.n):
            bit = 1 << (self.n - 1 - q)
            if not mhs_mask & bit:
                continue
            freq = sum(1 for f in family if f & bit)
            if best is None or freq < best:
                best = freq
                best_q = q
        return best_q

    def pair_controls(self, i1: int, i2: int, t: int) -> int:
        """Reduced control count of the merge gate absorbing i2 into i1."""
        _, cmask, _ = _kernels.merge_step_decision(
            self.labels, self.alive_flags, i1, i2, t, self.n, True
        )
        return cmask.bit_count()

    def pick_z2(self, i1: int, t: int) -> int:
        """Easiest candidate separated through the target: fewest merge
        controls, then smallest Hamming distance, then lowest value."""
        tbit = 1 << (self.n - 1 - t)
        cands = [j for j in self.alive if j != i1 and (self.labels[j] ^ self.labels[i1]) & tbit]
        return min(
            cands,
            key=lambda j: (
                self.pair_controls(i1, j, t),
                int(self.labels[j] ^ self.labels[i1]).bit_count(),
                self.values[j],
            ),
        )

    def absorb(self, i1: int, i2: int, t: int) -> None:
        self.rev.append(MergeStep(self.originals[i1], self.originals[i2], t))
        self.alive.remove(i2)
        self.alive_flags[i2] = 0
        frame = Frame(self.n, tuple(conj_cx_pairs(int(self.labels[i1]), int(self.labels[i2]), t, self.n)))
        for j in self.alive:
            self.labels[j] = frame.apply_value(int(self.labels[j]))

    def order(self) -> WalkOrder:
        return WalkOrder(self.originals[self.alive[0]], tuple(reversed(self.rev)))


def order_mhs_nonlinear(s: SparseState) -> WalkOrder:
    """Reverse-time order: repeatedly absorb the easiest-to-separate pair.

    Each iteration picks z1 with the smallest hitting set against the
    remaining states, targets its least-frequent hitting-set bit, absorbs
    the candidate whose merge gate needs the fewest controls, then
    propagates the conjugating CXs through the remaining labels.
    """
    b = _ReverseBuilder(s)
    while len(b.alive) > 1:
        i1, mask, fam = b.pick_z1()
        t = b.pick_target(mask, fam)
        i2 = b.pick_z2(i1, t)
        b.absorb(i1, i2, t)
    return b.order()


def order_mhs_linear(s: SparseState) -> WalkOrder:
    """As the nonlinear construction, but each new pair absorbs the
    previous pair's z1, which keeps the walk graph a line.

    With the absorbed state fixed, the target is chosen among the pair's
    differing bits for the fewest merge controls (the same rule synthesis
    applies to steps without a stored target).
    """
    b = _ReverseBuilder(s)
    prev_z1: int | None = None
    while len(b.alive) > 1:
        if prev_z1 is None:
            i1, mask, fam = b.pick_z1()
            t = b.pick_target(mask, fam)
            i2 = b.pick_z2(i1, t)
        else:
            i2 = prev_z1
            i1, _, _ = b.pick_z1(forbidden=i2)
            diff = int(b.labels[i1] ^ b.labels[i2])
            dbits = [q for q in range(b.n) if (diff >> (b.n - 1 - q)) & 1]
            t = min(dbits, key=lambda q: (b.pair_controls(i1, i2, q), q))
        b.absorb(i1, i2, t)
        prev_z1 = i1
    return b.order()


# ---------------------------------------------------------------------------
# greedy insertion and combination


def order_greedy_insertion(s: SparseState, initial: WalkOrder, costfn: CostFn) -> WalkOrder:
    """Insert each state (taken in the initial order) at the linear-path
    position minimizing the synthesized CX count; ties take the earliest
    position.  Never returns an order costing more than `initial`."""
    if not initial.is_linear():
        raise OrderCoverageError("greedy insertion needs a linear initial order")
    if set(initial.states()) != set(s.amplitudes):
        raise OrderCoverageError("initial order does not cover the target basis states")
    sequence = initial.states()
    fast = getattr(costfn, "linear", None)
    path = [sequence[0]]
    for z in sequence[1:]:
        best_path = None
        best_cost = None
        for idx in range(len(path) + 1):
            cand = path[:idx] + [z] + path[idx:]
            if fast is not None:
                cost = fast(s.n, [b.value for b in cand])
            else:
                cost = costfn(s, _linear_order(cand))
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_path = cand
        path = best_path
    result = _linear_order(path)
    if costfn(s, initial) < costfn(s, result):
        return initial
    return result


def order_combined(s: SparseState, a: WalkOrder, b: WalkOrder, costfn: CostFn) -> WalkOrder:
    """Whichever of the two orders synthesizes to fewer CX gates (tie: a)."""
    return a if costfn(s, a) <= costfn(s, b) else b


# ---------------------------------------------------------------------------
# name registry (CLI surface)

ORDERING_NAMES = (
    "sorted",
    "random",
    "mst",
    "shp",
    "mhs-linear",
    "mhs-nonlinear",
    "greedy-sorted",
    "greedy-mhs",
    "combined",
)


def build_order(
    name: str,
    s: SparseState,
    seed: int = 0,
    opts: SynthOptions = SynthOptions(),
) -> WalkOrder:
    """Construct the named walk order for a state.

    `seed` only affects the random baseline; greedy variants count CX under
    the same synthesis options used for the final circuit.
    """
    costfn = make_cost_fn(opts)
    if name == "sorted":
        return order_sorted(s)
    if name == "random":
        return order_random(s, seed)
    if name == "mst":
        return order_mst(s)
    if name == "shp":
        return order_shp(s)
    if name == "mhs-linear":
        return order_mhs_linear(s)
    if name == "mhs-nonlinear":
        return order_mhs_nonlinear(s)
    if name == "greedy-sorted":
        return order_greedy_insertion(s, order_sorted(s), costfn)
    if name == "greedy-mhs":
        return order_greedy_insertion(s, order_mhs_linear(s), costfn)
    if name == "combined":
        linear = order_mhs_linear(s)
        greedy = order_greedy_insertion(s, linear, costfn)
        return order_combined(s, greedy, linear, costfn)
    raise ValueError(f"unknown ordering {name!r}; choose from {ORDERING_NAMES}")
