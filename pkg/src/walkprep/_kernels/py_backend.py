"""Pure-Python/numpy kernels: the fallback backend and reference semantics.

All functions operate on integer-encoded basis labels (bit position
``n - 1 - q`` holds qubit ``q``) and on dense complex128 statevectors whose
index is the big-endian value of the bitstring.  The compiled backend in
``cy_backend.pyx`` implements the same signatures; the two must agree
bit-for-bit on decisions (ties, orderings), which the test suite checks.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

BACKEND = "python"

# auto policy: exact search below these limits, greedy above
EXACT_MAX_SETS = 8
EXACT_MAX_UNIVERSE = 12


# ---------------------------------------------------------------------------
# statevector kernels


def apply_1q(state: np.ndarray, tpos: int, m00, m01, m10, m11) -> None:
    step = 1 << tpos
    idx = np.arange(len(state), dtype=np.int64)
    i0 = idx[(idx & step) == 0]
    i1 = i0 | step
    a0 = state[i0]
    a1 = state[i1]
    state[i0] = m00 * a0 + m01 * a1
    state[i1] = m10 * a0 + m11 * a1


def apply_ctrl_1q(state: np.ndarray, tpos: int, cmask: int, cval: int, m00, m01, m10, m11) -> None:
    step = 1 << tpos
    idx = np.arange(len(state), dtype=np.int64)
    i0 = idx[((idx & cmask) == cval) & ((idx & step) == 0)]
    i1 = i0 | step
    a0 = state[i0]
    a1 = state[i1]
    state[i0] = m00 * a0 + m01 * a1
    state[i1] = m10 * a0 + m11 * a1


def apply_x(state: np.ndarray, tpos: int, cmask: int = 0, cval: int = 0) -> None:
    step = 1 << tpos
    idx = np.arange(len(state), dtype=np.int64)
    i0 = idx[((idx & cmask) == cval) & ((idx & step) == 0)]
    i1 = i0 | step
    state[i0], state[i1] = state[i1].copy(), state[i0].copy()


# ---------------------------------------------------------------------------
# hitting-set kernels


def greedy_hitting_mask(sets, n: int) -> int:
    """Greedy max-coverage hitting set over bitmask sets.

    Repeatedly takes the qubit covering the most not-yet-hit sets; ties go
    to the lowest qubit index.  Returns -1 if a member set is empty.
    """
    unhit = [int(s) for s in sets]
    if any(s == 0 for s in unhit):
        return -1
    result = 0
    while unhit:
        best_q = -1
        best_cover = 0
        for q in range(n):
            bit = 1 << (n - 1 - q)
            cover = sum(1 for s in unhit if s & bit)
            if cover > best_cover:
                best_cover = cover
                best_q = q
        bit = 1 << (n - 1 - best_q)
        result |= bit
        unhit = [s for s in unhit if not (s & bit)]
    return result


def exact_small_hitting_mask(sets, n: int) -> int:
    """Minimum-cardinality hitting set by increasing-size enumeration.

    Among minimum hitting sets returns the lexicographically smallest by
    ascending qubit index.  Returns -1 if a member set is empty.
    """
    masks = [int(s) for s in sets]
    if any(s == 0 for s in masks):
        return -1
    union = 0
    for s in masks:
        union |= s
    qubits = [q for q in range(n) if (union >> (n - 1 - q)) & 1]
    for size in range(len(qubits) + 1):
        for combo in combinations(qubits, size):
            mask = 0
            for q in combo:
                mask |= 1 << (n - 1 - q)
            if all(s & mask for s in masks):
                return mask
    return -1


def auto_hitting_mask(sets, n: int) -> int:
    """Policy dispatcher used by control reduction: exact search when the
    family has at most 8 members over at most 12 universe elements, greedy
    otherwise.  Both solvers are order-independent, so no canonicalization
    is needed."""
    masks = [int(s) for s in sets]
    if not masks:
        return 0
    if any(s == 0 for s in masks):
        return -1
    union = 0
    for s in masks:
        union |= s
    if len(masks) <= EXACT_MAX_SETS and union.bit_count() <= EXACT_MAX_UNIVERSE:
        return exact_small_hitting_mask(masks, n)
    return greedy_hitting_mask(masks, n)


# ---------------------------------------------------------------------------
# merge-step decision and walk-order cost replay


def _lowest_qubit(mask: int, n: int) -> int:
    return n - mask.bit_length()


def _conj_params(a: int, b: int, t: int, n: int) -> tuple[int, int, int, int]:
    """Describe the CX conjugation bringing labels a, b to differ only at t.

    Returns (tbit, rest_mask, pbit, cx_count); pbit is 0 when the pair
    already differs at the target.
    """
    delta = a ^ b
    tbit = 1 << (n - 1 - t)
    if delta & tbit:
        return tbit, delta & ~tbit, 0, delta.bit_count() - 1
    pbit = 1 << (n - 1 - _lowest_qubit(delta, n))
    return tbit, delta, pbit, delta.bit_count() + 1


def _conj_label(x: int, tbit: int, rest: int, pbit: int) -> int:
    if pbit:
        if x & pbit:
            x ^= tbit
    if x & tbit:
        x ^= rest
    return x


def _control_count(labels, alive, i1: int, i2: int, t: int, n: int) -> tuple[int, int]:
    """Reduced control mask and its size for merging z2 (i2) into z1 (i1)."""
    tbit, rest, pbit, _ = _conj_params(int(labels[i1]), int(labels[i2]), t, n)
    z1c = _conj_label(int(labels[i1]), tbit, rest, pbit)
    family = []
    for j in range(len(labels)):
        if not alive[j] or j == i1 or j == i2:
            continue
        d = (_conj_label(int(labels[j]), tbit, rest, pbit) ^ z1c) & ~tbit
        family.append(d)
    cmask = auto_hitting_mask(family, n)
    return cmask, -1 if cmask < 0 else cmask.bit_count()


def merge_step_decision(labels, alive, i1: int, i2: int, tgt: int, n: int, reduce_controls: bool):
    """Pick the merge target qubit and reduced controls for one step.

    Returns (t, control_mask, conj_cx_count).  With control reduction off
    the control mask covers every qubit except the target.
    """
    a = int(labels[i1])
    b = int(labels[i2])
    delta = a ^ b
    full_mask = (1 << n) - 1
    if tgt >= 0:
        t = tgt
    elif not reduce_controls:
        t = _lowest_qubit(delta, n)
    else:
        t = -1
        best = -1
        for q in range(n):
            if not (delta >> (n - 1 - q)) & 1:
                continue
            _, k = _control_count(labels, alive, i1, i2, q, n)
            if best < 0 or k < best:
                best = k
                t = q
    tbit, _, _, conj = _conj_params(a, b, t, n)
    if reduce_controls:
        cmask, _ = _control_count(labels, alive, i1, i2, t, n)
    else:
        cmask = full_mask & ~tbit
    return t, cmask, conj


def conj_apply_labels(labels, alive, a: int, b: int, t: int, n: int) -> None:
    """Apply the step's conjugation frame to every alive label, in place."""
    tbit, rest, pbit, _ = _conj_params(a, b, t, n)
    for j in range(len(labels)):
        if alive[j]:
            labels[j] = _conj_label(int(labels[j]), tbit, rest, pbit)


def walk_cx_cost(states, z1i, z2i, tgts, n: int, btable, reduce_controls: bool, frame: bool) -> int:
    """CX count of the circuit `synthesize` emits for this walk order.

    Replays the merge sequence structurally (labels only, no amplitudes):
    conjugation CXs (doubled when frame propagation is off) plus the
    documented lowering cost of each controlled SU(2) merge gate.
    """
    m = len(states)
    labels = np.array(states, dtype=np.int64)
    alive = np.ones(m, dtype=np.uint8)
    total = 0
    for s in range(m - 2, -1, -1):
        i1 = int(z1i[s])
        i2 = int(z2i[s])
        a = int(labels[i1])
        b = int(labels[i2])
        t, cmask, conj = merge_step_decision(labels, alive, i1, i2, int(tgts[s]), n, reduce_controls)
        total += conj if frame else 2 * conj
        total += int(btable[cmask.bit_count()])
        alive[i2] = 0
        conj_apply_labels(labels, alive, a, b, t, n)
    return total
