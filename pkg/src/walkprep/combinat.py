"""Combinatorial solvers behind the synthesis pipeline: hitting sets,
Hamming-distance MST, Hamiltonian-path heuristic, Gray code and hypercube
shortcuts.

All tie-breaks resolve toward the lowest qubit index / lowest integer basis
value so benchmark runs are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .core import BasisState, hamming_distance
from .errors import InfeasibleFamilyError, ResourceLimitError

EXACT_UNIVERSE_LIMIT = 20


@dataclass(frozen=True)
class DiffFamily:
    """A family of "differing-bit" sets over a qubit universe.

    An empty member makes the instance infeasible and is rejected here.
    """

    universe: frozenset[int]
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for s in self.sets:
            if not s:
                raise InfeasibleFamilyError("family contains an empty member set")
            if not s <= self.universe:
                raise InfeasibleFamilyError(f"member {sorted(s)} not contained in the universe")

    @classmethod
    def from_sets(cls, sets) -> DiffFamily:
        sets = [frozenset(s) for s in sets]
        universe = frozenset().union(*sets) if sets else frozenset()
        return cls(universe, tuple(sets))


def _family_masks(d: DiffFamily, n: int) -> list[int]:
    out = []
    for s in d.sets:
        mask = 0
        for q in s:
            mask |= 1 << (n - 1 - q)
        out.append(mask)
    return out


def _mask_width(d: DiffFamily) -> int:
    return max(d.universe, default=0) + 1


def _mask_to_set(mask: int, n: int) -> set[int]:
    return {q for q in range(n) if (mask >> (n - 1 - q)) & 1}


def greedy_hitting_set(d: DiffFamily) -> set[int]:
    """Max-coverage greedy: repeatedly take the element hitting the most
    not-yet-hit sets (ties to the lowest index)."""
    if not d.sets:
        return set()
    n = _mask_width(d)
    mask = _kernels.greedy_hitting_mask(_family_masks(d, n), n)
    return _mask_to_set(mask, n)


def exact_hitting_set(d: DiffFamily) -> set[int]:
    """A minimum-cardinality hitting set by branch and bound.

    Branches on the elements of the smallest not-yet-hit set, exploring
    elements in ascending order, so the result is deterministic.
    """
    if len(d.universe) > EXACT_UNIVERSE_LIMIT:
        raise ResourceLimitError(f"exact solver limited to universes of {EXACT_UNIVERSE_LIMIT} elements")
    sets = sorted({s for s in d.sets}, key=lambda s: (len(s), sorted(s)))
    if not sets:
        return set()

    best: set[int] | None = set(greedy_hitting_set(d))

    def search(chosen: set[int], remaining: list[frozenset[int]]) -> None:
        nonlocal best
        remaining = [s for s in remaining if not (s & chosen)]
        if not remaining:
            if best is None or len(chosen) < len(best):
                best = set(chosen)
            return
        if best is not None and len(chosen) + 1 >= len(best):
            return
        pivot = min(remaining, key=lambda s: (len(s), sorted(s)))
        for e in sorted(pivot):
            search(chosen | {e}, remaining)

    search(set(), sets)
    assert best is not None
    return best


def auto_hitting_set(d: DiffFamily) -> set[int]:
    """Policy used by control reduction: exact on small instances
    (at most 8 distinct sets over at most 12 elements), greedy otherwise."""
    if not d.sets:
        return set()
    n = _mask_width(d)
    mask = _kernels.auto_hitting_mask(_family_masks(d, n), n)
    return _mask_to_set(mask, n)


@dataclass(frozen=True)
class WeightedBasisGraph:
    """Complete graph over basis states, edges weighted by Hamming distance."""

    nodes: tuple[BasisState, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise ValueError("graph needs at least one node")
        if len({b.n for b in self.nodes}) != 1:
            raise ValueError("all nodes must have the same qubit count")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate nodes")

    def weight(self, u: BasisState, v: BasisState) -> int:
        return hamming_distance(u, v)


def mst_prim(g: WeightedBasisGraph) -> dict[BasisState, BasisState | None]:
    """Minimum spanning tree as a parent mapping (root maps to None).

    Prim's algorithm in O(m^2), seeded at the lowest-integer node; equal
    weights resolve toward the lowest node value, then the lowest parent.
    """
    nodes = sorted(g.nodes, key=lambda b: b.value)
    root = nodes[0]
    parent: dict[BasisState, BasisState | None] = {root: None}
    dist = {v: hamming_distance(root, v) for v in nodes[1:]}
    best_par = {v: root for v in nodes[1:]}
    while dist:
        u = min(dist, key=lambda v: (dist[v], v.value))
        parent[u] = best_par[u]
        del dist[u]
        for v in dist:
            w = hamming_distance(u, v)
            if w < dist[v] or (w == dist[v] and u.value < best_par[v].value):
                dist[v] = w
                best_par[v] = u
    return parent


def tree_weight(parent: dict[BasisState, BasisState | None]) -> int:
    return sum(hamming_distance(child, par) for child, par in parent.items() if par is not None)


def shp_heuristic(g: WeightedBasisGraph, start: BasisState | None = None) -> list[BasisState]:
    """Approximate shortest Hamiltonian path: nearest-neighbor from each
    candidate start (or the given one), keeping the cheapest path found.

    Ties resolve to the lowest integer value, for both the next hop and the
    winning start.
    """
    nodes = sorted(g.nodes, key=lambda b: b.value)
    if len(nodes) == 1:
        return list(nodes)
    starts = [start] if start is not None else nodes

    def nn_path(s: BasisState) -> tuple[int, list[BasisState]]:
        path = [s]
        left = [v for v in nodes if v != s]
        cost = 0
        while left:
            cur = path[-1]
            nxt = min(left, key=lambda v: (hamming_distance(cur, v), v.value))
            cost += hamming_distance(cur, nxt)
            path.append(nxt)
            left.remove(nxt)
        return cost, path

    best_cost, best_path = None, None
    for s in starts:
        cost, path = nn_path(s)
        if best_cost is None or cost < best_cost:
            best_cost, best_path = cost, path
    assert best_path is not None
    return best_path


def path_cost(path: list[BasisState]) -> int:
    return sum(hamming_distance(a, b) for a, b in zip(path, path[1:]))


def gray_code(n: int) -> list[BasisState]:
    """Reflected binary Gray sequence over all 2^n bitstrings."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return [BasisState(n, i ^ (i >> 1)) for i in range(1 << n)]


def hypercube_mst(n: int) -> dict[BasisState, BasisState | None]:
    """Spanning tree of the full hypercube, branching off sequentially in
    each dimension: the parent of x clears its most significant set bit."""
    if n < 1:
        raise ValueError("need at least one qubit")
    parent: dict[BasisState, BasisState | None] = {BasisState(n, 0): None}
    for v in range(1, 1 << n):
        parent[BasisState(n, v)] = BasisState(n, v & ~(1 << (v.bit_length() - 1)))
    return parent
