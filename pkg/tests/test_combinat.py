import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_min_hitting_set, brute_min_path_cost, brute_min_spanning_weight
from walkprep.combinat import (
    DiffFamily,
    WeightedBasisGraph,
    exact_hitting_set,
    gray_code,
    greedy_hitting_set,
    hypercube_mst,
    mst_prim,
    path_cost,
    shp_heuristic,
    tree_weight,
)
from walkprep.core import BasisState, hamming_distance
from walkprep.errors import InfeasibleFamilyError, ResourceLimitError

B = BasisState.from_bits


def family(*sets):
    return DiffFamily.from_sets([frozenset(s) for s in sets])


class TestGreedyHittingSet:
    def test_lowest_index_tie(self):
        # ties between {0} and {1} break to the lowest index
        assert greedy_hitting_set(family({0, 1})) == {0}

    def test_empty_family(self):
        assert greedy_hitting_set(DiffFamily.from_sets([])) == set()

    def test_triangle(self):
        hit = greedy_hitting_set(family({0, 1}, {1, 2}, {0, 2}))
        assert len(hit) == 2

    def test_infeasible_rejected_at_construction(self):
        with pytest.raises(InfeasibleFamilyError):
            family({0, 1}, set())

    @given(
        st.lists(
            st.frozensets(st.integers(0, 9), min_size=1, max_size=4),
            min_size=1,
            max_size=8,
        )
    )
    def test_always_hits_and_never_beats_exact(self, sets):
        fam = DiffFamily.from_sets(sets)
        hit = greedy_hitting_set(fam)
        assert all(hit & s for s in fam.sets)
        assert len(hit) >= len(exact_hitting_set(fam))


class TestExactHittingSet:
    def test_triangle_minimum(self):
        assert exact_hitting_set(family({0, 1}, {1, 2}, {0, 2})) == {0, 1}

    def test_forced_singleton(self):
        assert exact_hitting_set(family({3})) == {3}

    def test_disjoint_singletons(self):
        assert exact_hitting_set(family({0}, {1})) == {0, 1}

    def test_matches_brute_force(self, rng):
        for _ in range(300):
            nsets = int(rng.integers(1, 9))
            sets = [
                frozenset(int(x) for x in rng.choice(12, size=int(rng.integers(1, 5)), replace=False))
                for _ in range(nsets)
            ]
            fam = DiffFamily.from_sets(sets)
            got = exact_hitting_set(fam)
            assert all(got & s for s in sets)
            assert len(got) == len(brute_min_hitting_set(sets))

    def test_scale_guard(self):
        big = DiffFamily.from_sets([frozenset({i}) for i in range(21)])
        with pytest.raises(ResourceLimitError):
            exact_hitting_set(big)


class TestMst:
    def test_chain_example(self):
        g = WeightedBasisGraph(tuple(B(b) for b in ("000", "001", "011", "111")))
        parent = mst_prim(g)
        assert tree_weight(parent) == 3
        # the unique weight-3 tree is the chain 000-001-011-111
        edges = {frozenset((c.bits, p.bits)) for c, p in parent.items() if p is not None}
        assert edges == {
            frozenset(("000", "001")),
            frozenset(("001", "011")),
            frozenset(("011", "111")),
        }

    def test_single_node(self):
        parent = mst_prim(WeightedBasisGraph((B("010"),)))
        assert parent == {B("010"): None}
        assert tree_weight(parent) == 0

    def test_two_nodes(self):
        parent = mst_prim(WeightedBasisGraph((B("00"), B("11"))))
        assert tree_weight(parent) == 2

    def test_matches_brute_force(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(2, 7))
            values = rng.choice(1 << n, size=min(m, 1 << n), replace=False)
            nodes = tuple(BasisState(n, int(v)) for v in values)
            got = tree_weight(mst_prim(WeightedBasisGraph(nodes)))
            assert got == brute_min_spanning_weight([int(v) for v in values])


class TestShp:
    def test_chain_example(self):
        g = WeightedBasisGraph(tuple(B(b) for b in ("000", "001", "011", "111")))
        path = shp_heuristic(g)
        assert [b.bits for b in path] == ["000", "001", "011", "111"]
        assert path_cost(path) == 3
        assert brute_min_path_cost([0, 1, 3, 7]) == 3

    def test_single_node(self):
        assert shp_heuristic(WeightedBasisGraph((B("01"),))) == [B("01")]

    def test_one_qubit_pair(self):
        path = shp_heuristic(WeightedBasisGraph((B("0"), B("1"))))
        assert path_cost(path) == 1

    def test_never_below_spanning_tree_bound(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(2, 9))
            values = rng.choice(1 << n, size=min(m, 1 << n), replace=False)
            nodes = tuple(BasisState(n, int(v)) for v in values)
            g = WeightedBasisGraph(nodes)
            assert path_cost(shp_heuristic(g)) >= tree_weight(mst_prim(g))


class TestGrayCode:
    def test_n2(self):
        assert [b.bits for b in gray_code(2)] == ["00", "01", "11", "10"]

    def test_n1(self):
        assert [b.bits for b in gray_code(1)] == ["0", "1"]

    def test_n3(self):
        assert [b.bits for b in gray_code(3)] == [
            "000", "001", "011", "010", "110", "111", "101", "100",
        ]

    @pytest.mark.parametrize("n", range(1, 9))
    def test_permutation_with_unit_steps(self, n):
        seq = gray_code(n)
        assert len({b.value for b in seq}) == 1 << n
        assert seq[0].value == 0
        assert all(hamming_distance(a, b) == 1 for a, b in zip(seq, seq[1:]))


class TestHypercubeMst:
    def test_n1(self):
        parent = hypercube_mst(1)
        assert parent[BasisState(1, 1)] == BasisState(1, 0)

    @pytest.mark.parametrize("n,expected", [(2, 3), (3, 7)])
    def test_weight_matches_hypercube_minimum(self, n, expected):
        parent = hypercube_mst(n)
        assert tree_weight(parent) == expected
        assert all(
            p is None or hamming_distance(c, p) == 1 for c, p in parent.items()
        )
        if n == 2:
            assert brute_min_spanning_weight(list(range(4))) == 3
