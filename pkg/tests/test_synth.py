import numpy as np
import pytest

from oracles import random_su2
from walkprep.bench import random_sparse_state
from walkprep.circuit import CX, SU2, Circuit, Controlled1Q, PauliX, Rx
from walkprep.core import BasisState, MergeStep, SparseState
from walkprep.errors import (
    DegenerateMergeError,
    InfeasibleFamilyError,
    InvalidWalkError,
    LoweringError,
    OrderCoverageError,
)
from walkprep.ordering import WalkOrder, build_order, order_sorted
from walkprep.sim import (
    StateVector,
    circuit_unitary,
    edge_propagator,
    fidelity,
    run_circuit,
    self_loop_propagator,
)
from walkprep.synth import (
    Frame,
    SynthOptions,
    compute_merge_gate,
    convert_edge_walk,
    convert_self_loop_walk,
    cx_count,
    frame_apply,
    reduce_controls,
    synthesize,
    walk_order_cx_cost,
)

B = BasisState.from_bits


class TestConvertEdgeWalk:
    def test_distance_one_structure(self):
        c = convert_edge_walk(B("10"), B("11"), 0.7)
        (gate,) = c.gates
        assert isinstance(gate, Controlled1Q)
        assert gate.target == 1
        assert gate.controls == ((0, 1),)
        assert isinstance(gate.body, Rx) and gate.body.theta == pytest.approx(1.4)

    def test_reference_cx_factor(self):
        u = circuit_unitary(convert_edge_walk(B("10"), B("11"), np.pi / 2))
        assert np.max(np.abs(u - edge_propagator(B("10"), B("11"), np.pi / 2, 2))) < 1e-12

    def test_distance_two_uses_cx10(self):
        c = convert_edge_walk(B("001"), B("111"), 0.3)
        # leading conjugation brings the pair to distance 1 through qubit 0
        assert c.gates[0] == CX(0, 1)
        assert c.gates[-1] == CX(0, 1)
        u = circuit_unitary(c)
        assert np.max(np.abs(u - edge_propagator(B("001"), B("111"), 0.3, 3))) < 1e-10

    def test_matches_propagator(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 5))
            j, k = rng.choice(1 << n, size=2, replace=False)
            j, k = BasisState(n, int(j)), BasisState(n, int(k))
            t = float(rng.uniform(-np.pi, np.pi))
            u = circuit_unitary(convert_edge_walk(j, k, t))
            assert np.max(np.abs(u - edge_propagator(j, k, t, n))) < 1e-10

    def test_rejects_equal(self):
        with pytest.raises(InvalidWalkError):
            convert_edge_walk(B("01"), B("01"), 1.0)


class TestConvertSelfLoopWalk:
    def test_reference_phase_factor(self):
        u = circuit_unitary(convert_self_loop_walk(B("10"), 3 * np.pi / 2))
        assert np.max(np.abs(u - np.diag([1, 1, 1j, 1]))) < 1e-12

    def test_zero_time(self):
        u = circuit_unitary(convert_self_loop_walk(B("011"), 0.0))
        assert np.max(np.abs(u - np.eye(8))) < 1e-12

    def test_all_zero_state_uses_x_conjugation(self):
        c = convert_self_loop_walk(B("000"), 1.1)
        assert isinstance(c.gates[0], PauliX) and isinstance(c.gates[-1], PauliX)
        u = circuit_unitary(c)
        assert np.max(np.abs(u - self_loop_propagator(B("000"), 1.1, 3))) < 1e-12

    def test_matches_propagator(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 5))
            j = BasisState(n, int(rng.integers(0, 1 << n)))
            t = float(rng.uniform(-np.pi, np.pi))
            u = circuit_unitary(convert_self_loop_walk(j, t))
            assert np.max(np.abs(u - self_loop_propagator(j, t, n))) < 1e-10

    def test_zero_partner_variant(self, rng):
        # exact on the subspace where the partner holds no amplitude
        for _ in range(40):
            n = int(rng.integers(2, 5))
            j, z = rng.choice(1 << n, size=2, replace=False)
            j, z = BasisState(n, int(j)), BasisState(n, int(z))
            t = float(rng.uniform(-np.pi, np.pi))
            c = convert_self_loop_walk(j, t, zero_partner=z)
            amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            amps[z.value] = 0
            amps /= np.linalg.norm(amps)
            out = run_circuit(c, StateVector(n, amps))
            expected = self_loop_propagator(j, t, n) @ amps
            assert np.max(np.abs(out.amps - expected)) < 1e-10

    def test_partner_must_differ(self):
        with pytest.raises(InvalidWalkError):
            convert_self_loop_walk(B("01"), 1.0, zero_partner=B("01"))


class TestMergeGate:
    def test_identity_when_no_transfer(self):
        mg = compute_merge_gate(0.8, 0.0)
        assert np.max(np.abs(mg.matrix() - np.eye(2))) < 1e-12

    def test_equal_real_amplitudes(self):
        r = 1 / np.sqrt(2)
        mg = compute_merge_gate(r, r)
        expected = np.array([[r, r], [-r, r]])
        assert np.max(np.abs(mg.matrix() - expected)) < 1e-12
        assert np.allclose(mg.matrix() @ np.array([r, r]), [1, 0], atol=1e-12)

    def test_complex_amplitudes(self):
        a1, a2 = 1j / np.sqrt(2), 1 / np.sqrt(2)
        mg = compute_merge_gate(a1, a2)
        expected = np.array([[-1j, 1], [-1, 1j]]) / np.sqrt(2)
        assert np.max(np.abs(mg.matrix() - expected)) < 1e-12
        out = mg.matrix() @ np.array([a1, a2])
        assert np.allclose(out, [1, 0], atol=1e-12)

    def test_always_cancels_and_stays_special(self, rng):
        for _ in range(100):
            a1 = complex(rng.normal(), rng.normal())
            a2 = complex(rng.normal(), rng.normal())
            mg = compute_merge_gate(a1, a2)
            m = mg.matrix()
            r = np.hypot(abs(a1), abs(a2))
            out = m @ np.array([a1, a2])
            assert abs(out[0] - r) < 1e-12 and abs(out[1]) < 1e-12
            assert abs(np.linalg.det(m) - 1) < 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateMergeError):
            compute_merge_gate(0.0, 0.0)


class TestReduceControls:
    def test_two_state_reduction(self):
        live = {B("001"), B("111")}
        assert reduce_controls(B("111"), 2, live) == ((0, 1),)

    def test_alone_needs_no_controls(self):
        assert reduce_controls(B("0110"), 1, {B("0110")}) == ()

    def test_partner_must_be_excluded(self):
        with pytest.raises(InfeasibleFamilyError):
            reduce_controls(B("00"), 1, {B("00"), B("01")})

    def test_reduced_equals_fully_controlled_on_live_states(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, min(8, 1 << n) + 1))
            values = rng.choice(1 << n, size=m, replace=False)
            live = {BasisState(n, int(v)) for v in values}
            z1 = BasisState(n, int(values[0]))
            target = int(rng.integers(0, n))
            live = {s for s in live if s == z1 or (s.value ^ z1.value) != (1 << (n - 1 - target))}
            controls = reduce_controls(z1, target, live)
            body = SU2.from_matrix(random_su2(rng))
            reduced = Controlled1Q(controls, target, body)
            full = Controlled1Q(
                tuple((q, z1.bit(q)) for q in range(n) if q != target), target, body
            )
            amps = np.zeros(1 << n, dtype=complex)
            coefs = rng.normal(size=len(live)) + 1j * rng.normal(size=len(live))
            for s, cf in zip(sorted(live, key=lambda b: b.value), coefs):
                amps[s.value] = cf
            amps /= np.linalg.norm(amps)
            psi = StateVector(n, amps)
            out_red = run_circuit(Circuit(n, (reduced,)), psi)
            out_full = run_circuit(Circuit(n, (full,)), psi)
            assert np.max(np.abs(out_red.amps - out_full.amps)) < 1e-10


class TestFrame:
    def test_reference_rewrite(self):
        f = Frame(3, ((1, 0),))
        step = frame_apply(f, MergeStep(B("011"), B("110")))
        assert (step.z1.bits, step.z2.bits) == ("111", "010")

    def test_empty_frame(self):
        step = MergeStep(B("01"), B("10"), 1)
        assert frame_apply(Frame(2), step) == step

    def test_double_cx_is_identity(self):
        f = Frame(3, ((1, 0), (1, 0)))
        step = MergeStep(B("011"), B("110"))
        assert frame_apply(f, step) == step

    def test_frame_matches_simulator(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 6))
            pairs = []
            for _ in range(int(rng.integers(1, 6))):
                c, t = rng.choice(n, size=2, replace=False)
                pairs.append((int(c), int(t)))
            f = Frame(n, tuple(pairs))
            b = BasisState(n, int(rng.integers(0, 1 << n)))
            out = run_circuit(Circuit(n, f.gates()), StateVector.from_basis(b))
            assert np.argmax(np.abs(out.amps)) == f.apply(b).value


class TestSynthesize:
    def test_bell_is_one_cx(self):
        s = SparseState.from_dict({"00": 2**-0.5, "11": 2**-0.5})
        c = synthesize(s, order_sorted(s))
        from walkprep.decomp import lower_circuit

        assert cx_count(lower_circuit(c)) == 1
        assert fidelity(s, run_circuit(c, StateVector.ground(2))) > 1 - 1e-12

    @pytest.mark.parametrize("n", range(2, 9))
    def test_ghz_is_linear(self, n):
        s = SparseState.from_dict({"0" * n: 2**-0.5, "1" * n: 2**-0.5})
        from walkprep.decomp import lower_circuit

        c = synthesize(s, order_sorted(s))
        assert cx_count(lower_circuit(c)) == n - 1
        assert fidelity(s, run_circuit(c, StateVector.ground(n))) > 1 - 1e-12

    def test_single_state_is_x_layer(self):
        s = SparseState.from_dict({"0101": 1.0})
        c = synthesize(s, order_sorted(s))
        assert all(isinstance(g, PauliX) for g in c.gates)
        assert cx_count(c) == 0
        assert fidelity(s, run_circuit(c, StateVector.ground(4))) > 1 - 1e-12

    def test_coverage_error(self):
        s = SparseState.from_dict({"00": 2**-0.5, "11": 2**-0.5})
        bad = WalkOrder(B("00"), (MergeStep(B("00"), B("01")),))
        with pytest.raises(OrderCoverageError):
            synthesize(s, bad)

    def test_phases_prepared_exactly(self, rng):
        for seed in range(20):
            s = random_sparse_state(5, 6, seed)
            c = synthesize(s, order_sorted(s))
            out = run_circuit(c, StateVector.ground(5))
            target = StateVector.from_sparse(s)
            # no global-phase slack: amplitudes match entrywise
            assert np.max(np.abs(out.amps - target.amps)) < 1e-9

    def test_option_soundness_and_mirror_removal(self, rng):
        from walkprep.decomp import lower_circuit

        for seed in range(30):
            n, m = 5, int(rng.integers(2, 10))
            s = random_sparse_state(n, m, seed)
            order = order_sorted(s)
            outs = {}
            counts = {}
            for cr in (True, False):
                for fp in (True, False):
                    opts = SynthOptions(cr, fp)
                    c = synthesize(s, order, opts)
                    outs[(cr, fp)] = run_circuit(c, StateVector.ground(n)).amps
                    counts[(cr, fp)] = cx_count(lower_circuit(c))
            base = outs[(True, True)]
            for key, amps in outs.items():
                assert np.max(np.abs(amps - base)) < 1e-9
            # frame propagation only ever removes mirrored CX gates
            assert counts[(True, True)] <= counts[(True, False)]
            assert counts[(False, True)] <= counts[(False, False)]

    def test_cost_function_matches_lowered_count(self, rng):
        from walkprep.decomp import lower_circuit

        for seed in range(20):
            n = int(rng.integers(3, 8))
            m = int(rng.integers(2, min(10, 1 << n) + 1))
            s = random_sparse_state(n, m, seed)
            for name in ("sorted", "mst", "mhs-nonlinear"):
                for cr in (True, False):
                    for fp in (True, False):
                        opts = SynthOptions(cr, fp)
                        order = build_order(name, s, seed, opts)
                        pred = walk_order_cx_cost(s, order, opts)
                        actual = cx_count(lower_circuit(synthesize(s, order, opts)))
                        assert pred == actual


class TestCxCount:
    def test_empty(self):
        assert cx_count(Circuit(2, ())) == 0

    def test_mixed(self):
        c = Circuit(2, (CX(0, 1), PauliX(0), CX(1, 0)))
        assert cx_count(c) == 2

    def test_rejects_unlowered(self):
        g = Controlled1Q(((0, 1),), 1, Rx(0.5))
        with pytest.raises(LoweringError):
            cx_count(Circuit(2, (g,)))
