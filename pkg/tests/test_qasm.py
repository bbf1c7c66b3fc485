import numpy as np
import pytest

from oracles import random_su2, random_u2
from walkprep.bench import random_sparse_state, verify_state_circuit
from walkprep.circuit import CX, SU2, U2, Circuit, Controlled1Q, PauliX, Phase, Rx
from walkprep.core import SparseState
from walkprep.decomp import lower_circuit
from walkprep.errors import LoweringError, QasmParseError
from walkprep.ordering import order_sorted
from walkprep.qasm import emit_qasm, parse_qasm
from walkprep.sim import StateVector, circuit_unitary, fidelity, run_circuit
from walkprep.synth import synthesize


class TestEmit:
    def test_empty_circuit(self):
        text = emit_qasm(Circuit(2, ()))
        lines = [ln for ln in text.splitlines() if ln]
        assert lines == ['OPENQASM 2.0;', 'include "qelib1.inc";', "qreg q[2];"]

    def test_single_x(self):
        text = emit_qasm(Circuit(3, (PauliX(0),)))
        assert text.splitlines()[-1] == "x q[0];"

    def test_rejects_multicontrolled(self):
        g = Controlled1Q(((0, 1),), 1, Rx(0.2))
        with pytest.raises(LoweringError):
            emit_qasm(Circuit(2, (g,)))


class TestRoundTrip:
    def test_bell(self):
        s = SparseState.from_dict({"00": 2**-0.5, "11": 2**-0.5})
        lowered = lower_circuit(synthesize(s, order_sorted(s)))
        parsed = parse_qasm(emit_qasm(lowered))
        assert fidelity(s, run_circuit(parsed, StateVector.ground(2))) > 1 - 1e-9

    def test_random_lowered_circuits_exact(self, rng):
        for seed in range(10):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(2, min(8, 1 << n) + 1))
            s = random_sparse_state(n, m, seed)
            lowered = lower_circuit(synthesize(s, order_sorted(s)))
            parsed = parse_qasm(emit_qasm(lowered))
            diff = np.max(np.abs(circuit_unitary(parsed) - circuit_unitary(lowered)))
            assert diff < 1e-9

    def test_u2_bodies_keep_global_phase(self, rng):
        for _ in range(10):
            gates = (
                Controlled1Q((), 0, U2.from_matrix(random_u2(rng))),
                Controlled1Q((), 1, Phase(float(rng.uniform(-3, 3)))),
                Controlled1Q((), 0, SU2.from_matrix(random_su2(rng))),
                CX(0, 1),
            )
            c = Circuit(2, gates)
            parsed = parse_qasm(emit_qasm(c))
            assert np.max(np.abs(circuit_unitary(parsed) - circuit_unitary(c))) < 1e-9


class TestParser:
    def test_hand_written_bell(self):
        text = "\n".join(
            [
                "OPENQASM 2.0;",
                'include "qelib1.inc";',
                "qreg q[2];",
                "h q[0];",
                "cx q[0],q[1];",
            ]
        )
        s = SparseState.from_dict({"00": 2**-0.5, "11": 2**-0.5})
        assert verify_state_circuit(s, parse_qasm(text)) > 1 - 1e-9

    def test_pi_expressions(self):
        text = 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nrx(pi/2) q[0];\nrz(-3*pi/4) q[0];\n'
        c = parse_qasm(text)
        assert c.gates[0].body.theta == pytest.approx(np.pi / 2)
        assert c.gates[1].body.theta == pytest.approx(-3 * np.pi / 4)

    def test_comments_and_barriers_ignored(self):
        text = 'OPENQASM 2.0;\nqreg q[1]; // register\n// nothing\nbarrier q[0];\nx q[0];\n'
        c = parse_qasm(text)
        assert c.gates == (PauliX(0),)

    @pytest.mark.parametrize(
        "line,lineno",
        [
            ("y q[0];", 4),
            ("x q[5];", 4),
            ("x r[0];", 4),
            ("rx() q[0];", 4),
            ("measure q[0];", 4),
            ("rx(foo) q[0];", 4),
        ],
    )
    def test_errors_carry_line_numbers(self, line, lineno):
        text = f'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n{line}\n'
        with pytest.raises(QasmParseError) as err:
            parse_qasm(text)
        assert err.value.line == lineno

    def test_missing_register(self):
        with pytest.raises(QasmParseError):
            parse_qasm("OPENQASM 2.0;\nx q[0];\n")

    def test_u3_matches_qelib_convention(self):
        text = 'OPENQASM 2.0;\nqreg q[1];\nu3(pi/2,0,pi) q[0];\n'
        u = circuit_unitary(parse_qasm(text))
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.max(np.abs(u - h)) < 1e-12
