"""OpenQASM 2.0 emission and a bundled parser for round-trips.

Only fully lowered circuits are emitted, using {x, cx, rx, ry, rz, u1, u3}.
SU(2) bodies become an exact rz/ry/rz triplet; general U(2) bodies
additionally carry their determinant phase via the u1-x-u1-x idiom, so the
round-trip preserves the circuit unitary including global phase.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import CX, SU2, U2, Circuit, Controlled1Q, Gate, PauliX, Phase, Rx, Ry, Rz
from .decomp import zyz_angles
from .errors import LoweringError, QasmParseError

_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def _fmt(x: float) -> str:
    return repr(float(x))


def _su2_lines(mat: np.ndarray, q: str) -> list[str]:
    _, beta, gamma, delta = zyz_angles(mat)
    lines = []
    if delta != 0.0:
        lines.append(f"rz({_fmt(delta)}) {q};")
    if gamma != 0.0:
        lines.append(f"ry({_fmt(gamma)}) {q};")
    if beta != 0.0:
        lines.append(f"rz({_fmt(beta)}) {q};")
    return lines


def _gate_lines(gate: Gate) -> list[str]:
    if isinstance(gate, PauliX):
        return [f"x q[{gate.qubit}];"]
    if isinstance(gate, CX):
        return [f"cx q[{gate.control}],q[{gate.target}];"]
    if gate.controls:
        raise LoweringError("cannot emit a multi-controlled gate; lower the circuit first")
    q = f"q[{gate.target}]"
    body = gate.body
    if isinstance(body, Rx):
        return [f"rx({_fmt(body.theta)}) {q};"]
    if isinstance(body, Ry):
        return [f"ry({_fmt(body.theta)}) {q};"]
    if isinstance(body, Rz):
        return [f"rz({_fmt(body.theta)}) {q};"]
    if isinstance(body, Phase):
        return [f"u1({_fmt(body.theta)}) {q};"]
    if isinstance(body, SU2):
        return _su2_lines(body.matrix(), q)
    mat = body.matrix()
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    phase = cmath.phase(det) / 2
    lines = _su2_lines(mat * cmath.exp(-1j * phase), q)
    if abs(phase) > 1e-15:
        lines += [f"x {q};", f"u1({_fmt(phase)}) {q};", f"x {q};", f"u1({_fmt(phase)}) {q};"]
    return lines


def emit_qasm(c: Circuit) -> str:
    """Serialize a fully lowered circuit to OpenQASM 2.0 text."""
    lines = [_HEADER + f"qreg q[{c.n}];"]
    for gate in c.gates:
        lines += _gate_lines(gate)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser


def _eval_param(expr: str, lineno: int) -> float:
    allowed = set("0123456789.+-*/()e ")
    cleaned = expr.replace("pi", "")
    if not set(cleaned) <= allowed:
        raise QasmParseError(f"cannot evaluate parameter {expr!r}", lineno)
    try:
        return float(eval(expr, {"__builtins__": {}}, {"pi": math.pi}))  # noqa: S307
    except Exception as exc:
        raise QasmParseError(f"cannot evaluate parameter {expr!r}: {exc}", lineno) from exc


def _u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ]
    )


_H = U2.from_matrix(np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def parse_qasm(text: str) -> Circuit:
    """Parse the gate subset this package emits (plus h/u/u2 for
    hand-written files).  Errors carry the offending line number."""
    reg_name: str | None = None
    n = 0
    gates: list[Gate] = []

    def qubit(token: str, lineno: int) -> int:
        token = token.strip()
        if reg_name is None:
            raise QasmParseError("gate before qreg declaration", lineno)
        if not (token.startswith(reg_name + "[") and token.endswith("]")):
            raise QasmParseError(f"bad qubit reference {token!r}", lineno)
        try:
            idx = int(token[len(reg_name) + 1 : -1])
        except ValueError as exc:
            raise QasmParseError(f"bad qubit index in {token!r}", lineno) from exc
        if not 0 <= idx < n:
            raise QasmParseError(f"qubit index {idx} outside register of size {n}", lineno)
        return idx

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//")[0].strip()
        if not line:
            continue
        for stmt in filter(None, (part.strip() for part in line.split(";"))):
            head = stmt.split()[0].split("(")[0]
            if head in ("OPENQASM", "include", "creg", "barrier"):
                continue
            if head == "qreg":
                if reg_name is not None:
                    raise QasmParseError("only a single quantum register is supported", lineno)
                body = stmt[len("qreg") :].strip()
                if "[" not in body or not body.endswith("]"):
                    raise QasmParseError(f"bad qreg declaration {stmt!r}", lineno)
                reg_name, size = body[:-1].split("[", 1)
                reg_name = reg_name.strip()
                try:
                    n = int(size)
                except ValueError as exc:
                    raise QasmParseError(f"bad register size {size!r}", lineno) from exc
                continue
            if head == "measure":
                raise QasmParseError("measurement is not supported", lineno)
            params: list[float] = []
            rest = stmt[len(head) :].strip()
            if rest.startswith("("):
                depth = 0
                for pos, ch in enumerate(rest):
                    depth += ch == "("
                    depth -= ch == ")"
                    if depth == 0:
                        break
                else:
                    raise QasmParseError("unbalanced parentheses", lineno)
                params = [_eval_param(p, lineno) for p in rest[1:pos].split(",")]
                rest = rest[pos + 1 :].strip()
            args = [qubit(tok, lineno) for tok in rest.split(",")] if rest else []

            def want(nq: int, np_: int) -> None:
                if len(args) != nq or len(params) != np_:
                    raise QasmParseError(f"{head} expects {nq} qubit(s) and {np_} parameter(s)", lineno)

            if head == "x":
                want(1, 0)
                gates.append(PauliX(args[0]))
            elif head == "h":
                want(1, 0)
                gates.append(Controlled1Q((), args[0], _H))
            elif head == "cx":
                want(2, 0)
                gates.append(CX(args[0], args[1]))
            elif head in ("rx", "ry", "rz"):
                want(1, 1)
                body = {"rx": Rx, "ry": Ry, "rz": Rz}[head](params[0])
                gates.append(Controlled1Q((), args[0], body))
            elif head in ("p", "u1"):
                want(1, 1)
                gates.append(Controlled1Q((), args[0], Phase(params[0])))
            elif head == "u2":
                want(1, 2)
                gates.append(Controlled1Q((), args[0], U2.from_matrix(_u3_matrix(math.pi / 2, *params))))
            elif head in ("u3", "u"):
                want(1, 3)
                gates.append(Controlled1Q((), args[0], U2.from_matrix(_u3_matrix(*params))))
            else:
                raise QasmParseError(f"unsupported gate {head!r}", lineno)
    if reg_name is None:
        raise QasmParseError("no qreg declaration found", len(text.splitlines()) or 1)
    return Circuit(n, gates)
