"""Gates, circuits, the line-based circuit file format and self-inverse compilation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class CircuitError(ValueError):
    """Malformed gate or circuit."""


class CircuitParseError(CircuitError):
    """Circuit text could not be parsed."""


_SQ2 = 1 / math.sqrt(2)

# kind -> (arity, parameterized)
GATE_SPECS: dict[str, tuple[int, bool]] = {
    "I": (1, False),
    "H": (1, False),
    "S": (1, False),
    "SDG": (1, False),
    "X": (1, False),
    "Y": (1, False),
    "Z": (1, False),
    "T": (1, False),
    "TDG": (1, False),
    "RX": (1, True),
    "RY": (1, True),
    "RZ": (1, True),
    "R": (1, True),
    "RYZ": (1, True),
    "RXY": (1, True),
    "CNOT": (2, False),
    "CZ": (2, False),
    "SWAP": (2, False),
    "CRY": (2, True),
    "CSWAP": (3, False),
}

CLIFFORD_KINDS = frozenset({"I", "H", "S", "SDG", "X", "Y", "Z", "CNOT", "CZ", "SWAP"})
SELF_INVERSE_KINDS = frozenset(
    {"I", "H", "X", "Y", "Z", "CNOT", "CZ", "SWAP", "CSWAP", "R", "RYZ", "RXY"}
)

_ALIASES = {"CX": "CNOT", "ID": "I", "FREDKIN": "CSWAP"}


def _fixed_matrix(kind: str) -> np.ndarray:
    if kind == "I":
        return np.eye(2, dtype=complex)
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
    if kind == "S":
        return np.diag([1, 1j])
    if kind == "SDG":
        return np.diag([1, -1j])
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind == "Z":
        return np.diag([1.0 + 0j, -1.0])
    if kind == "T":
        return np.diag([1, np.exp(1j * math.pi / 4)])
    if kind == "TDG":
        return np.diag([1, np.exp(-1j * math.pi / 4)])
    if kind == "CNOT":
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = [[0, 1], [1, 0]]
        return m
    if kind == "CZ":
        return np.diag([1.0 + 0j, 1, 1, -1])
    if kind == "SWAP":
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if kind == "CSWAP":
        return np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 6, 5, 7]]
    raise CircuitError(f"no fixed matrix for {kind}")


def gate_matrix(kind: str, angle: float | None = None) -> np.ndarray:
    """Matrix of a gate kind; the first listed qubit is the most significant.

    Rotations follow ``RP(t) = exp(-i t P / 2)``.  The three Hermitian
    reflections are ``R(t) = X sin t + Z cos t``, ``RYZ(t) = Y sin t - Z cos t``
    and ``RXY(t) = X cos t + Y sin t``.
    """
    arity, param = GATE_SPECS[kind]
    if not param:
        return _fixed_matrix(kind)
    c, s = math.cos(angle), math.sin(angle)
    if kind == "RX":
        return np.array([[math.cos(angle / 2), -1j * math.sin(angle / 2)],
                         [-1j * math.sin(angle / 2), math.cos(angle / 2)]])
    if kind == "RY":
        return np.array([[math.cos(angle / 2), -math.sin(angle / 2)],
                         [math.sin(angle / 2), math.cos(angle / 2)]], dtype=complex)
    if kind == "RZ":
        return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
    if kind == "R":
        return np.array([[c, s], [s, -c]], dtype=complex)
    if kind == "RYZ":
        return np.array([[-c, -1j * s], [1j * s, c]])
    if kind == "RXY":
        return np.array([[0, c - 1j * s], [c + 1j * s, 0]])
    if kind == "CRY":
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = gate_matrix("RY", angle)
        return m
    raise CircuitError(f"unknown gate kind {kind}")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.upper(), self.kind.upper())
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if kind not in GATE_SPECS:
            raise CircuitError(f"unknown gate {self.kind!r}")
        arity, param = GATE_SPECS[kind]
        if len(self.qubits) != arity:
            raise CircuitError(f"{kind} takes {arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != arity:
            raise CircuitError(f"duplicate qubit in {kind} {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {kind}")
        if param:
            if self.angle is None:
                raise CircuitError(f"{kind} requires an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise CircuitError(f"{kind} takes no angle")

    @property
    def arity(self) -> int:
        return len(self.qubits)

    @property
    def is_clifford(self) -> bool:
        # by kind only: RZ(pi/2) is not treated as Clifford
        return self.kind in CLIFFORD_KINDS

    @property
    def is_self_inverse(self) -> bool:
        return self.kind in SELF_INVERSE_KINDS

    @property
    def is_parameterized(self) -> bool:
        return GATE_SPECS[self.kind][1]

    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.angle)

    def with_angle(self, angle: float) -> "Gate":
        return Gate(self.kind, self.qubits, angle)

    def to_line(self) -> str:
        parts = [self.kind, *map(str, self.qubits)]
        if self.angle is not None:
            parts.append(repr(self.angle))
        return " ".join(parts)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise CircuitError("circuit needs at least one qubit")
        for g in self.gates:
            if max(g.qubits) >= self.n:
                raise CircuitError(f"gate {g.to_line()!r} exceeds width {self.n}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def prefix(self, k: int) -> "Circuit":
        return Circuit(self.n, self.gates[:k], self.name)

    def append(self, *gates: Gate) -> "Circuit":
        return Circuit(self.n, self.gates + tuple(gates), self.name)

    @property
    def parameters(self) -> list[float]:
        return [g.angle for g in self.gates if g.is_parameterized]

    def with_parameters(self, values: Sequence[float]) -> "Circuit":
        values = list(values)
        if len(values) != len(self.parameters):
            raise CircuitError(f"expected {len(self.parameters)} angles, got {len(values)}")
        it = iter(values)
        gates = [g.with_angle(next(it)) if g.is_parameterized else g for g in self.gates]
        return Circuit(self.n, gates, self.name)

    def unitary(self) -> np.ndarray:
        """Dense unitary (test oracle, small n only)."""
        from .simulator import embed_gate

        u = np.eye(2**self.n, dtype=complex)
        for g in self.gates:
            u = embed_gate(g, self.n) @ u
        return u


def non_clifford_count(circuit: Circuit) -> int:
    return sum(1 for g in circuit.gates if not g.is_clifford)


def parse_circuit(text: str, n: int | None = None, name: str | None = None) -> Circuit:
    """Parse ``NAME q0 [q1 [q2]] [angle]`` lines.

    An optional ``# qubits: N`` header fixes the width; otherwise it is taken
    from ``n`` or inferred as one more than the largest index used.
    """
    gates = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip().lower()
            if body.startswith("qubits:"):
                header_n = int(body.split(":", 1)[1])
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = _ALIASES.get(tok[0].upper(), tok[0].upper())
        if kind not in GATE_SPECS:
            raise CircuitParseError(f"line {lineno}: unknown gate {tok[0]!r}")
        arity, param = GATE_SPECS[kind]
        want = arity + (1 if param else 0)
        if len(tok) - 1 != want:
            what = "missing angle" if param and len(tok) - 1 == arity else "wrong operand count"
            raise CircuitParseError(f"line {lineno}: {what} for {kind}")
        try:
            qubits = tuple(int(t) for t in tok[1:1 + arity])
            angle = float(tok[-1]) if param else None
        except ValueError as exc:
            raise CircuitParseError(f"line {lineno}: {exc}") from None
        try:
            gates.append(Gate(kind, qubits, angle))
        except CircuitError as exc:
            raise CircuitParseError(f"line {lineno}: {exc}") from None
    width = n or header_n
    used = max((max(g.qubits) for g in gates), default=0) + 1
    if width is None:
        width = used
    if used > width:
        raise CircuitParseError(f"qubit index {used - 1} out of range for width {width}")
    return Circuit(width, gates, name)


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"# qubits: {circuit.n}"]
    lines += [g.to_line() for g in circuit.gates]
    return "\n".join(lines) + "\n"


def read_circuit(path) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh.read(), name=str(path))


def _self_inverse_pair(kind: str, theta: float) -> list[tuple[str, float]]:
    # refl(a) refl(b) = exp(-i (a - b) P) for each reflection family, so a
    # first-applied refl(pi/2 - t/2) followed by refl(pi/2) gives exp(-i t P/2).
    return [(kind, math.pi / 2 - theta / 2), (kind, math.pi / 2)]


_ROTATION_FAMILY = {"RY": "R", "RX": "RYZ", "RZ": "RXY"}
# phase gates as Z rotations, equal up to global phase
_PHASE_ANGLES = {"S": math.pi / 2, "SDG": -math.pi / 2, "T": math.pi / 4, "TDG": -math.pi / 4}


def compile_self_inverse(circuit: Circuit) -> Circuit:
    """Rewrite every gate into Hermitian (self-inverse) gates.

    The result equals the input up to a global phase.  Rotations and phase
    gates become two reflections; CRY becomes RY halves around two CNOTs.
    """
    out: list[Gate] = []
    for g in circuit.gates:
        if g.is_self_inverse:
            out.append(g)
            continue
        kind, angle = g.kind, g.angle
        if kind in _PHASE_ANGLES:
            kind, angle = "RZ", _PHASE_ANGLES[kind]
        if kind in _ROTATION_FAMILY:
            q = g.qubits[0]
            out += [Gate(k, (q,), a) for k, a in _self_inverse_pair(_ROTATION_FAMILY[kind], angle)]
        elif kind == "CRY":
            c, t = g.qubits
            half = compile_self_inverse(Circuit(circuit.n, [Gate("RY", (t,), angle / 2)])).gates
            back = compile_self_inverse(Circuit(circuit.n, [Gate("RY", (t,), -angle / 2)])).gates
            out += [*half, Gate("CNOT", (c, t)), *back, Gate("CNOT", (c, t))]
        else:
            raise CircuitError(f"cannot compile {g.kind} to self-inverse gates")
    return Circuit(circuit.n, out, circuit.name)


def swap_test_circuit(d: int) -> Circuit:
    """Ancilla 0, registers ``1..d`` and ``d+1..2d``.

    The closing Hadamard on the ancilla is left to the measurement step.
    """
    if d < 1:
        raise CircuitError("swap test needs d >= 1")
    gates = [Gate("H", (0,))]
    gates += [Gate("CSWAP", (0, 1 + i, 1 + d + i)) for i in range(d)]
    return Circuit(2 * d + 1, gates, f"swap_test_d{d}")


def bell_circuit() -> Circuit:
    return Circuit(2, [Gate("H", (0,)), Gate("CNOT", (0, 1))], "bell")


def circuit_from_gates(n: int, gates: Iterable[Gate], name: str | None = None) -> Circuit:
    return Circuit(n, tuple(gates), name)
