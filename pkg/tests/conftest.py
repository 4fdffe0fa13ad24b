"""Shared fixtures and independent dense oracles.

The oracles here avoid the package's kernels: Pauli words are built from
explicit Kronecker products and gates are embedded by index arithmetic.
"""
from __future__ import annotations

import functools
import math

import numpy as np
import pytest

from uvqc.circuit import Circuit, Gate

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def kron_word(label: str) -> np.ndarray:
    """Dense matrix of a letter string, qubit 0 leftmost."""
    return functools.reduce(np.kron, [PAULI[c] for c in label], np.eye(1, dtype=complex))


def dense_sum(n: int, terms) -> np.ndarray:
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for c, label in terms:
        out += c * kron_word(label)
    return out


def embed(mat: np.ndarray, qubits, n: int) -> np.ndarray:
    """Embed a k-qubit matrix by index arithmetic (qubit 0 is the MSB)."""
    dim = 1 << n
    k = len(qubits)
    idx = np.arange(dim)
    shifts = [n - 1 - q for q in qubits]
    local = np.zeros(dim, dtype=np.int64)
    for j, s in enumerate(shifts):
        local |= ((idx >> s) & 1) << (k - 1 - j)
    mask = sum(1 << s for s in shifts)
    rest = idx & ~mask
    same = rest[:, None] == rest[None, :]
    return np.where(same, mat[local[:, None], local[None, :]], 0)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    u = np.eye(1 << circuit.n, dtype=complex)
    for g in circuit.gates:
        u = embed(g.matrix(), g.qubits, circuit.n) @ u
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < atol:
        return np.allclose(a, b, atol=atol)
    phase = a[k] / b[k]
    return abs(abs(phase) - 1) < atol and np.allclose(a, phase * b, atol=atol)


def haar_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


CLIFFORD_1Q = ("H", "S", "SDG", "X", "Y", "Z")
CLIFFORD_2Q = ("CNOT", "CZ", "SWAP")
NON_CLIFFORD_1Q = ("T", "TDG", "RX", "RY", "RZ", "R")


def random_gate(rng, n: int, kinds) -> Gate:
    kind = str(rng.choice(kinds))
    arity = {"CNOT": 2, "CZ": 2, "SWAP": 2, "CRY": 2, "CSWAP": 3}.get(kind, 1)
    qubits = tuple(int(q) for q in rng.choice(n, size=arity, replace=False))
    angle = float(rng.uniform(-math.pi, math.pi)) if kind in ("RX", "RY", "RZ", "R", "RYZ", "RXY", "CRY") else None
    return Gate(kind, qubits, angle)


def random_circuit(rng, n: int, length: int, max_non_clifford: int = 3) -> Circuit:
    """Random circuit mixing Cliffords with at most ``max_non_clifford`` other gates."""
    gates = []
    nc_slots = set(rng.choice(length, size=min(max_non_clifford, length), replace=False).tolist()) if length else set()
    for i in range(length):
        if i in nc_slots:
            gates.append(random_gate(rng, n, NON_CLIFFORD_1Q))
        elif n > 1 and rng.random() < 0.4:
            gates.append(random_gate(rng, n, CLIFFORD_2Q))
        else:
            gates.append(random_gate(rng, n, CLIFFORD_1Q))
    return Circuit(n, gates)


def random_self_inverse_circuit(rng, n: int, length: int) -> Circuit:
    kinds = ["H", "X", "Y", "Z", "R", "RYZ", "RXY"] + (["CNOT", "CZ", "SWAP"] if n > 1 else [])
    return Circuit(n, [random_gate(rng, n, kinds) for _ in range(length)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
