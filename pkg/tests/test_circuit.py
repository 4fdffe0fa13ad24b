import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uvqc.circuit import (
    GATE_SPECS,
    SELF_INVERSE_KINDS,
    Circuit,
    CircuitError,
    CircuitParseError,
    Gate,
    bell_circuit,
    compile_self_inverse,
    non_clifford_count,
    parse_circuit,
    serialize_circuit,
    swap_test_circuit,
)

from conftest import circuit_unitary, equal_up_to_phase, random_circuit

ANGLES = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def gates(draw, n=3):
    kind = draw(st.sampled_from(sorted(GATE_SPECS)))
    arity, param = GATE_SPECS[kind]
    qubits = draw(st.permutations(range(n)))[:arity]
    return Gate(kind, tuple(qubits), draw(ANGLES) if param else None)


@settings(max_examples=100)
@given(st.lists(gates(), max_size=12))
def test_serialize_roundtrip(gs):
    c = Circuit(3, gs)
    assert parse_circuit(serialize_circuit(c)) == c


@pytest.mark.parametrize("kind", sorted(GATE_SPECS))
def test_unitary_and_self_inverse_classification(kind):
    arity, param = GATE_SPECS[kind]
    m = Gate(kind, tuple(range(arity)), 0.37 if param else None).matrix()
    np.testing.assert_allclose(m @ m.conj().T, np.eye(1 << arity), atol=1e-12)
    hermitian = np.allclose(m, m.conj().T)
    assert hermitian == (kind in SELF_INVERSE_KINDS)


def test_parse_comments_aliases_and_header():
    c = parse_circuit("# qubits: 4\nh 0  # hadamard\n\nCX 0 1\nRY 2 0.5\n")
    assert c.n == 4
    assert [g.kind for g in c.gates] == ["H", "CNOT", "RY"]
    assert c.gates[2].angle == 0.5


@pytest.mark.parametrize("text,fragment", [
    ("H 0\nFOO 1\n", "line 2"),
    ("RY 0\n", "missing angle"),
    ("CNOT 0\n", "line 1"),
    ("CNOT 1 1\n", "duplicate"),
    ("H x\n", "line 1"),
    ("# qubits: 2\nH 3\n", "out of range"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(CircuitParseError, match=fragment):
        parse_circuit(text)


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate("H", (0,), 0.1)
    with pytest.raises(CircuitError):
        Gate("RX", (0,))
    with pytest.raises(CircuitError):
        Circuit(2, [Gate("H", (2,))])


def test_unitary_matches_oracle(rng):
    for _ in range(10):
        c = random_circuit(rng, 3, 12)
        np.testing.assert_allclose(c.unitary(), circuit_unitary(c), atol=1e-12)


def test_qubit_zero_is_most_significant():
    u = Circuit(2, [Gate("X", (0,))]).unitary()
    assert u[2, 0] == 1  # |00> -> |10>


def test_with_parameters():
    c = Circuit(2, [Gate("RY", (0,), 0.0), Gate("CNOT", (0, 1)), Gate("CRY", (1, 0), 0.0)])
    d = c.with_parameters([1.0, 2.0])
    assert d.parameters == [1.0, 2.0]
    with pytest.raises(CircuitError):
        c.with_parameters([1.0])


@settings(max_examples=60)
@given(st.lists(gates(), min_size=1, max_size=6))
def test_compile_self_inverse_is_exact_up_to_phase(gs):
    c = Circuit(3, gs)
    out = compile_self_inverse(c)
    assert all(g.is_self_inverse for g in out.gates)
    assert equal_up_to_phase(circuit_unitary(out), circuit_unitary(c), atol=1e-9)


@given(ANGLES)
def test_rotations_compile_without_phase(theta):
    for kind in ("RX", "RY", "RZ"):
        c = Circuit(1, [Gate(kind, (0,), theta)])
        np.testing.assert_allclose(circuit_unitary(compile_self_inverse(c)), c.unitary(), atol=1e-12)


def test_reflection_squares_to_identity():
    m = Gate("R", (0,), 0.8).matrix()
    np.testing.assert_allclose(m @ m, np.eye(2), atol=1e-12)


def test_swap_test_layout():
    c = swap_test_circuit(2)
    assert c.n == 5
    assert c.gates[0] == Gate("H", (0,))
    assert [g.qubits for g in c.gates[1:]] == [(0, 1, 3), (0, 2, 4)]
    assert non_clifford_count(swap_test_circuit(1)) == 1
    with pytest.raises(CircuitError):
        swap_test_circuit(0)


def test_cswap_block_is_exchange_operator():
    # SWAP = (II + XX + YY + ZZ) / 2
    from conftest import kron_word
    s = sum(kron_word(p + p) for p in "IXYZ") / 2
    np.testing.assert_allclose(Gate("SWAP", (0, 1)).matrix(), s, atol=1e-12)
    m = Gate("CSWAP", (0, 1, 2)).matrix()
    np.testing.assert_allclose(m[4:, 4:], s, atol=1e-12)
    np.testing.assert_allclose(m[:4, :4], np.eye(4))


def test_bell():
    u = bell_circuit().unitary()
    np.testing.assert_allclose(u[:, 0], np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-12)
