import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uvqc.circuit import Circuit, Gate, bell_circuit
from uvqc.pauli import to_dense
from uvqc.simulator import DegenerateGroundState, expected_value
from uvqc.telescope import (
    CardinalityBudgetExceeded,
    CircuitExhausted,
    TelescopeObjective,
    binomial_multiplicities,
    budget_check,
    certify,
    expected_spectrum,
    extend,
    initial_hamiltonian,
    telescope,
)

from conftest import circuit_unitary, embed, random_circuit


def _hamming_operator(n):
    return np.diag([float(bin(b).count("1")) for b in range(1 << n)])


def test_initial_hamiltonian_counts_ones():
    np.testing.assert_allclose(to_dense(initial_hamiltonian(3)), _hamming_operator(3))
    assert initial_hamiltonian(3).cardinality == 4


def test_product_map_moves_ground_state():
    pm = [Gate("H", (0,)), Gate("X", (1,))]
    h = initial_hamiltonian(2, pm)
    v = embed(Gate("H", (0,)).matrix(), (0,), 2) @ embed(Gate("X", (1,)).matrix(), (1,), 2)
    np.testing.assert_allclose(to_dense(h), v @ _hamming_operator(2) @ v.conj().T, atol=1e-12)
    with pytest.raises(ValueError):
        initial_hamiltonian(2, [Gate("H", (0,)), Gate("X", (0,))])
    with pytest.raises(ValueError):
        initial_hamiltonian(2, [Gate("CNOT", (0, 1))])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_telescope_equals_dense_conjugation(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, 3, 10)
    u = circuit_unitary(c)
    np.testing.assert_allclose(to_dense(telescope(c).h), u @ _hamming_operator(3) @ u.conj().T, atol=1e-10)


def test_clifford_circuit_keeps_cardinality(rng):
    for _ in range(5):
        c = random_circuit(rng, 4, 20, max_non_clifford=0)
        assert telescope(c).cardinality == 5


def test_extend_checks():
    c = bell_circuit()
    t = TelescopeObjective.start(c)
    with pytest.raises(ValueError):
        extend(t, Gate("CNOT", (0, 1)))
    t = extend(extend(t, Gate("H", (0,))))
    with pytest.raises(CircuitExhausted):
        extend(t)


def test_bell_certificate():
    cert = certify(telescope(bell_circuit()))
    assert cert.gap == pytest.approx(1.0)
    assert cert.ground_overlap == pytest.approx(1.0)
    assert cert.circuit_energy == pytest.approx(0.0, abs=1e-12)
    assert cert.cardinality == 3
    np.testing.assert_allclose(cert.eigenvalues, expected_spectrum(2), atol=1e-10)
    assert cert.as_dict()["overlap_lower"] == pytest.approx(1.0)


def test_certify_prefix_states(rng):
    c = random_circuit(rng, 3, 12)
    t = TelescopeObjective.start(c)
    for _ in range(len(c)):
        t = extend(t)
        cert = certify(t)
        assert cert.gap == pytest.approx(1.0, abs=1e-9)
        assert cert.ground_overlap > 1 - 1e-9
        assert expected_value(t.prefix_state(), t.h) == pytest.approx(0.0, abs=1e-10)


def test_multiplicities():
    assert binomial_multiplicities(4) == [1, 4, 6, 4, 1]
    spec = expected_spectrum(4)
    assert [int(np.sum(spec == w)) for w in range(5)] == binomial_multiplicities(4)


def test_budget_forecast_and_breach():
    c = Circuit(2, [Gate("T", (0,)), Gate("RY", (1,), 0.3), Gate("CNOT", (0, 1))])
    f = budget_check(c, max_cardinality=100)
    assert f.bound == 3 * 16 * 16
    assert f.non_clifford == 2
    assert not f.passes
    assert budget_check(c).passes
    with pytest.raises(CardinalityBudgetExceeded) as exc:
        telescope(Circuit(2, [Gate("RY", (0,), 0.3), Gate("RY", (1,), 0.5), Gate("CNOT", (0, 1))]),
                  max_cardinality=3)
    assert exc.value.actual > 3
    assert exc.value.forecast is not None


def test_t_gates_keep_z_words():
    c = Circuit(1, [Gate("T", (0,))] * 9)
    assert telescope(c).cardinality == 2


def test_degenerate_certificate_rejected():
    # a width-1 objective is never degenerate, so feed a hand-made one
    from uvqc.pauli import PauliSum
    t = TelescopeObjective(PauliSum.from_terms(2, [(1.0, "ZI")]), 0, Circuit(2, []))
    with pytest.raises(DegenerateGroundState):
        certify(t)
