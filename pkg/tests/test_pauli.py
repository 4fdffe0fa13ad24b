import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uvqc.circuit import Gate
from uvqc.pauli import (
    DimensionError,
    HermiticityError,
    NotCliffordError,
    PauliSum,
    PauliWord,
    add,
    conjugate_circuit,
    conjugate_clifford,
    conjugate_unitary,
    gate_pauli_expansion,
    growth_factor,
    multiply,
    mul_words,
    projector_one,
    square,
    to_dense,
)

from conftest import PAULI, dense_sum, embed, kron_word

labels = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.text(alphabet="IXYZ", min_size=n, max_size=n))


def sums(n):
    return st.lists(
        st.tuples(st.floats(-3, 3, allow_nan=False), st.text(alphabet="IXYZ", min_size=n, max_size=n)),
        min_size=0, max_size=8)


def test_word_matrix_is_kronecker_product():
    for label in ("X", "IY", "ZXY", "YYIZ"):
        np.testing.assert_allclose(PauliWord.from_label(label).matrix(), kron_word(label))


def test_letter_roundtrip_and_weight():
    w = PauliWord.from_label("IXYZ")
    assert w.letters == "IXYZ"
    assert w.weight == 3
    assert PauliWord.identity(3).is_identity()
    assert not w.is_identity()


def test_invalid_letter():
    with pytest.raises(ValueError):
        PauliWord.from_label("XQ")


@pytest.mark.parametrize("a,b,expected,phase", [
    ("X", "Y", "Z", 1j), ("Y", "Z", "X", 1j), ("Z", "X", "Y", 1j),
    ("Y", "X", "Z", -1j), ("X", "X", "I", 1), ("XZ", "ZX", "YY", 1),
])
def test_single_products(a, b, expected, phase):
    w, ph = mul_words(PauliWord.from_label(a), PauliWord.from_label(b))
    assert w.letters == expected
    assert ph == phase


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.text(alphabet="IXYZ", min_size=n, max_size=n), st.text(alphabet="IXYZ", min_size=n, max_size=n))))
def test_product_matches_dense(pair):
    a, b = pair
    w, ph = mul_words(PauliWord.from_label(a), PauliWord.from_label(b))
    np.testing.assert_allclose(ph * kron_word(w.letters), kron_word(a) @ kron_word(b), atol=1e-12)


def test_canonical_order_and_pruning():
    h = PauliSum.from_terms(2, [(1.0, "ZI"), (2.0, "XI"), (1e-13, "YY"), (0.5, "II")])
    assert [w.letters for w, _ in h.items()] == ["II", "XI", "ZI"]
    assert h.cardinality == 3


def test_from_complex_rejects_imaginary():
    with pytest.raises(HermiticityError):
        PauliSum.from_complex(1, {(1, 0): 1j})


@settings(max_examples=60)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), sums(n), sums(n))))
def test_algebra_matches_dense(case):
    n, ta, tb = case
    a, b = PauliSum.from_terms(n, ta), PauliSum.from_terms(n, tb)
    da, db = dense_sum(n, ta), dense_sum(n, tb)
    np.testing.assert_allclose(to_dense(a + b), da + db, atol=1e-9)
    np.testing.assert_allclose(to_dense(a - b), da - db, atol=1e-9)
    np.testing.assert_allclose(to_dense(a * 2.5), 2.5 * da, atol=1e-9)
    prod = multiply(a, b)
    dense_prod = sum((c * kron_word(PauliWord(k[1], k[0], n).letters) for k, c in prod.items()),
                     np.zeros_like(da))
    np.testing.assert_allclose(dense_prod, da @ db, atol=1e-9)
    np.testing.assert_allclose(to_dense(square(a)), da @ da, atol=1e-9)
    # trace and text format
    assert math.isclose(a.trace(), np.trace(da).real, abs_tol=1e-9)
    assert PauliSum.from_text(a.to_text("hdr"), n) == a


def test_tensor_places_other_after():
    a = PauliSum.from_terms(1, [(1.0, "X")])
    b = PauliSum.from_terms(2, [(2.0, "ZY")])
    np.testing.assert_allclose(to_dense(a.tensor(b)), np.kron(kron_word("X"), 2 * kron_word("ZY")))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        add(PauliSum.identity(1), PauliSum.identity(2))
    with pytest.raises(DimensionError):
        PauliSum.from_terms(2, [(1.0, "X")])


def test_dense_cap():
    with pytest.raises(DimensionError):
        to_dense(PauliSum.identity(5), cap=4)


def test_projector_one():
    np.testing.assert_allclose(to_dense(projector_one(2, 1)), np.kron(np.eye(2), np.diag([0, 1])))


GATES = [Gate("H", (0,)), Gate("S", (1,)), Gate("SDG", (0,)), Gate("X", (2,)), Gate("Y", (1,)),
         Gate("Z", (0,)), Gate("CNOT", (0, 2)), Gate("CNOT", (2, 1)), Gate("CZ", (1, 2)),
         Gate("SWAP", (0, 1)), Gate("T", (1,)), Gate("RX", (0,), 0.3), Gate("RY", (2,), -1.1),
         Gate("RZ", (1,), 2.0), Gate("R", (0,), 0.7), Gate("RYZ", (1,), 0.4),
         Gate("RXY", (2,), -0.9), Gate("CRY", (2, 0), 1.3), Gate("CSWAP", (1, 0, 2))]


@pytest.mark.parametrize("gate", GATES, ids=lambda g: g.to_line())
def test_conjugation_matches_dense(gate):
    terms = [(0.7, "XYZ"), (-1.2, "ZZI"), (0.4, "IXI"), (2.0, "III"), (0.3, "YIX")]
    h = PauliSum.from_terms(3, terms)
    u = embed(gate.matrix(), gate.qubits, 3)
    expected = u @ dense_sum(3, terms) @ u.conj().T
    np.testing.assert_allclose(to_dense(conjugate_unitary(h, gate)), expected, atol=1e-10)


@pytest.mark.parametrize("kind", ["H", "S", "SDG", "X", "Y", "Z"])
def test_clifford_maps_words_to_single_words(kind):
    for label in "XYZ":
        img = conjugate_clifford(PauliSum.from_terms(1, [(1.0, label)]), Gate(kind, (0,)))
        assert img.cardinality == 1
        assert abs(abs(next(iter(img.raw.values()))) - 1) < 1e-12


def test_two_qubit_clifford_tables():
    for kind in ("CNOT", "CZ", "SWAP"):
        for a, b in itertools.product("IXYZ", repeat=2):
            if a + b == "II":
                continue
            img = conjugate_clifford(PauliSum.from_terms(2, [(1.0, a + b)]), Gate(kind, (0, 1)))
            assert img.cardinality == 1


def test_conjugate_clifford_rejects_t():
    with pytest.raises(NotCliffordError):
        conjugate_clifford(PauliSum.identity(1), Gate("T", (0,)))


def test_conjugation_out_of_range():
    with pytest.raises(DimensionError):
        conjugate_unitary(PauliSum.identity(2), Gate("H", (2,)))


def test_growth_factor():
    assert growth_factor(Gate("CNOT", (0, 1))) == 1
    assert growth_factor(Gate("T", (0,))) == 16
    assert growth_factor(Gate("CSWAP", (0, 1, 2))) == 16 ** 3


@given(st.floats(-6, 6, allow_nan=False))
def test_rotation_pauli_expansion(theta):
    # exp(-i t P / 2) = cos(t/2) I - i sin(t/2) P
    for kind, p in (("RX", "X"), ("RY", "Y"), ("RZ", "Z")):
        expected = math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * PAULI[p]
        np.testing.assert_allclose(Gate(kind, (0,), theta).matrix(), expected, atol=1e-12)


@given(st.floats(-6, 6, allow_nan=False))
def test_reflection_expansion(theta):
    h = gate_pauli_expansion(Gate("R", (1,), theta), 2)
    expected = PauliSum.from_terms(2, [(math.sin(theta), "IX"), (math.cos(theta), "IZ")])
    assert h.allclose(expected)


def test_clifford_circuit_preserves_cardinality_example():
    h = PauliSum.from_terms(3, [(1.0, "XII"), (0.5, "ZZI"), (0.25, "IYX")])
    gates = [Gate("H", (0,)), Gate("CNOT", (0, 1)), Gate("S", (2,)), Gate("SWAP", (1, 2))]
    assert conjugate_circuit(h, gates).cardinality == h.cardinality
