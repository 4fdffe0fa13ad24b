"""Telescoping objectives: the all-ones projector pushed through a circuit.

``h(k) = U_k ... U_1 P U_1^dagger ... U_k^dagger`` with ``P = sum_i |1><1|_i``
keeps the spectrum ``{0, ..., n}`` (Hamming weights) at every step, so its
ground state is always the prefix output and the gap is always 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliSum, conjugate_unitary, growth_factor, projector_one, sum_all
from .simulator import (
    DegenerateGroundState,
    StateVector,
    expected_value,
    run,
    spectral_report,
    stability_bounds,
)

DEFAULT_MAX_CARDINALITY = 100_000


class CardinalityBudgetExceeded(RuntimeError):
    def __init__(self, message: str, forecast: "Forecast | None" = None, actual: int | None = None):
        super().__init__(message)
        self.forecast = forecast
        self.actual = actual


class CircuitExhausted(IndexError):
    pass


def initial_hamiltonian(n: int, product_map: Sequence[Gate | None] | None = None) -> PauliSum:
    """``sum_i V_i |1><1|_i V_i^dagger``, ground state ``V |0...0>`` at energy 0."""
    if n < 1:
        raise ValueError("n must be positive")
    h = sum_all(n, (projector_one(n, q) for q in range(n)))
    for g in _check_product_map(n, product_map):
        h = conjugate_unitary(h, g)
    return h


def _check_product_map(n: int, product_map) -> list[Gate]:
    if product_map is None:
        return []
    gates = [g for g in product_map if g is not None]
    seen = set()
    for g in gates:
        if g.arity != 1:
            raise ValueError(f"product map entries must be single-qubit gates, got {g.kind}")
        if g.qubits[0] in seen:
            raise ValueError(f"two product-map gates on qubit {g.qubits[0]}")
        if g.qubits[0] >= n:
            raise ValueError(f"product-map gate on qubit {g.qubits[0]} outside {n} qubits")
        seen.add(g.qubits[0])
    return gates


@dataclass(frozen=True)
class TelescopeObjective:
    h: PauliSum
    k: int
    circuit: Circuit
    initial_product_map: tuple[Gate, ...] = ()
    max_cardinality: int = field(default=DEFAULT_MAX_CARDINALITY, compare=False)

    @classmethod
    def start(cls, circuit: Circuit, product_map: Sequence[Gate | None] | None = None,
              max_cardinality: int = DEFAULT_MAX_CARDINALITY) -> "TelescopeObjective":
        pm = tuple(_check_product_map(circuit.n, product_map))
        return cls(initial_hamiltonian(circuit.n, pm), 0, circuit, pm, max_cardinality)

    @property
    def n(self) -> int:
        return self.circuit.n

    @property
    def cardinality(self) -> int:
        return len(self.h)

    def input_state(self) -> StateVector:
        return run(Circuit(self.n, self.initial_product_map))

    def prefix_state(self) -> StateVector:
        return run(self.circuit.prefix(self.k), self.input_state())


def extend(t: TelescopeObjective, next_gate: Gate | None = None) -> TelescopeObjective:
    """Conjugate by the next gate of the circuit (or by ``next_gate`` if it is that gate)."""
    if t.k >= len(t.circuit):
        raise CircuitExhausted(f"all {len(t.circuit)} gates already applied")
    gate = t.circuit.gates[t.k]
    if next_gate is not None and next_gate != gate:
        raise ValueError(f"next gate is {gate.to_line()!r}, not {next_gate.to_line()!r}")
    h = conjugate_unitary(t.h, gate)
    if len(h) > t.max_cardinality:
        raise CardinalityBudgetExceeded(
            f"cardinality {len(h)} after gate {t.k} exceeds cap {t.max_cardinality}",
            budget_check(t.circuit, t.max_cardinality), len(h))
    return TelescopeObjective(h, t.k + 1, t.circuit, t.initial_product_map, t.max_cardinality)


def telescope(circuit: Circuit, k: int | None = None, product_map=None,
              max_cardinality: int = DEFAULT_MAX_CARDINALITY) -> TelescopeObjective:
    """Telescope after the first ``k`` gates (all of them by default)."""
    t = TelescopeObjective.start(circuit, product_map, max_cardinality)
    for _ in range(len(circuit) if k is None else k):
        t = extend(t)
    return t


@dataclass(frozen=True)
class Forecast:
    n: int
    bound: int
    max_cardinality: int
    non_clifford: int

    @property
    def passes(self) -> bool:
        return self.bound <= self.max_cardinality


def budget_check(circuit: Circuit, max_cardinality: int = DEFAULT_MAX_CARDINALITY) -> Forecast:
    """Product bound ``(n + 1) * prod(growth factors)`` without building anything."""
    bound = circuit.n + 1
    for g in circuit.gates:
        bound *= growth_factor(g)
    nc = sum(1 for g in circuit.gates if not g.is_clifford)
    return Forecast(circuit.n, bound, max_cardinality, nc)


@dataclass(frozen=True)
class TelescopeCertificate:
    k: int
    cardinality: int
    eigenvalues: np.ndarray
    gap: float
    ground_overlap: float
    circuit_energy: float
    lower_bound: float
    upper_bound: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "cardinality": self.cardinality,
            "gap": self.gap,
            "ground_overlap": self.ground_overlap,
            "circuit_energy": self.circuit_energy,
            "overlap_lower": self.lower_bound,
            "overlap_upper": self.upper_bound,
        }


def certify(t: TelescopeObjective, cap: int | None = None) -> TelescopeCertificate:
    kw = {} if cap is None else {"cap": cap}
    rep = spectral_report(t.h, **kw)
    if rep.degenerate:
        raise DegenerateGroundState(f"telescope at k={t.k} has gap {rep.gap:.3e}")
    out = t.prefix_state()
    energy = expected_value(out, t.h)
    lo, hi = stability_bounds(max(energy, 0.0), rep.gap, t.h.trace())
    return TelescopeCertificate(
        k=t.k,
        cardinality=len(t.h),
        eigenvalues=rep.eigenvalues,
        gap=rep.gap,
        ground_overlap=rep.ground_vector.overlap(out),
        circuit_energy=energy,
        lower_bound=lo,
        upper_bound=hi,
    )


def expected_spectrum(n: int) -> np.ndarray:
    """Hamming weights of all ``n``-bit strings, sorted."""
    return np.sort(np.array([bin(x).count("1") for x in range(1 << n)], dtype=float))


def binomial_multiplicities(n: int) -> list[int]:
    return [math.comb(n, w) for w in range(n + 1)]
