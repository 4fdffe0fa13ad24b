"""History-state objectives on a binary clock register.

Register qubits come first, then ``ceil(log2(L + 1))`` clock qubits holding
the step ``t`` in binary with the most significant bit on the first clock
qubit.  Clock codes above ``L`` are unused; they carry a ``K``-weighted
penalty so that they never join the ground space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, compile_self_inverse
from .pauli import PauliSum, gate_pauli_expansion, sum_all
from .simulator import StateVector, run, spectral_report
from .telescope import initial_hamiltonian, _check_product_map


class ClockWidthError(ValueError):
    """The clock register cannot hold every step of the circuit."""


class NotSelfInverseError(ValueError):
    pass


def clock_qubit_count(L: int) -> int:
    if L < 0:
        raise ValueError("L must be non-negative")
    return (L).bit_length() if L > 0 else 0


# |a><b| on one qubit, as {(x, z): coefficient}
_KETBRA = {
    (0, 0): {(0, 0): 0.5, (0, 1): 0.5},
    (1, 1): {(0, 0): 0.5, (0, 1): -0.5},
    (0, 1): {(1, 0): 0.5, (1, 1): 0.5j},
    (1, 0): {(1, 0): 0.5, (1, 1): -0.5j},
}


def _bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - j)) & 1 for j in range(width)]


def ketbra(ket: int, bra: int, width: int) -> dict[tuple[int, int], complex]:
    """Complex Pauli coefficients of ``|ket><bra|`` on ``width`` qubits."""
    acc: dict[tuple[int, int], complex] = {(0, 0): 1.0 + 0j}
    for j, (a, b) in enumerate(zip(_bits(ket, width), _bits(bra, width))):
        nxt = {}
        for (x, z), c in acc.items():
            for (bx, bz), f in _KETBRA[(a, b)].items():
                key = (x | (bx << j), z | (bz << j))
                nxt[key] = nxt.get(key, 0) + c * f
        acc = nxt
    return acc


def clock_projector(bits: str | Sequence[int], width: int | None = None) -> PauliSum:
    """``|x><x| = prod_i (I + (-1)^{x_i} Z_i) / 2`` as a ``2^c``-term sum."""
    if isinstance(bits, str):
        if any(b not in "01" for b in bits):
            raise ValueError(f"clock string {bits!r} is not binary")
        bits = [int(b) for b in bits]
    bits = list(bits)
    if width is not None and len(bits) != width:
        raise ValueError(f"clock string has {len(bits)} bits, expected {width}")
    value = int("".join(map(str, bits)) or "0", 2)
    return PauliSum.from_complex(len(bits), ketbra(value, value, len(bits)))


def transition_operator(t: int, width: int, L: int | None = None) -> PauliSum:
    """``|t><t-1| + |t-1><t|`` on the clock register."""
    top = (1 << width) - 1 if L is None else L
    if not 1 <= t <= top:
        raise ValueError(f"step {t} outside 1..{top}")
    if top >= 1 << width:
        raise ClockWidthError(f"{width} clock qubits cannot hold step {top}")
    up = ketbra(t, t - 1, width)
    acc = dict(up)
    for key, c in ketbra(t - 1, t, width).items():
        acc[key] = acc.get(key, 0) + c
    return PauliSum.from_complex(width, acc)


def _require_self_inverse(circuit: Circuit) -> None:
    bad = [g.to_line() for g in circuit.gates if not g.is_self_inverse]
    if bad:
        raise NotSelfInverseError(f"gates are not self-inverse: {', '.join(bad[:5])}")


def step_projector(circuit: Circuit, t: int, width: int) -> PauliSum:
    """``H_t = (I|t><t| + I|t-1><t-1| - U_t (|t><t-1| + |t-1><t|)) / 2``."""
    gate = circuit.gates[t - 1]
    if not gate.is_self_inverse:
        raise NotSelfInverseError(f"gate {t} ({gate.kind}) is not self-inverse")
    n = circuit.n
    diag = sum_all(width, [clock_projector(_bits(t, width)), clock_projector(_bits(t - 1, width))])
    hop = gate_pauli_expansion(gate, n).tensor(transition_operator(t, width, len(circuit)))
    return (PauliSum.identity(n).tensor(diag) - hop).scale(0.5)


def build_h_prop(circuit: Circuit, width: int | None = None) -> PauliSum:
    """``sum_t H_t`` on ``n + width`` qubits; every gate must be self-inverse."""
    _require_self_inverse(circuit)
    L = len(circuit)
    width = _clock_width(L, width)
    n = circuit.n
    if L == 0:
        return PauliSum.zero(n + width)
    return sum_all(n + width, (step_projector(circuit, t, width) for t in range(1, L + 1)))


def _clock_width(L: int, width: int | None) -> int:
    need = clock_qubit_count(L)
    if width is None:
        return need
    if width < need:
        raise ClockWidthError(f"{width} clock qubits cannot hold {L + 1} steps")
    return width


def build_h_in(n: int, product_map: Sequence[Gate | None] | None, width: int) -> PauliSum:
    """Input penalty: the initial telescope tensored with the clock-zero projector."""
    return initial_hamiltonian(n, product_map).tensor(clock_projector([0] * width))


def unused_clock_penalty(n: int, L: int, width: int) -> PauliSum:
    """``sum_{t > L} I (x) |t><t|`` over unused binary clock codes."""
    parts = [clock_projector(_bits(t, width)) for t in range(L + 1, 1 << width)]
    return PauliSum.identity(n).tensor(sum_all(width, parts))


@dataclass(frozen=True)
class ClockSystem:
    register_circuit: Circuit
    J: float = 1.0
    K_weight: float = 1.0
    padding: int = 0
    product_map: tuple[Gate, ...] = ()
    clock_qubits: int = field(default=-1)

    def __post_init__(self):
        _require_self_inverse(self.register_circuit)
        if not (self.J > 0 and self.K_weight > 0):
            raise ValueError("J and K must be positive")
        object.__setattr__(self, "product_map",
                           tuple(_check_product_map(self.register_circuit.n, self.product_map)))
        need = clock_qubit_count(self.L)
        if self.clock_qubits < 0:
            object.__setattr__(self, "clock_qubits", need)
        elif self.clock_qubits < need:
            raise ClockWidthError(f"{self.clock_qubits} clock qubits cannot hold {self.L + 1} steps")

    @classmethod
    def from_circuit(cls, circuit: Circuit, J: float = 1.0, K_weight: float = 1.0,
                     padding: int = 0, product_map=None, clock_qubits: int = -1) -> "ClockSystem":
        """Compile to self-inverse gates and append ``padding`` identity gates."""
        compiled = compile_self_inverse(circuit)
        padded = compiled.append(*[Gate("I", (0,))] * padding)
        return cls(padded, J, K_weight, padding, tuple(product_map or ()), clock_qubits)

    @property
    def n(self) -> int:
        return self.register_circuit.n

    @property
    def L(self) -> int:
        return len(self.register_circuit)

    @property
    def source_length(self) -> int:
        return self.L - self.padding

    @property
    def total_qubits(self) -> int:
        return self.n + self.clock_qubits

    def input_state(self) -> StateVector:
        return run(Circuit(self.n, self.product_map))

    def target_output(self) -> StateVector:
        return run(self.register_circuit.prefix(self.source_length), self.input_state())

    def h_in(self) -> PauliSum:
        return build_h_in(self.n, self.product_map, self.clock_qubits)

    def h_prop(self) -> PauliSum:
        return build_h_prop(self.register_circuit, self.clock_qubits)


def build_objective(sys: ClockSystem) -> PauliSum:
    """``J H_in + K H_prop + K sum_{t > L} |t><t|``."""
    parts = [sys.h_in().scale(sys.J), sys.h_prop().scale(sys.K_weight)]
    if sys.L + 1 < 1 << sys.clock_qubits:
        parts.append(unused_clock_penalty(sys.n, sys.L, sys.clock_qubits).scale(sys.K_weight))
    return sum_all(sys.total_qubits, parts)


def history_amplitudes(sys: ClockSystem) -> list[np.ndarray]:
    """Register states ``U_t ... U_1 V|0>`` for ``t = 0..L``."""
    from . import kernels

    psi = np.array(sys.input_state().amplitudes)
    out = [psi.copy()]
    for g in sys.register_circuit.gates:
        kernels.apply_matrix(psi, sys.n, g.qubits, g.matrix())
        out.append(psi.copy())
    return out


def history_state(sys: ClockSystem) -> StateVector:
    steps = history_amplitudes(sys)
    width = sys.clock_qubits
    full = np.zeros((1 << sys.n, 1 << width), dtype=complex)
    for t, amp in enumerate(steps):
        full[:, t] = amp
    full /= math.sqrt(len(steps))
    return StateVector(sys.total_qubits, full.reshape(-1))


def gap_lower_bound(L: int, J: float, K_weight: float) -> float:
    if J <= 0 or K_weight <= 0:
        raise ValueError("weights must be positive")
    return max(J, K_weight * math.pi**2 / (2 * (L + 1) ** 2))


def walk_eigenvalues(L: int) -> np.ndarray:
    """``1 - cos(pi k / (L + 1))`` for ``k = 0..L``."""
    k = np.arange(L + 1)
    return 1.0 - np.cos(np.pi * k / (L + 1))


@dataclass(frozen=True)
class GapCheck:
    L: int
    J: float
    K_weight: float
    gap: float
    bound: float
    input_mode_ceiling: float
    walk_mode_ceiling: float

    @property
    def ceiling(self) -> float:
        """Upper bound on the gap from two explicit trial states."""
        return min(self.input_mode_ceiling, self.walk_mode_ceiling)

    @property
    def holds(self) -> bool:
        return self.gap >= self.bound - 1e-9

    def _reason(self) -> str:
        walk = self.walk_mode_ceiling
        if self.bound == self.J:
            return (f"J arm: a history state whose input is orthogonal to V|0> has energy "
                    f"J/(L+1) = {self.input_mode_ceiling:.6g} and no propagation energy")
        return (f"K arm: K*pi^2/(2(L+1)^2) exceeds the first walk eigenvalue "
                f"K(1 - cos(pi/(L+1))) = {walk:.6g}, since 1 - cos x <= x^2/2")

    def violation_report(self) -> dict | None:
        if self.holds:
            return None
        return {
            "L": self.L,
            "J": self.J,
            "K": self.K_weight,
            "gap": self.gap,
            "claimed_bound": self.bound,
            "input_mode_ceiling": self.input_mode_ceiling,
            "walk_mode_ceiling": self.walk_mode_ceiling,
            "reason": self._reason(),
        }


@dataclass(frozen=True)
class ClockCertificate:
    L: int
    clock_qubits: int
    cardinality: int
    ground_energy: float
    gap: float
    gap_bound: float
    degenerate: bool
    ground_overlap_with_history: float
    history_energy: float

    def as_dict(self) -> dict:
        return {
            "L": self.L,
            "clock_qubits": self.clock_qubits,
            "cardinality": self.cardinality,
            "ground_energy": self.ground_energy,
            "gap": self.gap,
            "gap_bound": self.gap_bound,
            "degenerate": self.degenerate,
            "ground_overlap_with_history": self.ground_overlap_with_history,
            "history_energy": self.history_energy,
        }


def certify_clock(sys: ClockSystem, objective: PauliSum | None = None,
                  cap: int | None = None) -> ClockCertificate:
    from .simulator import expected_value

    h = build_objective(sys) if objective is None else objective
    rep = spectral_report(h, **({} if cap is None else {"cap": cap}))
    hist = history_state(sys)
    return ClockCertificate(
        L=sys.L,
        clock_qubits=sys.clock_qubits,
        cardinality=len(h),
        ground_energy=rep.ground_energy,
        gap=rep.gap,
        gap_bound=gap_lower_bound(sys.L, sys.J, sys.K_weight),
        degenerate=rep.degenerate,
        ground_overlap_with_history=rep.ground_vector.overlap(hist),
        history_energy=expected_value(hist, h),
    )


def check_gap_bound(sys: ClockSystem, gap: float | None = None) -> GapCheck:
    """Compare the gap with the claimed bound and with two trial-state ceilings.

    A history state started from an input orthogonal to ``V|0>`` costs
    ``J/(L+1)``; the first excited walk mode started from ``V|0>`` costs
    ``K(1 - cos(pi/(L+1)))``.  Both are orthogonal to the ground state.
    """
    if gap is None:
        gap = spectral_report(build_objective(sys)).gap
    walk = sys.K_weight * (1.0 - math.cos(math.pi / (sys.L + 1)))
    return GapCheck(sys.L, sys.J, sys.K_weight, gap,
                    gap_lower_bound(sys.L, sys.J, sys.K_weight), sys.J / (sys.L + 1), walk)


def predicted_overlap(L: int, K_pad: int) -> float:
    """``1 / (1 + (L + 1) / K)``; zero when padding is disabled."""
    if K_pad < 0:
        raise ValueError("padding must be non-negative")
    if K_pad == 0:
        return 0.0
    return 1.0 / (1.0 + (L + 1) / K_pad)


@dataclass(frozen=True)
class PaddingResult:
    system: ClockSystem
    objective: PauliSum
    predicted: float
    measured: float


def window_overlap(sys: ClockSystem, steps: Sequence[int]) -> float:
    """``|<target (x) w|hist>|^2`` with ``w`` uniform over the clock ``steps``."""
    hist = history_state(sys).amplitudes.reshape(1 << sys.n, 1 << sys.clock_qubits)
    phi = sys.target_output().amplitudes
    proj = phi.conj() @ hist  # <phi| on the register side, one entry per clock code
    amp = proj[list(steps)].sum() / math.sqrt(len(steps))
    return float(abs(amp) ** 2)


def pad_and_project(sys: ClockSystem, K_pad: int, build: bool = True) -> PaddingResult:
    """Re-pad ``sys`` with ``K_pad`` identity gates and compare with the overlap law.

    The measured overlap uses the padding steps ``L+1 .. L+K_pad`` as the
    output window.  With no padding the overlap against ``target (x) |L>``
    is reported instead.
    """
    if K_pad < 0:
        raise ValueError("padding must be non-negative")
    base_len = sys.source_length
    core = sys.register_circuit.prefix(base_len)
    padded = replace(sys, register_circuit=core.append(*[Gate("I", (0,))] * K_pad),
                     padding=K_pad, clock_qubits=-1)
    if K_pad == 0:
        measured = window_overlap(padded, [base_len])
    else:
        measured = window_overlap(padded, range(base_len + 1, base_len + K_pad + 1))
    objective = build_objective(padded) if build else PauliSum.zero(padded.total_qubits)
    return PaddingResult(padded, objective, predicted_overlap(base_len, K_pad), measured)
