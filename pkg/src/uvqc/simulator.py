"""Dense statevector simulation, expectation values, spectra and entanglement."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .circuit import Circuit, Gate
from .pauli import DimensionError, PauliSum, square, to_dense

STATE_QUBIT_CAP = 22
EIG_DIM_CAP = 4096
DEGENERACY_TOL = 1e-9
SCHMIDT_TOL = 1e-8


class CapExceeded(DimensionError):
    """Requested dense object is larger than the configured cap."""


class DegenerateGroundState(RuntimeError):
    pass


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 1 << self.n:
            raise DimensionError(f"{amps.shape[0]} amplitudes do not fit {self.n} qubits")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized (norm {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        return cls.basis(n, 0)

    @classmethod
    def basis(cls, n: int, index: int | str) -> "StateVector":
        if isinstance(index, str):
            index = int(index, 2)
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def from_array(cls, amps, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(math.log2(amps.shape[0])))
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.n + other.n, np.kron(self.amplitudes, other.amplitudes))

    def overlap(self, other: "StateVector") -> float:
        """``|<self|other>|^2``."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def embed_gate(gate: Gate, n: int) -> np.ndarray:
    """Full ``2^n`` matrix of ``gate`` (oracle path, built column by column)."""
    dim = 1 << n
    out = np.empty((dim, dim), dtype=complex)
    m = gate.matrix()
    for b in range(dim):
        col = np.zeros(dim, dtype=complex)
        col[b] = 1.0
        out[:, b] = kernels._apply_matrix_np(col, n, list(gate.qubits), m)
    return out


def run(circuit: Circuit, state: StateVector | None = None,
        cap: int = STATE_QUBIT_CAP) -> StateVector:
    """Apply the gates of ``circuit`` in order (default input ``|0...0>``)."""
    if circuit.n > cap:
        raise CapExceeded(f"{circuit.n} qubits exceeds statevector cap {cap}")
    if state is None:
        state = StateVector.zero(circuit.n)
    if state.n != circuit.n:
        raise DimensionError(f"circuit width {circuit.n} != state width {state.n}")
    psi = np.array(state.amplitudes, dtype=np.complex128)
    for g in circuit.gates:
        kernels.apply_matrix(psi, circuit.n, g.qubits, g.matrix())
    # renormalize away accumulated rounding only
    psi /= np.linalg.norm(psi)
    return StateVector(circuit.n, psi)


def term_expectations(state: StateVector, h: PauliSum) -> np.ndarray:
    """``<s|P|s>`` for each stored word of ``h``, in canonical order."""
    if state.n != h.n:
        raise DimensionError(f"state width {state.n} != operator width {h.n}")
    xs, zs, yp, _ = h.index_arrays()
    return kernels.pauli_expectations(state.amplitudes, xs, zs, yp)


def expected_value(state: StateVector, h: PauliSum) -> float:
    if len(h) == 0:
        if state.n != h.n:
            raise DimensionError(f"state width {state.n} != operator width {h.n}")
        return 0.0
    _, _, _, cs = h.index_arrays()
    return float(np.dot(cs, term_expectations(state, h)))


def dispersion(state: StateVector, h: PauliSum) -> float:
    """``<H^2> - <H>^2``; zero exactly on eigenstates."""
    e = expected_value(state, h)
    return expected_value(state, square(h)) - e * e


def shots_per_term(h: PauliSum, eps: float, delta: float) -> int:
    """Hoeffding shot count shared by every non-identity word.

    With ``m`` measured words, each estimate of ``c_j <P_j>`` lies in
    ``[-|c_j|, |c_j|]``.  Giving each word an error share ``eps / m`` and
    failure share ``delta / m`` yields
    ``N = ceil(2 ln(2m/delta) (m max|c|)^2 / eps^2)``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    cs = [abs(c) for w, c in h.items() if not w.is_identity()]
    m = len(cs)
    if m == 0:
        return 0
    return math.ceil(2.0 * math.log(2.0 * m / delta) * (m * max(cs)) ** 2 / eps**2)


@dataclass(frozen=True)
class SampledEstimate:
    value: float
    shots_per_term: int
    measured_terms: int
    total_shots: int


def sampled_expected_value(state: StateVector, h: PauliSum, eps: float, delta: float,
                           seed: int = 0, shots: int | None = None) -> SampledEstimate:
    """Estimate ``<H>`` from simulated single-word measurements.

    Each non-identity word is measured in its own eigenbasis; outcome ``+1``
    occurs with probability ``(1 + <P>) / 2``.  Each word draws from its own
    child of one ``SeedSequence`` so results do not depend on term order.
    """
    n_shots = shots_per_term(h, eps, delta) if shots is None else int(shots)
    exp = term_expectations(state, h)
    children = np.random.SeedSequence(seed).spawn(len(h))
    value = 0.0
    measured = 0
    for (w, c), e, ss in zip(h.items(), exp, children):
        if w.is_identity():
            value += c
            continue
        measured += 1
        p_plus = min(1.0, max(0.0, 0.5 * (1.0 + e)))
        k = np.random.default_rng(ss).binomial(n_shots, p_plus)
        value += c * (2.0 * k - n_shots) / n_shots
    return SampledEstimate(value, n_shots, measured, n_shots * measured)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    gap: float
    ground_vector: StateVector
    degenerate: bool
    max_residual: float
    eigenvectors: np.ndarray | None = None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def spectral_report(h: PauliSum, cap: int = EIG_DIM_CAP, keep_vectors: bool = False,
                    degeneracy_tol: float = DEGENERACY_TOL) -> SpectralReport:
    """Full dense spectrum of ``h`` with residual check."""
    dim = 1 << h.n
    if dim > cap:
        raise CapExceeded(f"dimension {dim} exceeds eigensolver cap {cap}")
    mat = to_dense(h, cap=max(h.n, 1))
    vals, vecs = np.linalg.eigh(mat)
    resid = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
    max_res = float(resid.max()) if resid.size else 0.0
    if max_res > 1e-8:
        raise RuntimeError(f"eigensolver residual {max_res:.3e} above 1e-8")
    gap = float(vals[1] - vals[0]) if dim > 1 else math.inf
    g = vecs[:, 0]
    # fix the global phase: largest component real positive
    j = int(np.argmax(np.abs(g)))
    g = g * np.exp(-1j * np.angle(g[j]))
    return SpectralReport(
        eigenvalues=vals,
        gap=max(gap, 0.0),
        ground_vector=StateVector(h.n, g / np.linalg.norm(g)),
        degenerate=gap < degeneracy_tol,
        max_residual=max_res,
        eigenvectors=vecs if keep_vectors else None,
    )


def stability_bounds(energy: float, gap: float, trace: float) -> tuple[float, float]:
    """Overlap sandwich ``(1 - E/gap, 1 - E/Tr H)`` for a zero-ground-energy ``H``.

    The lower value may be negative (vacuous) and is returned unchanged.
    """
    if not gap > 0:
        raise ValueError("gap must be positive")
    if not trace > 0:
        raise ValueError("trace must be positive")
    return 1.0 - energy / gap, 1.0 - energy / trace


def _cut_qubits(n: int, cut) -> list[int]:
    if isinstance(cut, (int, np.integer)):
        part = [q for q in range(n) if (int(cut) >> q) & 1]
    else:
        part = sorted(set(int(q) for q in cut))
    if not part or len(part) >= n or min(part) < 0 or max(part) >= n:
        raise ValueError(f"trivial or invalid bipartition {cut!r} of {n} qubits")
    return part


def schmidt_coefficients(state: StateVector, cut) -> np.ndarray:
    part = _cut_qubits(state.n, cut)
    rest = [q for q in range(state.n) if q not in part]
    psi = state.amplitudes.reshape((2,) * state.n).transpose(part + rest)
    return np.linalg.svd(psi.reshape(1 << len(part), -1), compute_uv=False)


def schmidt_ebits(state: StateVector, cut: int | Sequence[int],
                  tol: float = SCHMIDT_TOL) -> tuple[float, float]:
    """``(log2 Schmidt rank, von Neumann entropy in bits)`` across ``cut``.

    ``cut`` is the set of qubits on one side, as a list or a bit mask with
    qubit ``q`` at bit ``q``.
    """
    s = schmidt_coefficients(state, cut)
    rank = int(np.count_nonzero(s > tol))
    p = s[s > tol] ** 2
    p = p / p.sum()
    entropy = float(-np.sum(p * np.log2(p)))
    return math.log2(max(rank, 1)), max(entropy, 0.0)
