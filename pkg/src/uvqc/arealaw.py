"""Interaction graphs and the ebit ceiling of layered hardware-efficient circuits."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit
from .pauli import PauliSum
from .simulator import STATE_QUBIT_CAP, CapExceeded, schmidt_ebits
from .variational import AnsatzSpec, ansatz_state, geometry_edges, grid_side


@dataclass(frozen=True)
class InteractionGraph:
    n: int
    adjacency: np.ndarray

    @property
    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))


def interaction_graph(h: PauliSum) -> InteractionGraph:
    """Edge ``(i, j)`` iff some word acts non-trivially on both ``i`` and ``j``."""
    adj = np.zeros((h.n, h.n), dtype=np.int8)
    for w, _ in h.items():
        qs = [q for q in range(h.n) if (w.support >> q) & 1]
        for a, b in itertools.combinations(qs, 2):
            adj[a, b] = adj[b, a] = 1
    return InteractionGraph(h.n, adj)


def two_qubit_depth(circuit: Circuit) -> int:
    """Layers of non-overlapping two-qubit gates after as-soon-as-possible scheduling.

    Single-qubit gates are ignored; three-qubit gates count like two-qubit ones.
    """
    level = [0] * circuit.n
    depth = 0
    for g in circuit.gates:
        if g.arity < 2:
            continue
        d = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = d
        depth = max(depth, d)
    return depth


def max_ebits(n: int, c: int) -> int:
    """``min(floor(n / 2), c)``."""
    if n < 2 or c < 0:
        raise ValueError("need n >= 2 and c >= 0")
    return min(n // 2, c)


def saturating_depth(geometry: str, n: int) -> float:
    """Smallest layer count at which a geometry can saturate ``floor(n/2)`` ebits."""
    if geometry == "line":
        return n / 2
    if geometry == "ring":
        return n / 4
    if geometry == "grid":
        return grid_side(n) / 2
    raise ValueError(f"unknown geometry {geometry!r}")


def contiguous_cuts(n: int) -> list[list[int]]:
    """Prefix cuts ``{0..k-1} | {k..n-1}`` for ``k = 1..n-1``."""
    return [list(range(k)) for k in range(1, n)]


def balanced_cuts(n: int) -> list[list[int]]:
    """Every bipartition with ``floor(n/2)`` qubits on the side holding qubit 0 or not.

    Complementary pairs are listed once.
    """
    k = n // 2
    seen = set()
    out = []
    for part in itertools.combinations(range(n), k):
        key = frozenset(part)
        comp = frozenset(range(n)) - key
        if comp in seen:
            continue
        seen.add(key)
        out.append(list(part))
    return out


def crossing_bound(spec: AnsatzSpec, cut: Sequence[int]) -> int:
    """``min(|A|, |B|, gates crossing the cut)``: rank doubles at most per crossing gate."""
    side = set(cut)
    crossing = sum(1 for layer in spec.two_qubit_layers() for a, b in layer
                   if (a in side) != (b in side))
    return min(len(side), spec.n - len(side), crossing)


@dataclass(frozen=True)
class EbitMeasurement:
    cuts: tuple[tuple[int, ...], ...]
    rank_ebits: np.ndarray
    entropy_ebits: np.ndarray

    @property
    def max_rank(self) -> float:
        return float(self.rank_ebits.max()) if self.rank_ebits.size else 0.0

    @property
    def max_entropy(self) -> float:
        return float(self.entropy_ebits.max()) if self.entropy_ebits.size else 0.0


def measure_ebits(spec: AnsatzSpec, params: Sequence[float],
                  cuts: Iterable[Sequence[int]] | None = None) -> EbitMeasurement:
    if spec.n > STATE_QUBIT_CAP:
        raise CapExceeded(f"{spec.n} qubits exceeds statevector cap")
    cuts = [tuple(c) for c in (contiguous_cuts(spec.n) if cuts is None else cuts)]
    state = ansatz_state(spec, params)
    vals = np.array([schmidt_ebits(state, list(c)) for c in cuts]).reshape(-1, 2)
    return EbitMeasurement(tuple(cuts), vals[:, 0], vals[:, 1])


@dataclass(frozen=True)
class SweepResult:
    geometry: str
    n: int
    depth: int
    two_qubit_depth: int
    draws: int
    bound: int
    cuts: tuple[tuple[int, ...], ...]
    max_rank_per_cut: np.ndarray
    max_entropy_per_cut: np.ndarray
    crossing_bounds: tuple[int, ...]
    violations: int
    entropy_samples: np.ndarray

    def as_dict(self, bins: int = 10) -> dict:
        hi = max(1.0, float(self.n // 2))
        hist, edges = np.histogram(self.entropy_samples, bins=bins, range=(0.0, hi))
        return {
            "geometry": self.geometry,
            "n": self.n,
            "depth": self.depth,
            "two_qubit_depth": self.two_qubit_depth,
            "draws": self.draws,
            "bound": self.bound,
            "saturating_depth": saturating_depth(self.geometry, self.n),
            "cuts": [list(c) for c in self.cuts],
            "max_rank_ebits_per_cut": self.max_rank_per_cut.tolist(),
            "max_entropy_ebits_per_cut": self.max_entropy_per_cut.tolist(),
            "crossing_bounds": list(self.crossing_bounds),
            "bound_violations": self.violations,
            "entropy_histogram": {"counts": hist.tolist(), "edges": edges.tolist()},
        }


def sweep(geometry: str, n: int, depth: int, draws: int, seed: int = 0,
          family: str = "brick_layer",
          cuts: Iterable[Sequence[int]] | None = None) -> SweepResult:
    """Random-parameter sweep; per-draw seeds come from one ``SeedSequence``.

    ``violations`` counts (draw, cut) pairs whose rank ebits exceed
    ``max_ebits(n, c)`` where ``c`` is the two-qubit depth of the ansatz
    circuit (equal to ``depth`` for the brick-layer family).  The recorded entropy samples are the maxima
    over cuts for each draw.
    """
    spec = AnsatzSpec(family, n, depth, geometry)
    cuts = [tuple(c) for c in (contiguous_cuts(n) if cuts is None else cuts)]
    c = two_qubit_depth(spec.template())
    bound = max_ebits(n, c)
    periods = spec.periods()
    max_rank = np.zeros(len(cuts))
    max_ent = np.zeros(len(cuts))
    samples = np.zeros(draws)
    violations = 0
    for d, ss in enumerate(np.random.SeedSequence(seed).spawn(draws)):
        params = np.random.default_rng(ss).uniform(0, 1, spec.num_parameters) * periods
        m = measure_ebits(spec, params, cuts)
        max_rank = np.maximum(max_rank, m.rank_ebits)
        max_ent = np.maximum(max_ent, m.entropy_ebits)
        samples[d] = m.max_entropy
        violations += int(np.count_nonzero(m.rank_ebits > bound + 1e-9))
    crossing = tuple(crossing_bound(spec, c) for c in cuts)
    return SweepResult(geometry, n, depth, c, draws, bound, tuple(cuts), max_rank, max_ent,
                       crossing, violations, samples)
