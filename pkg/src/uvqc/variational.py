"""Ansatz families, the derivative-free outer loop and acceptance checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .pauli import DimensionError, PauliSum
from .simulator import (
    SpectralReport,
    StateVector,
    expected_value,
    run,
    sampled_expected_value,
    spectral_report,
    stability_bounds,
)

FAMILIES = ("hardware_efficient", "brick_layer", "circuit_shaped")
GEOMETRIES = ("line", "ring", "grid")
_GOLDEN = (math.sqrt(5) - 1) / 2


class AnsatzError(ValueError):
    pass


def grid_side(n: int) -> int:
    s = math.isqrt(n)
    if s * s != n:
        raise AnsatzError(f"grid geometry needs a perfect-square qubit count, got {n}")
    return s


def geometry_edges(geometry: str, n: int) -> list[tuple[int, int]]:
    """Coupling edges in daisy-chain order."""
    if geometry == "line":
        return [(i, i + 1) for i in range(n - 1)]
    if geometry == "ring":
        edges = [(i, i + 1) for i in range(n - 1)]
        if n > 2:
            edges.append((n - 1, 0))
        return edges
    if geometry == "grid":
        s = grid_side(n)
        edges = []
        for r in range(s):
            for c in range(s):
                q = r * s + c
                if c + 1 < s:
                    edges.append((q, q + 1))
                if r + 1 < s:
                    edges.append((q, q + s))
        return edges
    raise AnsatzError(f"unknown geometry {geometry!r}")


def edge_matchings(edges: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Greedy split of ``edges`` into layers of non-overlapping pairs."""
    layers: list[list[tuple[int, int]]] = []
    for e in edges:
        for layer in layers:
            if all(set(e).isdisjoint(f) for f in layer):
                layer.append(e)
                break
        else:
            layers.append([e])
    return layers


@dataclass(frozen=True)
class AnsatzSpec:
    family: str
    n: int
    depth: int = 1
    geometry: str = "line"
    circuit: Circuit | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise AnsatzError(f"unknown ansatz family {self.family!r}")
        if self.family == "circuit_shaped":
            if self.circuit is None:
                raise AnsatzError("circuit_shaped ansatz needs a circuit")
            if self.circuit.n != self.n:
                raise AnsatzError("circuit width does not match n")
            return
        if self.geometry not in GEOMETRIES:
            raise AnsatzError(f"unknown geometry {self.geometry!r}")
        if self.depth < 0:
            raise AnsatzError("depth must be non-negative")
        geometry_edges(self.geometry, self.n)

    def two_qubit_layers(self) -> list[list[tuple[int, int]]]:
        """Edge lists of the ``depth`` entangling layers."""
        edges = geometry_edges(self.geometry, self.n)
        if self.family == "hardware_efficient":
            return [edges] * self.depth
        colours = edge_matchings(edges) or [[]]
        return [colours[l % len(colours)] for l in range(self.depth)]

    def template(self) -> Circuit:
        """Gate layout with every angle zero."""
        if self.family == "circuit_shaped":
            return self.circuit
        gates: list[Gate] = []
        layers = self.two_qubit_layers()
        for l in range(self.depth + 1):
            gates += [Gate("RY", (q,), 0.0) for q in range(self.n)]
            if l < self.depth:
                gates += [Gate("CRY", e, 0.0) for e in layers[l]]
        return Circuit(self.n, gates, f"{self.family}-{self.geometry}-c{self.depth}")

    @property
    def num_parameters(self) -> int:
        return len(self.template().parameters)

    def periods(self) -> np.ndarray:
        """Angle period per parameter: ``2 pi`` for RY (global sign), ``4 pi`` for CRY."""
        out = []
        for g in self.template().gates:
            if g.is_parameterized:
                out.append(2 * math.pi if g.arity == 1 else 4 * math.pi)
        return np.array(out)

    def circuit_for(self, params: Sequence[float]) -> Circuit:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.num_parameters,):
            raise AnsatzError(f"expected {self.num_parameters} parameters, got {params.shape}")
        return self.template().with_parameters(params)


def ansatz_state(spec: AnsatzSpec, params: Sequence[float]) -> StateVector:
    return run(spec.circuit_for(params))


@dataclass(frozen=True)
class OptimizationRun:
    best_params: np.ndarray
    best_value: float
    evaluations: int
    threshold: float
    seed: int
    trace: tuple[float, ...]
    restarts: int
    sampled_value: float | None = None

    @property
    def accepted(self) -> bool:
        return self.best_value < self.threshold

    def as_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "sampled_value": self.sampled_value,
            "accepted": self.accepted,
            "threshold": self.threshold,
            "evaluations": self.evaluations,
            "restarts": self.restarts,
            "seed": self.seed,
            "best_params": [float(v) for v in self.best_params],
            "trace": list(self.trace),
        }


class _Budget(Exception):
    pass


class _Objective:
    def __init__(self, h: PauliSum, spec: AnsatzSpec, budget: int, shots: int, seed: int):
        if h.n != spec.n:
            raise DimensionError(f"objective on {h.n} qubits, ansatz on {spec.n}")
        self.h, self.spec, self.budget, self.shots = h, spec, budget, shots
        self.calls = 0
        self._seeds = np.random.SeedSequence(seed)

    def __call__(self, params: np.ndarray) -> float:
        if self.calls >= self.budget:
            raise _Budget
        self.calls += 1
        state = ansatz_state(self.spec, params)
        if self.shots:
            child = int(self._seeds.spawn(1)[0].generate_state(1)[0])
            return sampled_expected_value(state, self.h, 1.0, 0.5, seed=child, shots=self.shots).value
        return expected_value(state, self.h)


def _line_search(f: Callable[[float], float], x0: float, f0: float, period: float,
                 grid: int, tol: float) -> tuple[float, float]:
    """Bracket on a coarse periodic grid, then golden-section refine."""
    step = period / grid
    xs = [x0 + k * step for k in range(grid)]
    fs = [f0] + [f(x) for x in xs[1:]]
    j = int(np.argmin(fs))
    best_x, best_f = xs[j], fs[j]
    a, b = best_x - step, best_x + step
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def minimize(objective: PauliSum, spec: AnsatzSpec, delta: float, budget: int = 5000,
             seed: int = 0, init: Sequence[float] | None = None, shots: int = 0,
             grid: int = 6, tol: float = 1e-5, sweep_tol: float = 1e-10) -> OptimizationRun:
    """Seeded coordinate descent with random restarts.

    Each sweep minimises one angle at a time (periodic grid bracket plus
    golden-section search).  A restart from fresh random angles begins once a
    sweep stops improving.  ``init`` seeds the first start.  Evaluation stops
    when ``budget`` objective calls are spent or the value drops below
    ``sweep_tol`` (an exact zero-energy ground state has been reached).
    """
    if not delta > 0:
        raise ValueError("threshold must be positive")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = np.random.default_rng(seed)
    f = _Objective(objective, spec, budget, shots, seed)
    periods = spec.periods()
    p = spec.num_parameters
    best_x = np.zeros(p) if init is None else np.asarray(init, dtype=float).copy()
    if best_x.shape != (p,):
        raise AnsatzError(f"init has {best_x.shape} entries, ansatz needs {p}")
    trace: list[float] = []
    restarts = 0
    x = best_x.copy() if init is not None else rng.uniform(0, 1, p) * periods
    try:
        best_f = fx = f(x)
        best_x = x.copy()
        trace.append(best_f)
        while p > 0 and best_f > sweep_tol:
            before = fx
            for i in range(p):
                def g(v, i=i):
                    y = x.copy()
                    y[i] = v
                    return f(y)

                x[i], fx = _line_search(g, x[i], fx, periods[i], grid, tol)
                if fx < best_f:
                    best_f, best_x = fx, x.copy()
            trace.append(best_f)
            if before - fx < sweep_tol:
                restarts += 1
                x = rng.uniform(0, 1, p) * periods
                fx = f(x)
                if fx < best_f:
                    best_f, best_x = fx, x.copy()
    except _Budget:
        pass
    best_x = np.mod(best_x, periods) if p else best_x
    sampled = None
    if shots:
        sampled = best_f
        best_f = expected_value(ansatz_state(spec, best_x), objective)
    return OptimizationRun(best_x, float(best_f), f.calls, float(delta), seed,
                           tuple(trace), restarts, sampled)


def trace_of(objective: PauliSum) -> float:
    """``2^n`` times the identity coefficient (all other words are traceless)."""
    return objective.trace()


@dataclass(frozen=True)
class WitnessResult:
    energy: float
    accepted: bool
    threshold: float
    gap: float
    trace: float
    lower: float
    upper: float
    ground_overlap: float

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "accepted": self.accepted,
            "threshold": self.threshold,
            "gap": self.gap,
            "trace": self.trace,
            "overlap_lower": self.lower,
            "overlap_upper": self.upper,
            "ground_overlap": self.ground_overlap,
        }


def witness_check(objective: PauliSum, witness: Circuit | StateVector,
                  delta: float | None = None,
                  report: SpectralReport | None = None) -> WitnessResult:
    """Evaluate a witness exactly and attach the overlap sandwich.

    ``delta`` defaults to the certified gap of ``objective``.
    """
    state = run(witness) if isinstance(witness, Circuit) else witness
    if state.n != objective.n:
        raise DimensionError(f"witness on {state.n} qubits, objective on {objective.n}")
    rep = report if report is not None else spectral_report(objective)
    energy = expected_value(state, objective)
    thr = rep.gap if delta is None else float(delta)
    lo, hi = stability_bounds(max(energy, 0.0), rep.gap, trace_of(objective))
    return WitnessResult(energy, energy < thr, thr, rep.gap, trace_of(objective), lo, hi,
                         rep.ground_vector.overlap(state))
