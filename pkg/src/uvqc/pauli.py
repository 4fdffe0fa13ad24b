"""Real-weighted sums of Pauli words and their conjugation by gates.

A word on ``n`` qubits is a pair of bit masks ``(x, z)`` with qubit ``q`` at
bit ``q``: ``I=(0,0)``, ``X=(1,0)``, ``Y=(1,1)``, ``Z=(0,1)``.  The letter
string puts qubit 0 first, and its dense matrix is the Kronecker product in
that order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .circuit import Gate

PRUNE_TOL = 1e-12
DENSE_QUBIT_CAP = 12

_LETTERS = "IXZY"  # indexed by x | (z << 1)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASES = (1, 1j, -1, -1j)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits, or exceed a size cap."""


class NotCliffordError(ValueError):
    """A non-Clifford gate was handed to the Clifford-only path."""


class HermiticityError(ValueError):
    """A combination that should be Hermitian left imaginary coefficients."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliWord:
    """Phase-free Pauli word; ordering is (z, x) mask lexicographic."""

    z: int
    x: int
    n: int

    @classmethod
    def from_label(cls, label: str) -> "PauliWord":
        x = z = 0
        for q, ch in enumerate(label.strip().upper()):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(z, x, len(label.strip()))

    @classmethod
    def identity(cls, n: int) -> "PauliWord":
        return cls(0, 0, n)

    @property
    def letters(self) -> str:
        return "".join(
            _LETTERS[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)] for q in range(self.n)
        )

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return _popcount(self.support)

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for ch in self.letters:
            out = np.kron(out, PAULI_MATRICES[ch])
        return out

    def __str__(self) -> str:
        return self.letters


def mul_words(a: PauliWord, b: PauliWord) -> tuple[PauliWord, complex]:
    """Product ``a b`` as ``(word, phase)`` with phase in {1, i, -1, -i}."""
    if a.n != b.n:
        raise DimensionError(f"cannot multiply words on {a.n} and {b.n} qubits")
    ya, xa, za = a.x & a.z, a.x & ~a.z, a.z & ~a.x
    yb, xb, zb = b.x & b.z, b.x & ~b.z, b.z & ~b.x
    # cyclic pairs XY, YZ, ZX give +i; anticyclic give -i
    plus = _popcount((xa & yb) | (ya & zb) | (za & xb))
    minus = _popcount((xa & zb) | (ya & xb) | (za & yb))
    return PauliWord(a.z ^ b.z, a.x ^ b.x, a.n), _PHASES[(plus - minus) % 4]


@dataclass(frozen=True)
class PauliTerm:
    word: PauliWord
    coefficient: complex

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        w, ph = mul_words(self.word, other.word)
        return PauliTerm(w, ph * self.coefficient * other.coefficient)


class PauliSum:
    """Hermitian operator ``sum_w c_w w`` with real ``c_w``.

    Instances are treated as immutable; every operation returns a new sum.
    """

    __slots__ = ("n", "_terms", "_arrays")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], float] | None = None,
                 *, tol: float = PRUNE_TOL):
        self.n = int(n)
        clean = {}
        for key, c in (terms or {}).items():
            c = float(c)
            if abs(c) >= tol:
                clean[key] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: (kv[0][1], kv[0][0])))
        self._arrays = None

    # construction -----------------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    @classmethod
    def identity(cls, n: int, coeff: float = 1.0) -> "PauliSum":
        return cls(n, {(0, 0): coeff})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[float, str | PauliWord]]) -> "PauliSum":
        acc: dict[tuple[int, int], float] = {}
        for c, w in terms:
            if isinstance(w, str):
                w = PauliWord.from_label(w)
            if w.n != n:
                raise DimensionError(f"word {w} does not have {n} qubits")
            acc[(w.x, w.z)] = acc.get((w.x, w.z), 0.0) + float(c)
        return cls(n, acc)

    @classmethod
    def from_complex(cls, n: int, terms: Mapping[tuple[int, int], complex],
                     tol: float = 1e-10) -> "PauliSum":
        """Build from complex coefficients that must be real up to ``tol``."""
        real = {}
        for key, c in terms.items():
            if abs(c.imag) > tol:
                w = PauliWord(key[1], key[0], n)
                raise HermiticityError(f"coefficient {c} on {w} is not real")
            real[key] = c.real
        return cls(n, real)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, coeff: float = 1.0) -> "PauliSum":
        bx, bz = _LETTER_BITS[letter.upper()]
        return cls(n, {(bx << qubit, bz << qubit): coeff})

    # access ---------------------------------------------------------------------------
    def items(self):
        for (x, z), c in self._terms.items():
            yield PauliWord(z, x, self.n), c

    def terms(self) -> list[PauliTerm]:
        return [PauliTerm(w, c) for w, c in self.items()]

    @property
    def raw(self) -> dict[tuple[int, int], float]:
        return dict(self._terms)

    def coefficient(self, word: PauliWord | str) -> float:
        if isinstance(word, str):
            word = PauliWord.from_label(word)
        return self._terms.get((word.x, word.z), 0.0)

    @property
    def identity_coefficient(self) -> float:
        return self._terms.get((0, 0), 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def cardinality(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliSum) and self.n == other.n and self._terms == other._terms

    def allclose(self, other: "PauliSum", atol: float = 1e-10) -> bool:
        if self.n != other.n:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) <= atol for k in keys)

    def __repr__(self) -> str:
        body = " + ".join(f"{c:.6g}*{w}" for w, c in itertools.islice(self.items(), 6))
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"PauliSum(n={self.n}: {body or '0'}{more})"

    # arithmetic ---------------------------------------------------------------------
    def _check(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise DimensionError(f"qubit counts differ: {self.n} vs {other.n}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return add(self, other)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return add(self, other.scale(-1.0))

    def __neg__(self) -> "PauliSum":
        return self.scale(-1.0)

    def __mul__(self, k: float) -> "PauliSum":
        return self.scale(k)

    __rmul__ = __mul__

    def scale(self, k: float) -> "PauliSum":
        return PauliSum(self.n, {key: k * c for key, c in self._terms.items()})

    def tensor(self, other: "PauliSum") -> "PauliSum":
        """``self (x) other``; ``other``'s qubits are appended after ours."""
        out = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                out[(x1 | (x2 << self.n), z1 | (z2 << self.n))] = c1 * c2
        return PauliSum(self.n + other.n, out)

    def trace(self) -> float:
        return (2.0 ** self.n) * self.identity_coefficient

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # index-space views used by the simulator kernels --------------------------------
    def index_arrays(self):
        """``(xs, zs, ypow, coeffs)`` with masks in amplitude-index bit order."""
        if self._arrays is None:
            m = len(self._terms)
            xs = np.empty(m, dtype=np.int64)
            zs = np.empty(m, dtype=np.int64)
            yp = np.empty(m, dtype=np.int64)
            cs = np.empty(m, dtype=np.float64)
            for i, ((x, z), c) in enumerate(self._terms.items()):
                xs[i] = _reverse_bits(x, self.n)
                zs[i] = _reverse_bits(z, self.n)
                yp[i] = _popcount(x & z)
                cs[i] = c
            self._arrays = (xs, zs, yp, cs)
        return self._arrays

    # text format --------------------------------------------------------------------
    def to_text(self, header: str | None = None) -> str:
        lines = []
        if header:
            lines += [f"# {ln}" for ln in header.splitlines()]
        lines += [f"{c!r} {w.letters}" for w, c in self.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "PauliSum":
        entries = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected '<coefficient> <letters>'")
            try:
                c = float(parts[0])
                w = PauliWord.from_label(parts[1])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            if n is None:
                n = w.n
            elif w.n != n:
                raise DimensionError(f"line {lineno}: word {parts[1]} is not on {n} qubits")
            entries.append((c, w))
        if n is None:
            raise ValueError("empty Pauli file and no qubit count given")
        return cls.from_terms(n, entries)


def _reverse_bits(v: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (v >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def add(a: PauliSum, b: PauliSum) -> PauliSum:
    a._check(b)
    out = dict(a._terms)
    for key, c in b._terms.items():
        out[key] = out.get(key, 0.0) + c
    return PauliSum(a.n, out)


def sum_all(n: int, parts: Iterable[PauliSum]) -> PauliSum:
    acc: dict[tuple[int, int], float] = {}
    for p in parts:
        if p.n != n:
            raise DimensionError(f"qubit counts differ: {n} vs {p.n}")
        for key, c in p._terms.items():
            acc[key] = acc.get(key, 0.0) + c
    return PauliSum(n, acc)


def multiply(a: PauliSum, b: PauliSum) -> dict[tuple[int, int], complex]:
    """Complex coefficient map of the operator product ``a b``."""
    a._check(b)
    acc: dict[tuple[int, int], complex] = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w, ph = mul_words(wa, wb)
            key = (w.x, w.z)
            acc[key] = acc.get(key, 0) + ph * ca * cb
    return acc


def square(h: PauliSum) -> PauliSum:
    """Exact ``h @ h``; cross terms of anticommuting words cancel pairwise."""
    return PauliSum.from_complex(h.n, multiply(h, h))


def cardinality(h: PauliSum) -> int:
    return len(h)


def to_dense(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    if h.n > cap:
        raise DimensionError(f"{h.n} qubits exceeds dense cap {cap}")
    dim = 1 << h.n
    out = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim, dtype=np.int64)
    xs, zs, yp, cs = h.index_arrays()
    phases = np.array([1, 1j, -1, -1j])
    for x, z, p, c in zip(xs, zs, yp, cs):
        # column b -> row b ^ x
        sign = 1 - 2 * (np.bitwise_count(idx & z) & 1).astype(np.int64)
        out[idx ^ x, idx] += c * phases[p & 3] * sign
    return out


# conjugation ------------------------------------------------------------------------
@lru_cache(maxsize=4096)
def _local_table(kind: str, angle: float | None):
    """Image of every local Pauli word under ``U P U^dagger``.

    Returns a tuple indexed by local word code, each entry a tuple of
    ``(code, coefficient)`` pairs.  Local code for ``k`` qubits packs
    ``x`` in the low ``k`` bits and ``z`` in the next ``k`` bits; local
    qubit ``j`` is gate operand ``j``.
    """
    u = Gate(kind, tuple(range(_arity(kind))), angle).matrix()
    k = _arity(kind)
    dim = 1 << k
    words = [PauliWord(code >> k, code & (dim - 1), k) for code in range(dim * dim)]
    mats = [w.matrix() for w in words]
    table = []
    for m in mats:
        img = u @ m @ u.conj().T
        entries = []
        for code, q in enumerate(mats):
            c = np.trace(q @ img) / dim
            if abs(c) > PRUNE_TOL:
                if abs(c.imag) > 1e-9:
                    raise HermiticityError(f"non-real image coefficient under {kind}")
                entries.append((code, float(c.real)))
        table.append(tuple(entries))
    return tuple(table)


def _arity(kind: str) -> int:
    from .circuit import GATE_SPECS

    return GATE_SPECS[kind][0]


def _conjugate(h: PauliSum, gate: Gate) -> PauliSum:
    if max(gate.qubits) >= h.n:
        raise DimensionError(f"gate on {gate.qubits} outside {h.n} qubits")
    table = _local_table(gate.kind, gate.angle)
    k = gate.arity
    qs = gate.qubits
    gmask = 0
    for q in qs:
        gmask |= 1 << q
    out: dict[tuple[int, int], float] = {}
    for (x, z), c in h._terms.items():
        code = 0
        for j, q in enumerate(qs):
            code |= ((x >> q) & 1) << j
            code |= ((z >> q) & 1) << (k + j)
        rx, rz = x & ~gmask, z & ~gmask
        for img, a in table[code]:
            nx, nz = rx, rz
            for j, q in enumerate(qs):
                nx |= ((img >> j) & 1) << q
                nz |= ((img >> (k + j)) & 1) << q
            key = (nx, nz)
            out[key] = out.get(key, 0.0) + a * c
    return PauliSum(h.n, out)


def conjugate_clifford(h: PauliSum, gate: Gate) -> PauliSum:
    """``C h C^dagger`` for a Clifford gate; every word maps to one signed word."""
    if not gate.is_clifford:
        raise NotCliffordError(f"{gate.kind} is not in the Clifford gate set")
    return _conjugate(h, gate)


def conjugate_unitary(h: PauliSum, gate: Gate) -> PauliSum:
    """``U h U^dagger`` for any supported gate.

    A ``k``-qubit gate multiplies the cardinality by at most ``4**k``; the
    budget forecasts use the looser ``16**k``.
    """
    if gate.is_clifford:
        return conjugate_clifford(h, gate)
    return _conjugate(h, gate)


def conjugate_circuit(h: PauliSum, gates: Iterable[Gate]) -> PauliSum:
    for g in gates:
        h = conjugate_unitary(h, g)
    return h


def growth_factor(gate: Gate) -> int:
    """Forecast multiplier for the cardinality after conjugating by ``gate``."""
    return 1 if gate.is_clifford else 16 ** gate.arity


def gate_pauli_expansion(gate: Gate, n: int) -> PauliSum:
    """Pauli expansion of a Hermitian gate embedded in ``n`` qubits."""
    u = gate.matrix()
    k = gate.arity
    dim = 1 << k
    acc = {}
    for code in range(dim * dim):
        w = PauliWord(code >> k, code & (dim - 1), k)
        c = np.trace(w.matrix() @ u) / dim
        if abs(c) <= PRUNE_TOL:
            continue
        x = z = 0
        for j, q in enumerate(gate.qubits):
            x |= ((w.x >> j) & 1) << q
            z |= ((w.z >> j) & 1) << q
        acc[(x, z)] = complex(c)
    return PauliSum.from_complex(n, acc, tol=1e-9)


def projector_one(n: int, qubit: int) -> PauliSum:
    """``|1><1|`` on ``qubit``: ``(I - Z) / 2``."""
    return PauliSum(n, {(0, 0): 0.5, (0, 1 << qubit): -0.5})


def word_sum(word: str, coeff: float = 1.0) -> PauliSum:
    w = PauliWord.from_label(word)
    return PauliSum(w.n, {(w.x, w.z): coeff})
