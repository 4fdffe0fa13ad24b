"""Hot loops: gate application and Pauli expectation values on dense states.

Qubit ``q`` of an ``n``-qubit register lives at bit ``n - 1 - q`` of the
amplitude index, so qubit 0 is the leftmost tensor factor.  Each public
function dispatches to a numba kernel or to a pure numpy implementation,
depending on :data:`uvqc._accel.HAS_NUMBA`.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit


@njit
def _apply_matrix_nb(state, n, targets, mat):
    k = targets.shape[0]
    dim = 1 << k
    pos = np.empty(k, dtype=np.int64)
    tmask = 0
    for j in range(k):
        pos[j] = n - 1 - targets[j]
        tmask |= 1 << pos[j]
    offsets = np.zeros(dim, dtype=np.int64)
    for a in range(dim):
        off = 0
        for j in range(k):
            if (a >> (k - 1 - j)) & 1:
                off |= 1 << pos[j]
        offsets[a] = off
    buf = np.empty(dim, dtype=np.complex128)
    for base in range(1 << n):
        if base & tmask:
            continue
        for a in range(dim):
            buf[a] = state[base | offsets[a]]
        for a in range(dim):
            acc = 0j
            for b in range(dim):
                acc += mat[a, b] * buf[b]
            state[base | offsets[a]] = acc
    return state


def _apply_matrix_np(state, n, targets, mat):
    k = len(targets)
    psi = state.reshape((2,) * n)
    op = mat.reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    state[:] = out.reshape(-1)
    return state


def apply_matrix(state: np.ndarray, n: int, targets, mat: np.ndarray) -> np.ndarray:
    """Apply a ``2^k x 2^k`` matrix to ``targets`` of ``state`` in place."""
    targets = np.asarray(targets, dtype=np.int64)
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    if _accel.HAS_NUMBA:
        return _apply_matrix_nb(state, n, targets, mat)
    return _apply_matrix_np(state, n, targets, mat)


@njit
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit
def _pauli_expectations_nb(state, xs, zs, ypow):
    m = xs.shape[0]
    out = np.empty(m, dtype=np.float64)
    phases = np.array([1.0 + 0j, 1j, -1.0 + 0j, -1j])
    for t in range(m):
        x = xs[t]
        z = zs[t]
        acc = 0j
        for b in range(state.shape[0]):
            amp = state[b]
            if amp == 0:
                continue
            v = np.conj(state[b ^ x]) * amp
            if _parity(z & b):
                acc -= v
            else:
                acc += v
        out[t] = (phases[ypow[t] & 3] * acc).real
    return out


def _pauli_expectations_np(state, xs, zs, ypow):
    idx = np.arange(state.shape[0], dtype=np.int64)
    phases = np.array([1.0, 1j, -1.0, -1j])
    out = np.empty(len(xs), dtype=np.float64)
    for t, (x, z, p) in enumerate(zip(xs, zs, ypow)):
        sign = 1 - 2 * (np.bitwise_count(idx & z) & 1).astype(np.int64)
        acc = np.vdot(state[idx ^ x], sign * state)
        out[t] = (phases[p & 3] * acc).real
    return out


def pauli_expectations(state: np.ndarray, xs, zs, ypow) -> np.ndarray:
    """Real parts of ``<s|P_t|s>`` for words given as index-space masks.

    ``ypow[t]`` is the number of Y letters in word ``t`` (each Y = i X Z).
    """
    xs = np.asarray(xs, dtype=np.int64)
    zs = np.asarray(zs, dtype=np.int64)
    ypow = np.asarray(ypow, dtype=np.int64)
    state = np.ascontiguousarray(state, dtype=np.complex128)
    if _accel.HAS_NUMBA:
        return _pauli_expectations_nb(state, xs, zs, ypow)
    return _pauli_expectations_np(state, xs, zs, ypow)
