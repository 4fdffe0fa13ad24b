"""Compare the numba kernels with the numpy fallbacks.

    python3 benchmarks/bench_kernels.py --qubits 10 14 18 --repeat 5

Both paths are called directly, so one process times both.  The first
numba call (compilation) is excluded.
"""
import argparse
import time

import numpy as np

from uvqc import _accel, kernels
from uvqc.pauli import PauliSum


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_sum(rng, n, terms):
    labels = {"".join(rng.choice(list("IXYZ"), n)) for _ in range(terms)}
    return PauliSum.from_terms(n, [(1.0, lab) for lab in labels])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--gates", type=int, default=20, help="two-qubit gates per timing")
    ap.add_argument("--terms", type=int, default=50, help="Pauli words per timing")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _accel.HAS_NUMBA:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    # compile once
    kernels._apply_matrix_nb(random_state(rng, 3), 3, np.array([0, 2]), q)
    h0 = random_sum(rng, 3, 4)
    kernels._pauli_expectations_nb(random_state(rng, 3), *h0.index_arrays()[:3])

    print(f"{'kernel':<14}{'n':>4}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for n in args.qubits:
        psi = random_state(rng, n)
        pairs = [tuple(int(x) for x in rng.choice(n, 2, replace=False)) for _ in range(args.gates)]

        def apply_nb():
            s = psi.copy()
            for p in pairs:
                kernels._apply_matrix_nb(s, n, np.array(p, dtype=np.int64), q)

        def apply_np():
            s = psi.copy()
            for p in pairs:
                kernels._apply_matrix_np(s, n, list(p), q)

        h = random_sum(rng, n, args.terms)
        xs, zs, yp, _ = h.index_arrays()
        t_nb = best_of(apply_nb, args.repeat)
        t_np = best_of(apply_np, args.repeat)
        print(f"{'apply_matrix':<14}{n:>4}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.2f}")
        t_nb = best_of(lambda: kernels._pauli_expectations_nb(psi, xs, zs, yp), args.repeat)
        t_np = best_of(lambda: kernels._pauli_expectations_np(psi, xs, zs, yp), args.repeat)
        print(f"{'expectations':<14}{n:>4}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
