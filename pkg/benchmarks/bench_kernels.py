"""Compare the numba and pure-numpy statevector kernels.

Both kernel sets are imported side by side, checked for agreement on the same
inputs, then timed. An end-to-end H2 VQE is also timed once per backend by
re-running this script in a subprocess with ``SHARC_VQE_BACKEND`` set.

    python benchmarks/bench_kernels.py [--qubits 8 10 12] [--repeats 20]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from sharc_vqe.kernels import NUMBA_KERNELS, NUMPY_KERNELS


def random_problem(n_qubits, n_terms, rng):
    dim = 1 << n_qubits
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    xs = rng.integers(0, dim, size=n_terms).astype(np.int64)
    zs = rng.integers(0, dim, size=n_terms).astype(np.int64)
    n_y = np.array([bin(int(x) & int(z)).count("1") for x, z in zip(xs, zs)])
    phases = (1j ** n_y).astype(np.complex128)
    return psi, xs, zs, phases


def best_of(fn, repeats):
    fn()  # warm-up (JIT compile / cache load)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(qubits, repeats):
    rng = np.random.default_rng(7)
    print(f"{'kernel':<22s}{'qubits':>7s}{'numba (ms)':>12s}{'numpy (ms)':>12s}{'speedup':>9s}")
    for n in qubits:
        psi, xs, zs, phases = random_problem(n, 64, rng)
        counts = rng.integers(0, 50, size=1 << n).astype(float)
        cases = {
            "pauli_expectations": lambda k: k["pauli_expectations"](psi, xs, zs, phases),
            "apply_pauli_rotation": lambda k: k["apply_pauli_rotation"](
                psi.copy(), int(xs[0]), int(zs[0]), phases[0], 0.3),
            "parity_expectations": lambda k: k["parity_expectations"](counts, zs),
        }
        for name, call in cases.items():
            a, b = call(NUMBA_KERNELS), call(NUMPY_KERNELS)
            if a is not None and not np.allclose(a, b, atol=1e-10):
                raise SystemExit(f"{name}: backends disagree at {n} qubits")
            t_nb = best_of(lambda: call(NUMBA_KERNELS), repeats)
            t_np = best_of(lambda: call(NUMPY_KERNELS), repeats)
            print(f"{name:<22s}{n:>7d}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>9.2f}")


def end_to_end():
    from sharc_vqe import build_uccsd, get_fixture, vqe
    from sharc_vqe._backend import BACKEND

    fx = get_fixture("h2")
    h = fx.load()
    circuit = build_uccsd(4, fx.occupied_modes, fx.mapping)
    vqe(h, circuit)  # warm-up
    t0 = time.perf_counter()
    result = vqe(h, circuit)
    print(f"{BACKEND:<6s} H2 VQE: {time.perf_counter() - t0:.3f} s, E = {result.energy:.8f}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--qubits", type=int, nargs="+", default=[8, 10, 12])
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--end-to-end", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.end_to_end:
        end_to_end()
        return
    bench_kernels(args.qubits, args.repeats)
    print(flush=True)
    for backend in ("numba", "numpy"):
        env = dict(os.environ, SHARC_VQE_BACKEND=backend)
        subprocess.run([sys.executable, __file__, "--end-to-end"], env=env, check=True)


if __name__ == "__main__":
    main()
