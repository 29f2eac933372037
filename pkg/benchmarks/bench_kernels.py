"""Compare the compiled and pure-python kernel backends.

Times the two hot paths behind every observable: Hermitian
eigendecomposition of transfer-matrix-sized problems and the brute-force
amplitude builder for finite rings. Run directly:

    python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from spin2mp import available_backends, build_g, use_backend
from spin2mp.backend import eigh, finite_amplitudes
from spin2mp.mpstate import ModelParams


def _time(fn, repeat):
    best = float('inf')
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eigh(backend_name, n_matrices=400):
    rng = np.random.default_rng(7)
    mats = []
    for _ in range(n_matrices):
        M = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
        mats.append(M + M.conj().T)

    def run():
        for M in mats:
            eigh(M)

    with use_backend(backend_name):
        return _time(run, repeat=3)


def bench_amplitudes(backend_name, L):
    tensor = build_g(ModelParams.acritical(1.3)).tensor

    def run():
        finite_amplitudes(tensor, L)

    with use_backend(backend_name):
        return _time(run, repeat=3)


def main():
    backends = available_backends()
    print("backends available:", ", ".join(backends))
    print()
    print("%-28s" % "kernel" + "".join("%14s" % b for b in backends))

    times = {b: bench_eigh(b) for b in backends}
    row = "%-28s" % "eigh 9x9 x400"
    row += "".join("%12.1f ms" % (times[b] * 1e3) for b in backends)
    print(row)

    for L in (6, 7, 8):
        times = {b: bench_amplitudes(b, L) for b in backends}
        row = "%-28s" % ("finite_amplitudes L=%d" % L)
        row += "".join("%12.1f ms" % (times[b] * 1e3) for b in backends)
        print(row)

    if len(backends) == 2:
        t_c = bench_amplitudes("compiled", 8)
        t_p = bench_amplitudes("python", 8)
        print()
        print("amplitude speedup at L=8: %.1fx" % (t_p / t_c))


if __name__ == "__main__":
    main()
