"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--quick]

Times each kernel on the same inputs with both backends, checks the outputs
agree, and prints a table with the speed-up.
"""
import argparse
import sys
import timeit

import numpy as np

from eltip import _fallback
from eltip.dynamics import initial_state
from eltip.formats import load_fixture
from eltip.ising import IsingProblem

try:
    from eltip import _kernels
except ImportError:
    sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")


def random_problem(n, seed=0):
    rng = np.random.default_rng(seed)
    couplings = {(i, j): rng.normal() for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5}
    return IsingProblem(n, couplings, tuple(rng.normal(size=n)))


def cases(quick):
    fig = load_fixture("fig1b").problem
    d4 = _kernels.diagonal_energies(4, *fig.term_arrays)
    big = random_problem(12 if quick else 16)
    nb = big.n
    dbig = _kernels.diagonal_energies(nb, *big.term_arrays)
    steps = 200 if quick else 2000
    sv_rk = np.linspace(0, 1, 2 * steps + 1)
    sv_ch = np.linspace(0, 1, steps // 10)

    def rk4(mod, d, n, sv):
        def run():
            psi = initial_state(n)
            mod.rk4_steps(d, n, psi, sv, 0.01, 0.0)
            return psi
        return run

    def cheb(mod, d, n, sv):
        def run():
            psi = initial_state(n)
            mod.chebyshev_steps(d, n, psi, sv, 0.3, float(d.min()), float(d.max()))
            return psi
        return run

    yield f"diagonal_energies n={nb}", lambda m: (lambda: m.diagonal_energies(nb, *big.term_arrays))
    yield f"apply_hamiltonian n={nb}", lambda m: (lambda: m.apply_hamiltonian(dbig, nb, 0.4, initial_state(nb)))
    yield f"rk4_steps n=4 x{steps}", lambda m: rk4(m, d4, 4, sv_rk)
    yield f"chebyshev_steps n=4 x{len(sv_ch)}", lambda m: cheb(m, d4, 4, sv_ch)
    yield f"rk4_steps n={nb} x20", lambda m: rk4(m, dbig, nb, np.linspace(0, 1, 41))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':<32} {'cython':>11} {'numpy':>11} {'speed-up':>9}")
    for name, make in cases(args.quick):
        fc, fp = make(_kernels), make(_fallback)
        a, b = np.asarray(fc()), np.asarray(fp())
        if not np.allclose(a, b, atol=1e-10):
            raise SystemExit(f"{name}: backends disagree (max diff {np.max(np.abs(a - b)):.3g})")
        tc = min(timeit.repeat(fc, number=1, repeat=args.repeat))
        tp = min(timeit.repeat(fp, number=1, repeat=args.repeat))
        print(f"{name:<32} {tc * 1e3:9.3f}ms {tp * 1e3:9.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
