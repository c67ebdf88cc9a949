"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 50 200 800] [--repeat 5]

Prints one row per (kernel, N) with the best-of-``repeat`` time for each
backend and the speedup. Both backends are fed identical inputs and their
outputs are compared before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from traspec import kernels
from traspec.assembly import hamiltonian_matrix
from traspec.eigensolve import _pivmin, gershgorin_bounds
from traspec.systems import EFieldSystem, lambda_star

try:
    from traspec import _kernels as compiled
except ImportError:
    compiled = None


def _cases(N):
    sys = EFieldSystem(1.0, 1.0, 1.5, 1)
    T = hamiltonian_matrix(sys, 0.8 * lambda_star(sys), N)
    lo, hi = gershgorin_bounds(T)
    abstol = np.finfo(float).eps * T.norm()
    piv = _pivmin(T)
    mid = 0.5 * (lo + hi)
    rhs = np.linspace(-1.0, 1.0, N)
    y = np.linspace(0.0, 40.0, 200)
    return {
        "sturm_count": lambda b: b.sturm_count(T.diag, T.sub, mid, piv),
        "bisect_eigenvalues(5)": lambda b: b.bisect_eigenvalues(T.diag, T.sub, 0, 5, lo, hi, abstol, piv),
        "tridiag_solve_shifted": lambda b: b.tridiag_solve_shifted(T.diag, T.sub, 2.9, rhs, piv),
        "laguerre_table(N, 200 pts)": lambda b: b.laguerre_table(N, 1.5, y),
    }


def run(sizes=(50, 200, 800), repeat=5):
    """Return rows ``(kernel, N, python_s, compiled_s or None, speedup or None)``."""
    rows = []
    for N in sizes:
        for name, call in _cases(N).items():
            py = min(timeit.repeat(lambda call=call: call(kernels.python_backend), number=1, repeat=repeat))
            if compiled is None:
                rows.append((name, N, py, None, None))
                continue
            if not np.allclose(np.asarray(call(compiled)), np.asarray(call(kernels.python_backend)), rtol=1e-12):
                raise AssertionError(f"backends disagree on {name} at N={N}")
            cy = min(timeit.repeat(lambda call=call: call(compiled), number=1, repeat=repeat))
            rows.append((name, N, py, cy, py / cy))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 800])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<28}{'N':>6}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}")
    for name, N, py, cy, sp in run(args.sizes, args.repeat):
        cy_s = f"{cy:14.2e}" if cy is not None else f"{'n/a':>14}"
        sp_s = f"{sp:9.1f}x" if sp is not None else f"{'n/a':>10}"
        print(f"{name:<28}{N:>6}{py:14.2e}{cy_s}{sp_s}")


if __name__ == "__main__":
    main()
