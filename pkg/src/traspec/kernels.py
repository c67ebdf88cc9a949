"""Backend selection for the hot loops.

The Cython extension ``traspec._kernels`` is used when it has been built;
otherwise the pure-Python module ``traspec._pykernels`` is used. Setting the
environment variable ``TRASPEC_PURE_PYTHON=1`` forces the fallback.
"""

import os

from traspec import _pykernels

python_backend = _pykernels

if os.environ.get("TRASPEC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from traspec import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

sturm_count = _impl.sturm_count
bisect_eigenvalues = _impl.bisect_eigenvalues
tridiag_solve_shifted = _impl.tridiag_solve_shifted
laguerre_table = _impl.laguerre_table

__all__ = [
    "BACKEND",
    "bisect_eigenvalues",
    "laguerre_table",
    "python_backend",
    "sturm_count",
    "tridiag_solve_shifted",
]
