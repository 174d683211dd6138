"""Pick the compiled kernels when available, the numpy ones otherwise.

Set ``BNSI_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("BNSI_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
rref = _impl.rref
matmul = _impl.matmul
first_zero_product = _impl.first_zero_product
span_extend = _impl.span_extend
phi_peel = _impl.phi_peel
bmax_search = _impl.bmax_search
best_partition = _impl.best_partition

__all__ = [
    "BACKEND",
    "rref",
    "matmul",
    "first_zero_product",
    "span_extend",
    "phi_peel",
    "bmax_search",
    "best_partition",
]
