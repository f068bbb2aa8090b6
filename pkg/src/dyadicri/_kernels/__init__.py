"""Hot kernels: compiled extension when available, NumPy fallback otherwise.

Set ``DYADICRI_PURE_PYTHON=1`` to force the fallback at import time.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("DYADICRI_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

maxplus_conv = backend.maxplus_conv
compensated_cumsum = backend.compensated_cumsum
sorted_pair_sums = backend.sorted_pair_sums

__all__ = [
    "BACKEND",
    "backend",
    "compiled_backend",
    "python_backend",
    "maxplus_conv",
    "compensated_cumsum",
    "sorted_pair_sums",
]
