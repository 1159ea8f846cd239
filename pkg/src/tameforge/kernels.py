"""Select the term-map kernels at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python implementation in ``_kernels_py`` takes over.  Setting
``TAMEFORGE_PURE_PYTHON=1`` forces the fallback (tests and benchmarks use it).
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("TAMEFORGE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

mul_terms = _impl.mul_terms
add_scaled_into = _impl.add_scaled_into

__all__ = ["BACKEND", "mul_terms", "add_scaled_into"]
