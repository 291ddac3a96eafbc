"""Kernel selection: the Cython extension when importable, numpy otherwise.

Set SHIFTCONV_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if os.environ.get("SHIFTCONV_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

_impl = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "cython" if compiled_kernels is not None else "python"

r2_fill = _impl.r2_fill
tau_fill = _impl.tau_fill
shifted_dot = _impl.shifted_dot
