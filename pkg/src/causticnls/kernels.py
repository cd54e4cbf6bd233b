"""Backend selection for the split-step hot kernels.

Tries the compiled Cython extension first and falls back to the numpy
implementations.  Set CAUSTICNLS_PURE_PYTHON=1 to force the fallback (used
by the benchmark and by backend-parity tests).
"""

import os

from causticnls import _kernels_py

if os.environ.get("CAUSTICNLS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    KERNEL_BACKEND = "python"
else:
    try:
        from causticnls import _kernels as _impl  # type: ignore[no-redef]

        KERNEL_BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
        KERNEL_BACKEND = "python"

nonlinear_phase_inplace = _impl.nonlinear_phase_inplace
multiply_inplace = _impl.multiply_inplace
