"""Kernel backend selection.

The compiled extension is used when available; otherwise the numpy fallback.
Set OPUCLAB_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-agreement tests).
"""

import os

from . import _pure

if os.environ.get("OPUCLAB_PURE_PYTHON") == "1":
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

levinson = _impl.levinson
convolve_direct = _impl.convolve_direct
exp_series = _impl.exp_series

__all__ = ["BACKEND", "levinson", "convolve_direct", "exp_series"]
