"""Pick the compiled kernels when available, else the numpy fallback.

Set ``ELTIP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("ELTIP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        kernels = _kernels
        BACKEND = "cython"
