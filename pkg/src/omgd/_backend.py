"""Selects the kernel implementation at import time.

Prefers the compiled extension, falls back to the numpy twin when the
extension was not built. Set ``OMGD_PURE_PYTHON=1`` to force the fallback
(used by the backend benchmark and tests).
"""

import os

if os.environ.get("OMGD_PURE_PYTHON"):
    from omgd import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from omgd import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from omgd import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
