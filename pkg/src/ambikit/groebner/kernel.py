"""Select the compiled reduction kernel when available.

Set ``AMBIKIT_PURE_PYTHON=1`` to force the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _kernel_py

BACKEND = "python"
reduce_poly = _kernel_py.reduce_poly
find_reducer = _kernel_py.find_reducer

if os.environ.get("AMBIKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        BACKEND = "compiled"
        reduce_poly = _kernel.reduce_poly
        find_reducer = _kernel.find_reducer


def backends() -> dict:
    """All importable kernels by name (used by the benchmark)."""
    out = {"python": _kernel_py}
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover
        pass
    else:
        out["compiled"] = _kernel
    return out
