"""Kernel selection: use the compiled DPLL core when available.

The compiled extension (_dpllcore, built from Cython) and the pure-Python
fallback (_dpll_py) implement the identical deterministic algorithm.  Set
EBSEDP_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _dpll_py

if os.environ.get("EBSEDP_PURE") == "1":
    _impl = _dpll_py
    KERNEL = "pure"
else:
    try:
        from . import _dpllcore as _impl  # type: ignore[no-redef]
        KERNEL = "compiled"
    except ImportError:
        _impl = _dpll_py
        KERNEL = "pure"

solve = _impl.solve
