"""Selects the geometry kernel backend at import time.

The compiled Cython extension is preferred; a pure-NumPy fallback with
identical semantics is used when the extension is unavailable or when
``MATROID_ELICIT_PURE=1`` is set (useful for the backend benchmark and
for debugging).
"""

from __future__ import annotations

import os

_force_pure = os.environ.get("MATROID_ELICIT_PURE", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

if _force_pure:
    from . import _facetadj_py as _impl
else:
    try:
        from . import _facetadj as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _facetadj_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND_NAME
facet_adjacency_pairs = _impl.facet_adjacency_pairs
ge_rank = _impl.ge_rank

__all__ = ["BACKEND", "facet_adjacency_pairs", "ge_rank"]
