"""Selects the compiled search kernel, falling back to pure Python.

Set ``LEAFKERNEL_PURE=1`` to force the fallback (used by the benchmark and by
the backend-agreement tests).
"""

from __future__ import annotations

import os

from . import _search_py

if os.environ.get("LEAFKERNEL_PURE", "") not in ("", "0"):
    _impl = _search_py
    BACKEND = "python"
else:
    try:
        from . import _search as _impl  # type: ignore[attr-defined,no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _search_py
        BACKEND = "python"

max_leaf = _impl.max_leaf
count_arborescences = _impl.count_arborescences
collect_arborescences = _impl.collect_arborescences

__all__ = ["BACKEND", "max_leaf", "count_arborescences", "collect_arborescences"]
