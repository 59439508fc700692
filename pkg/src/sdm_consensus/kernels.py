"""Kernel backend selection.

Imports the compiled extension when available and falls back to the
pure-Python twin otherwise. ``SDM_CONSENSUS_BACKEND`` overrides the choice:
``native`` (fail if not built), ``python``, or ``auto`` (the default).
Both backends return bit-identical results.
"""

from __future__ import annotations

import os

from . import _fallback

_requested = os.environ.get("SDM_CONSENSUS_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _fallback
elif _requested in ("auto", "native"):
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "native":
            raise
        _impl = _fallback
else:
    raise ValueError(
        f"unknown SDM_CONSENSUS_BACKEND {_requested!r}; use auto, native, or python"
    )

BACKEND: str = _impl.BACKEND
evaluate_matrix = _impl.evaluate_matrix
abs_differences = _impl.abs_differences
rms_distance = _impl.rms_distance
social_weights = _impl.social_weights
weighted_totals = _impl.weighted_totals
