"""Batch kernels used by the Monte Carlo oracles.

The compiled extension ``nmlgauss._kernels`` is used when it imports; the
NumPy versions in ``nmlgauss._kernels_py`` are the fallback.  Setting
``NMLG_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("NMLG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

row_stats = _impl.row_stats
log_envelope_stats = _impl.log_envelope_stats
log_envelope_rows = _impl.log_envelope_rows
quad_form_rows = _impl.quad_form_rows

__all__ = [
    "BACKEND",
    "row_stats",
    "log_envelope_stats",
    "log_envelope_rows",
    "quad_form_rows",
]
