"""Numeric kernels with a compiled fast path and a pure-Python fallback.

The backend is chosen once at import time: the Cython extension when it is
available, the pure-Python twin otherwise. Set TRICOMI_FORGE_BACKEND to
"python" or "compiled" to force one explicitly (forcing "compiled" without
the built extension raises). Both backends produce bit-identical results;
benchmarks/bench_backends.py measures the speed difference.
"""

from __future__ import annotations

import os

from .errors import MaxDepthExceeded
from .tape import Tape, compile_tape
from . import pykernels
from .pykernels import adaptive_simpson

__all__ = [
    "Tape", "compile_tape", "MaxDepthExceeded", "adaptive_simpson",
    "backend_name", "eval_tape", "eval_grid",
    "construction_value", "construction_grid_fd",
]

_requested = os.environ.get("TRICOMI_FORGE_BACKEND", "auto")
if _requested not in ("auto", "compiled", "python"):
    raise ValueError(
        f"TRICOMI_FORGE_BACKEND must be auto, compiled or python, "
        f"not {_requested!r}")

_impl = pykernels
_BACKEND = "python"
if _requested in ("auto", "compiled"):
    try:
        from . import _ckernels as _impl_compiled
        _impl = _impl_compiled
        _BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "TRICOMI_FORGE_BACKEND=compiled but the extension is not "
                "built; install with a C compiler or use the python backend")


def backend_name() -> str:
    """Name of the active backend: "compiled" or "python"."""
    return _BACKEND


eval_tape = _impl.eval_tape
eval_grid = _impl.eval_grid
construction_value = _impl.construction_value
construction_grid_fd = _impl.construction_grid_fd
