"""Kernel backend selection.

The oriented-window pass has two interchangeable implementations: a compiled
Cython extension (fast) and a pure-Python twin (always available).  The
compiled one is preferred at import time; set LUMEN_FORGE_BACKEND=python or
=compiled to force a choice.  Both produce bit-identical output.

LUMEN_FORGE_THREADS caps kernel parallelism (0 or unset = automatic); the
result never depends on the thread count.
"""

from __future__ import annotations

import os

_choice = os.environ.get("LUMEN_FORGE_BACKEND", "auto").strip().lower() or "auto"
if _choice not in ("auto", "compiled", "python"):
    raise RuntimeError(
        f"LUMEN_FORGE_BACKEND must be auto, compiled, or python (got {_choice!r})"
    )

if _choice == "python":
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _kernels_py as _impl

        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "python"


def thread_count() -> int:
    """Requested kernel thread count from the environment (0 = automatic)."""
    raw = os.environ.get("LUMEN_FORGE_THREADS", "").strip()
    if not raw:
        return 0
    n = int(raw)
    if n < 0:
        raise ValueError("LUMEN_FORGE_THREADS must be >= 0")
    return n


def oriented_filter_pass(x, gx, gy, gprime, r, use_median=False, collect=False, threads=None):
    if threads is None:
        threads = thread_count()
    return _impl.oriented_filter_pass(
        x, gx, gy, gprime, r, use_median=use_median, collect=collect, threads=threads
    )
