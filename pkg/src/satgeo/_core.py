"""Kernel backend selection.

The compiled Cython kernels are preferred; the pure numpy/Python fallback is
used when the extension is missing or SATGEO_BACKEND=fallback is set.  Both
expose the same functions with identical semantics and identical random-word
consumption.
"""

from __future__ import annotations

import os

_forced = os.environ.get("SATGEO_BACKEND")

if _forced == "fallback":
    from . import _fallback as impl
elif _forced == "compiled":
    from . import _kernels as impl  # ImportError here is deliberate: explicit request
else:
    try:
        from . import _kernels as impl
    except ImportError:
        from . import _fallback as impl


def backend() -> str:
    """Name of the active kernel backend ('compiled' or 'fallback')."""
    return impl.BACKEND_NAME


def load_backend(name: str):
    """Load a specific backend module (for parity tests and benchmarks)."""
    if name == "compiled":
        from . import _kernels
        return _kernels
    if name == "fallback":
        from . import _fallback
        return _fallback
    raise ValueError(f"unknown backend {name!r}")
