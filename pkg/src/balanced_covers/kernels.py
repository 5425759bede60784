"""Backend selection for the exact integer kernels.

The compiled module is used when it imports; otherwise the pure-Python
module is. Set ``BALANCED_COVERS_KERNELS=python`` to force the fallback, or
``=compiled`` to make a missing extension an import error.
"""
from __future__ import annotations

import os

from . import _pykernels

_choice = os.environ.get("BALANCED_COVERS_KERNELS", "auto").lower()

if _choice == "python":
    _impl = _pykernels
elif _choice in ("auto", "compiled"):
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _pykernels
else:
    raise ImportError(f"unknown BALANCED_COVERS_KERNELS value {_choice!r}")

BACKEND = "compiled" if _impl is not _pykernels else "python"

det = _impl.det
solve = _impl.solve
rank = _impl.rank
phase_one = _impl.phase_one
smith_diagonal = _impl.smith_diagonal
smith_diagonal_sparse = _pykernels.smith_diagonal_sparse


def backend(name: str):
    """Return the kernel module for ``"python"`` or ``"compiled"``."""
    if name == "python":
        return _pykernels
    if name != "compiled":
        raise ValueError(f"unknown kernel backend {name!r}")
    from . import _ckernels
    return _ckernels
