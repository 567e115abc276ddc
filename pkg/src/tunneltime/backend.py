"""Kernel backend selection.

The compiled extension is used when it imports; set ``TUNNELTIME_PURE=1`` to
force the numpy/scipy fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _fallback


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("TUNNELTIME_PURE", "") not in ("", "0"):
        return _fallback, "python"
    try:
        from . import _kernels
    except ImportError:
        return _fallback, "python"
    return _kernels, "compiled"


kernels, NAME = _load()


def get(name: str | None = None) -> ModuleType:
    """Return a specific backend module ('compiled' or 'python'), or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _fallback
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return names
    return ["compiled", *names]
