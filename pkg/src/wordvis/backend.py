"""Paint-kernel backend selection.

The compiled extension (wordvis._native_kernels) is preferred when it was
built; otherwise the numpy fallback is used. Both produce byte-identical
images. Override with the WORDVIS_BACKEND environment variable or an
explicit backend name ("native", "python", "auto").
"""

from __future__ import annotations

import os

from wordvis import _py_kernels

try:
    from wordvis import _native_kernels
except ImportError:
    _native_kernels = None


def available_backends() -> list[str]:
    names = ["python"]
    if _native_kernels is not None:
        names.insert(0, "native")
    return names


def get_backend(name: str | None = None):
    """Return the kernel module for `name` (default: env override or auto)."""
    if name is None:
        name = os.environ.get("WORDVIS_BACKEND", "auto")
    if name == "auto":
        return _native_kernels if _native_kernels is not None else _py_kernels
    if name == "python":
        return _py_kernels
    if name == "native":
        if _native_kernels is None:
            raise ValueError("native backend requested but the extension is not built")
        return _native_kernels
    raise ValueError(f"unknown backend {name!r}; expected auto, native or python")
