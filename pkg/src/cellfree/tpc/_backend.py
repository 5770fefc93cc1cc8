"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when it imported cleanly. Set the
environment variable CELLFREE_PURE_PYTHON=1 before import to force the
fallback, or call set_backend() at runtime (used by tests and the
benchmark).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_active = _kernels_py if (
    _compiled is None or os.environ.get("CELLFREE_PURE_PYTHON") == "1"
) else _compiled


def available() -> dict:
    """Importable kernel modules keyed by backend name."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def active():
    return _active


def name() -> str:
    return "python" if _active is _kernels_py else "cython"


def set_backend(backend: str) -> None:
    global _active
    try:
        _active = available()[backend]
    except KeyError:
        raise ValueError(f"backend '{backend}' not available; "
                         f"have {sorted(available())}") from None
