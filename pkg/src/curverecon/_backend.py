"""Selects the compiled core when importable.

Set CURVERECON_BACKEND=python to force the pure-Python implementations.
"""
import os

core = None
if os.environ.get("CURVERECON_BACKEND", "").lower() != "python":
    try:
        from . import _core as core  # type: ignore[no-redef]
    except ImportError:
        core = None

NAME = "cython" if core is not None else "python"


def available() -> list[str]:
    return ["cython", "python"] if core is not None else ["python"]


def resolve(backend: str | None):
    """Map a backend request ("auto", "cython", "python") to the core module or None."""
    b = (backend or "auto").lower()
    if b == "auto":
        return core
    if b == "python":
        return None
    if b == "cython":
        if core is None:
            raise RuntimeError("compiled core is not available; reinstall with a C compiler")
        return core
    raise ValueError(f"unknown backend {backend!r}")
