"""Selects the compiled kernels when the extension is built, numpy otherwise."""
from __future__ import annotations

from types import ModuleType

from . import _accel_py

try:
    from . import _accel as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled if _compiled is not None else _accel_py


def available() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def name() -> str:
    return "cython" if _active is _compiled else "python"


def use(which: str) -> None:
    """Switch the active implementation (``"cython"`` or ``"python"``)."""
    global _active
    if which == "python":
        _active = _accel_py
    elif which == "cython":
        if _compiled is None:
            raise RuntimeError("compiled extension pbedg._accel is not built")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {which!r}")


def get() -> ModuleType:
    return _active
