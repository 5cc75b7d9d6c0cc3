"""Numeric backend selection.

Two interchangeable kernel lanes exist: the compiled GSL/Cython extension
(fabc._core) and the pure NumPy/SciPy fallback (fabc._purepy). The compiled
lane is preferred when importable; set FABC_PURE_PYTHON=1 to ignore it.

`use()` temporarily switches lanes, which the test suite and the benchmark
use to compare both in one process.
"""

import contextlib
import os

from . import _purepy

_BACKENDS = {"python": _purepy}

if not os.environ.get("FABC_PURE_PYTHON"):
    try:
        from . import _core
        _BACKENDS["compiled"] = _core
    except ImportError:
        pass

_active = _BACKENDS.get("compiled", _purepy)


def active():
    """The currently selected kernel module."""
    return _active


def name() -> str:
    return _active.name


def available() -> list[str]:
    return sorted(_BACKENDS)


def get(backend_name: str):
    try:
        return _BACKENDS[backend_name]
    except KeyError:
        raise ValueError(
            f"unknown backend {backend_name!r}; available: {available()}"
        ) from None


@contextlib.contextmanager
def use(backend_name: str):
    """Temporarily select a backend by name ('python' or 'compiled')."""
    global _active
    previous = _active
    _active = get(backend_name)
    try:
        yield _active
    finally:
        _active = previous
