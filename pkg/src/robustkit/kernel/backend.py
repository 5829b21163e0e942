"""Kernel backend selection.

The simplex driver is written once; its dense inner-loop primitives live in
two interchangeable modules:

* ``_pivot_cy`` -- Cython extension compiled at install time,
* ``_pivot_py`` -- numpy implementation with the same signatures.

The compiled module wins when importable.  ``ROBUSTKIT_KERNEL=python`` or
``ROBUSTKIT_KERNEL=cython`` in the environment forces the choice (asking for
the unavailable compiled backend raises ImportError rather than silently
degrading).  Either backend is deterministic on its own: identical inputs
replay identical pivot sequences.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pivot_py

_active: ModuleType = _pivot_py


def available() -> list[str]:
    names = ["python"]
    try:
        from . import _pivot_cy  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def use(name: str) -> None:
    """Select the pivot backend by name ('python' or 'cython')."""
    global _active
    if name == "python":
        _active = _pivot_py
    elif name == "cython":
        from . import _pivot_cy
        _active = _pivot_cy
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


def active() -> ModuleType:
    return _active


def name() -> str:
    return _active.NAME


def _init() -> None:
    forced = os.environ.get("ROBUSTKIT_KERNEL")
    if forced:
        use(forced)
        return
    try:
        use("cython")
    except ImportError:
        use("python")


_init()
