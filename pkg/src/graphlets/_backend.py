"""Kernel selection: the compiled core when importable, else the Python port.

Set GRAPHLETS_BACKEND=python to force the fallback.
"""
import os

from . import _pykernels as python

try:
    from . import _core as compiled
except ImportError:  # not built
    compiled = None


def kernels(name=None):
    name = name or os.environ.get("GRAPHLETS_BACKEND") or ("compiled" if compiled else "python")
    if name == "compiled":
        if compiled is None:
            raise ImportError("compiled core not built; reinstall with Cython available")
        return compiled
    if name == "python":
        return python
    raise ValueError(f"unknown backend {name!r}")


def active():
    return "compiled" if kernels() is compiled else "python"
