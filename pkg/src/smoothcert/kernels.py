"""Backend selection for the hot bound/supremum kernels.

The Cython extension ``_bound`` is preferred. Setting ``SMOOTHCERT_PURE=1``
or a failed import selects the pure-Python twin ``_bound_py``.
"""
import importlib
import os

from . import _bound_py

ALPHA_MIN = _bound_py.ALPHA_MIN
ALPHA_MAX = _bound_py.ALPHA_MAX
GRID_POINTS = _bound_py.GRID_POINTS


def _load_compiled():
    try:
        return importlib.import_module("smoothcert._bound")
    except ImportError:
        return None


_compiled = _load_compiled()


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None for default)."""
    if name == "python":
        return _bound_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    if name is not None:
        raise ValueError(f"unknown backend {name!r}")
    if os.environ.get("SMOOTHCERT_PURE", "") not in ("", "0") or _compiled is None:
        return _bound_py
    return _compiled


_active = get_backend()
BACKEND = "cython" if _active is _compiled else "python"

bound_b = _active.bound_b
sup_bound = _active.sup_bound
log_power_mean = _active.log_power_mean


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]
