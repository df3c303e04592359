"""Backend selection for the embedding-training inner loops.

Two interchangeable implementations exist: a numba-compiled one and a plain
numpy one. The NAMEBUGS_BACKEND environment variable picks one ("numba" or
"numpy"); when unset, numba is used if it imports, numpy otherwise. Both
expose softmax_epoch and negsamp_epoch with identical signatures and the
same update order, so a given backend is bit-reproducible run to run.
"""

import os

from ..errors import InputContractError

BACKEND_ENV = "NAMEBUGS_BACKEND"

_cache = {}


def _load(name):
    if name in _cache:
        return _cache[name]
    if name == "numpy":
        from . import numpy_backend as mod
    else:
        from . import numba_backend as mod
    _cache[name] = mod
    return mod


def get_backend(name=None):
    """Resolve the kernel backend by explicit name or environment."""
    if name is None:
        name = os.environ.get(BACKEND_ENV, "").strip() or None
    if name is None:
        try:
            return _load("numba")
        except ImportError:
            return _load("numpy")
    if name not in ("numba", "numpy"):
        raise InputContractError(
            f"unknown backend {name!r} (expected 'numba' or 'numpy')"
        )
    return _load(name)


def backend_name(mod):
    return "numba" if mod.__name__.endswith("numba_backend") else "numpy"
