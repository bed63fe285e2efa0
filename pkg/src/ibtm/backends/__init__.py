"""Kernel backend selection for the hot per-document inference loop.

Two interchangeable implementations exist: a numba-jitted one
(`nb_kernels`) and a pure-numpy one (`np_kernels`). The environment
variable IBTM_BACKEND picks one explicitly ("numba" or "numpy");
unset or "auto" uses numba when it imports, numpy otherwise.

Both expose the same two functions:

    estep_document(...)   coordinate ascent on one document's local factors
    document_elbo(...)    that document's evidence-bound contribution
"""

from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

_cache: dict = {}


def _load(name: str):
    if name not in _cache:
        if name == "numpy":
            from . import np_kernels

            _cache[name] = np_kernels
        elif name == "numba":
            from . import nb_kernels

            _cache[name] = nb_kernels
        else:
            raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    return _cache[name]


def default_backend_name() -> str:
    env = os.environ.get("IBTM_BACKEND", "auto").strip().lower() or "auto"
    if env in ("numpy", "np"):
        return "numpy"
    if env in ("numba", "nb"):
        return "numba"
    if env != "auto":
        raise ValueError(f"IBTM_BACKEND={env!r} not understood (use 'numba', 'numpy' or 'auto')")
    try:
        import numba  # noqa: F401
    except ImportError:
        logger.info("numba unavailable, using the pure-numpy kernel path")
        return "numpy"
    return "numba"


def get_backend(name: str | None = None):
    """Return the kernel module for `name` (default: env-resolved choice)."""
    return _load(name if name is not None else default_backend_name())
