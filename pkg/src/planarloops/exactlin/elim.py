"""Backend selection for the elimination kernels.

The compiled kernels are used when importable; setting the environment
variable ``PLANARLOOPS_PURE_PYTHON=1`` forces the Python implementation.
"""

from __future__ import annotations

import os

from . import _pyelim

BACKEND = "python"
_kernels = _pyelim

if os.environ.get("PLANARLOOPS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _celim as _kernels  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # extension not built
        _kernels = _pyelim


def rank_mod_p(nrows, ncols, r, c, v, p, backend=None):
    kern = _pick(backend)
    return kern.rank_mod_p(nrows, ncols, r, c, v, p)


def unit_reduce(nrows, ncols, r, c, v, backend=None):
    kern = _pick(backend)
    if kern is not _pyelim:
        try:
            return kern.unit_reduce(nrows, ncols, r, c, v)
        except (OverflowError, TypeError):
            pass
    return _pyelim.unit_reduce(nrows, ncols, r, c, v)


def _pick(backend):
    if backend is None:
        return _kernels
    if backend == "python":
        return _pyelim
    if backend == "cython":
        from . import _celim

        return _celim
    raise ValueError(f"unknown backend {backend!r}")
