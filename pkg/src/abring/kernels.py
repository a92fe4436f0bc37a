"""Backend selection for the composition-table kernels.

The compiled extension ``abring._kernels`` is used when it was built;
otherwise the numpy implementation in ``abring._kernels_py`` takes over.
Set ``ABRING_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py

if os.environ.get("ABRING_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

BACKENDS = {"python": _kernels_py}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl


@dataclass(frozen=True, eq=False)
class CompositionTable:
    """Flat integer encoding of a finite category's composition.

    ``homids[homptr[a*n+b]:homptr[a*n+b+1]]`` lists the morphisms ``a -> b``
    and ``loc[f]`` is the position of ``f`` in that list.
    """

    nobj: int
    src: np.ndarray      # int32[N]
    dst: np.ndarray      # int32[N]
    loc: np.ndarray      # int32[N]
    nhom: np.ndarray     # int64[n*n]
    homptr: np.ndarray   # int64[n*n + 1]
    homids: np.ndarray   # int32[N]
    boff: np.ndarray     # int64[n*n*n]
    table: np.ndarray    # int32[sum of block sizes]

    @property
    def size(self) -> int:
        return len(self.src)


def get_backend(name: str | None = None):
    if name is None:
        return _impl
    return BACKENDS[name]


def compose_many(t, g, f):
    return _impl.compose_many(t, g, f)


def assoc_exhaustive(t):
    return _impl.assoc_exhaustive(t)


def assoc_sampled(t, f, g, h):
    return _impl.assoc_sampled(t, f, g, h)


def epi_flags(t):
    return _impl.epi_flags(t)


def mono_flags(t):
    return _impl.mono_flags(t)


def factor_counts(t, emask, mmask):
    return _impl.factor_counts(t, emask, mmask)


def closure_violation(t, mask):
    return _impl.closure_violation(t, mask)
