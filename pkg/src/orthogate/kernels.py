"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``ORTHOGATE_PURE_PYTHON=1`` to force the fallback.
Above ``COMPILED_MAX_DIM`` the batched BLAS products of the fallback win, so
large matrices go there even when the extension is present.
"""

import os

from . import _kernels_py

COMPILED_MAX_DIM = 11

if os.environ.get("ORTHOGATE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def first_noncommuting(products, tol):
    """First pair ``a < b`` of ``products`` whose commutator exceeds ``tol``.

    Returns ``(a, b, norm)``, or ``(-1, -1, worst)`` when all pairs commute.
    """
    if getattr(products, "ndim", 0) == 3 and products.shape[1] > COMPILED_MAX_DIM:
        return _kernels_py.first_noncommuting(products, tol)
    return _impl.first_noncommuting(products, tol)


__all__ = ["BACKEND", "COMPILED_MAX_DIM", "first_noncommuting"]
