"""Pure-numpy twin of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def first_noncommuting(products, tol):
    """Scan pairs ``a < b`` in lexicographic order.

    Returns ``(a, b, norm)`` for the first pair whose commutator max-norm
    exceeds ``tol``, or ``(-1, -1, worst)`` when every pair commutes.
    """
    P = np.ascontiguousarray(products, dtype=np.complex128)
    worst = 0.0
    for a in range(P.shape[0] - 1):
        rest = P[a + 1:]
        comm = P[a] @ rest - rest @ P[a]
        norms = np.abs(comm).reshape(len(rest), -1).max(axis=1)
        bad = np.flatnonzero(norms > tol)
        if bad.size:
            b = int(bad[0])
            return a, a + 1 + b, float(norms[b])
        worst = max(worst, float(norms.max()))
    return -1, -1, worst
