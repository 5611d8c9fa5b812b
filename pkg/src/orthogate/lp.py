"""Phase-1 simplex for small dense feasibility problems ``A x = b, x >= 0``."""

from __future__ import annotations

from typing import Optional

import numpy as np

FEAS_TOL = 1e-8
_PIVOT_EPS = 1e-12


def phase1_feasible(A, b, tol: float = FEAS_TOL, max_iter: int = 10_000) -> Optional[np.ndarray]:
    """Return some ``x >= 0`` with ``|A x - b|_inf <= tol``, or ``None``.

    Artificial variables are added for every row and their sum is minimized
    with Bland's rule, which cannot cycle. The returned point is a vertex of
    the feasible polytope.
    """
    A = np.array(A, dtype=float, ndmin=2)
    b = np.array(b, dtype=float).ravel()
    m, n = A.shape
    if b.size != m:
        raise ValueError(f"A has {m} rows but b has {b.size} entries")
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # tableau: [A | I | b], objective row holds reduced costs of sum(artificials)
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for _ in range(max_iter):
        entering = next((j for j in range(n + m) if T[m, j] < -_PIVOT_EPS), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = np.flatnonzero(col > _PIVOT_EPS)
        if rows.size == 0:  # unbounded direction; cannot happen in phase 1
            break
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + _PIVOT_EPS]
        leave = min(ties, key=lambda i: basis[i])
        T[leave] /= T[leave, entering]
        for i in range(m + 1):
            if i != leave and T[i, entering] != 0.0:
                T[i] -= T[i, entering] * T[leave]
        basis[leave] = entering
    else:
        raise RuntimeError("phase-1 simplex hit the iteration limit")

    if -T[m, -1] > tol:
        return None
    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = max(T[i, -1], 0.0)
    if np.max(np.abs(A @ x - b), initial=0.0) > tol:
        return None
    return x
