"""Dense complex linear algebra for small unitary families.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Matrices are at most a few dozen rows, so clarity wins over speed; the one
genuinely hot loop (the quadruple commutator scan) lives in
:mod:`orthogate.kernels`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CommutationError, DimensionError, NumericalError, PreconditionError

DEFAULT_TOL = 1e-9

# Phases closer than this are treated as equal when ordering eigenvectors.
PHASE_TIE_TOL = 1e-7
# Split threshold for clusters of the random Hermitian combination.
_CLUSTER_GAP = 1e-6
_MAX_ATTEMPTS = 8
_MAX_DEPTH = 12


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError(f"{name} has non-finite entries")
    return A


def as_state(v, name: str = "state") -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1 or x.size < 1:
        raise DimensionError(f"{name} must be a non-empty vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DimensionError(f"{name} has non-finite entries")
    return x


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only copy of ``a``."""
    a = np.array(a, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


def max_norm(A: np.ndarray) -> float:
    """Largest absolute entry (0 for empty arrays)."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def commutator_norm(A: np.ndarray, B: np.ndarray) -> float:
    return max_norm(A @ B - B @ A)


def is_unitary(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|M^dagger M - I| <= tol``.

    Raises :class:`DimensionError` for non-square input.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"unitarity needs a square matrix, got {A.shape}")
    return max_norm(A.conj().T @ A - np.eye(A.shape[0])) <= tol


def wrap_phase(theta, tol: float = DEFAULT_TOL):
    """Map angles into (-pi, pi]; values within ``tol`` of 0 or -pi snap to 0 or pi."""
    t = np.angle(np.exp(1j * np.asarray(theta, dtype=float)))
    t = np.where(t <= -np.pi + tol, np.pi, t)
    t = np.where(np.abs(t) <= tol, 0.0, t)
    t = np.where(np.abs(t - np.pi) <= tol, np.pi, t)
    return t + 0.0  # no negative zeros in reports


def canonical_phase(v: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Rotate ``v`` so its largest-magnitude entry is real and positive.

    Near-ties in magnitude go to the lowest index.
    """
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - tol)[0])
    return v * (np.conj(v[k]) / mags[k])


def phase_align(reference: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Multiply ``v`` by the global phase that best matches ``reference``."""
    ov = np.vdot(v, reference)
    if abs(ov) == 0.0:
        return v
    return v * (ov / abs(ov))


def equal_up_to_phase(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    return max_norm(x - phase_align(x, y)) <= tol


def _first_nonzero_positive(v: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    k = int(np.flatnonzero(np.abs(v) > tol)[0])
    return v * (np.conj(v[k]) / abs(v[k]))


def _compare_columns(a, b) -> int:
    (pa, va), (pb, vb) = a, b
    for x, y in zip(pa, pb):
        if abs(x - y) > PHASE_TIE_TOL:
            return -1 if x < y else 1
    ka, kb = _first_nonzero_positive(va), _first_nonzero_positive(vb)
    for x, y in zip(ka, kb):
        for s, t in ((x.real, y.real), (x.imag, y.imag)):
            if abs(s - t) > 1e-9:
                return -1 if s > t else 1
    return 0


def canonical_order(phases: np.ndarray, vectors: np.ndarray) -> list[int]:
    """Column order: phase tuples ascending, then eigenvector entries."""
    return sorted(
        range(vectors.shape[1]),
        key=functools.cmp_to_key(
            lambda a, b: _compare_columns((phases[:, a], vectors[:, a]), (phases[:, b], vectors[:, b]))
        ),
    )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary (QR of a complex Ginibre matrix)."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues and orthonormal eigenvectors (as columns) of one unitary."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def phases(self) -> np.ndarray:
        return wrap_phase(np.angle(self.values))


@dataclass(frozen=True)
class SharedEigenSystem:
    """One orthonormal basis diagonalizing a whole commuting family.

    ``phases[i, r]`` is the eigenphase of matrix ``i`` on column ``r`` of
    ``vectors``.
    """

    vectors: np.ndarray
    phases: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    def __len__(self) -> int:
        return self.phases.shape[0]

    def system(self, i: int) -> EigenSystem:
        return EigenSystem(values=frozen(self.values[i]), vectors=self.vectors)


def _check_family(Ms: Sequence, tol: float) -> list[np.ndarray]:
    if len(Ms) == 0:
        raise PreconditionError("need at least one matrix")
    mats = [as_matrix(M, f"matrix {i}") for i, M in enumerate(Ms)]
    n = mats[0].shape[0]
    for i, A in enumerate(mats):
        if A.shape != (n, n):
            raise DimensionError(f"matrix {i} has shape {A.shape}, expected {(n, n)}")
        if not is_unitary(A, tol):
            raise PreconditionError(f"matrix {i} is not unitary within tol={tol:g}")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = commutator_norm(mats[i], mats[j])
            if c > tol:
                raise CommutationError(i, j, c)
    return mats


def _is_scalar(B: np.ndarray, tol: float) -> bool:
    d = B.shape[0]
    return max_norm(B - (np.trace(B) / d) * np.eye(d)) <= tol


def _split(mats, Q, rng, tol, depth=0) -> list[np.ndarray]:
    """Break span(Q) into joint eigenspaces; returns a list of bases."""
    restricted = [Q.conj().T @ M @ Q for M in mats]
    if Q.shape[1] == 1 or all(_is_scalar(B, tol) for B in restricted):
        return [Q]
    if depth >= _MAX_DEPTH:
        raise NumericalError("eigenspace refinement did not converge")
    H = np.zeros_like(restricted[0])
    for B in restricted:
        c, d = rng.standard_normal(2)
        H += c * (B + B.conj().T) / 2 + d * (B - B.conj().T) / 2j
    w, W = np.linalg.eigh((H + H.conj().T) / 2)
    cuts = np.flatnonzero(np.diff(w) > _CLUSTER_GAP) + 1
    blocks = []
    for idx in np.split(np.arange(len(w)), cuts):
        blocks.extend(_split(mats, Q @ W[:, idx], rng, tol, depth + 1))
    return blocks


def canonical_basis(Q: np.ndarray) -> list[np.ndarray]:
    """Deterministic orthonormal basis of span(Q), independent of how Q was found."""
    if Q.shape[1] == 1:
        return [canonical_phase(Q[:, 0] / np.linalg.norm(Q[:, 0]))]
    P = Q @ Q.conj().T
    basis: list[np.ndarray] = []
    for j in range(P.shape[0]):
        v = P[:, j].copy()
        for b in basis:
            v -= np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-3:
            basis.append(v / nv)
        if len(basis) == Q.shape[1]:
            break
    return [canonical_phase(b) for b in basis]


def simultaneous_eigenbasis(Ms: Sequence, tol: float = DEFAULT_TOL, *, seed: int = 0) -> SharedEigenSystem:
    """Shared orthonormal eigenbasis of pairwise-commuting unitaries.

    A random real combination of Hermitian and anti-Hermitian parts is
    diagonalized and any clustered block is refined recursively with fresh
    coefficients. Up to eight attempts are made before giving up.

    Columns are ordered by their phase tuple (ascending, first matrix
    first); ties fall back to the eigenvector entries, larger first, after
    rotating the first nonzero entry to be real positive.

    Raises
    ------
    CommutationError
        If some pair ``(i, j)`` has commutator max-norm above ``tol``.
    NumericalError
        If no attempt reaches residual ``tol``.
    """
    mats = _check_family(Ms, tol)
    n = mats[0].shape[0]
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        try:
            blocks = _split(mats, np.eye(n, dtype=np.complex128), rng, tol)
        except NumericalError:
            continue
        cols = [v for Q in blocks for v in canonical_basis(Q)]
        if len(cols) != n:
            continue
        V = np.column_stack(cols)
        phases = np.array([[np.angle(np.vdot(v, M @ v)) for v in cols] for M in mats])
        phases = wrap_phase(phases, tol)
        resid = max(max_norm(M @ V - V * np.exp(1j * ph)) for M, ph in zip(mats, phases))
        ortho = max_norm(V.conj().T @ V - np.eye(n))
        if resid <= tol and ortho <= tol:
            break
    else:
        raise NumericalError(f"simultaneous diagonalization residual above tol={tol:g} after {_MAX_ATTEMPTS} attempts")

    order = canonical_order(phases, V)
    return SharedEigenSystem(vectors=frozen(V[:, order]), phases=_frozen_real(phases[:, order]))


def _frozen_real(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def eig_unitary(M, tol: float = DEFAULT_TOL) -> EigenSystem:
    """Full orthonormal eigensystem of a unitary matrix.

    >>> es = eig_unitary([[0, 1], [1, 0]])
    >>> es.phases.tolist()
    [0.0, 3.141592653589793]
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    if not is_unitary(A, tol):
        raise PreconditionError("eig_unitary needs a unitary matrix")
    return simultaneous_eigenbasis([A], tol).system(0)


def gram(states: Sequence) -> np.ndarray:
    """Matrix of inner products ``G[r, s] = <states[r]|states[s]>``."""
    vs = [as_state(s, f"state {i}") for i, s in enumerate(states)]
    if not vs:
        return np.zeros((0, 0), dtype=np.complex128)
    dims = {v.size for v in vs}
    if len(dims) != 1:
        raise DimensionError(f"states have mixed dimensions {sorted(dims)}")
    S = np.column_stack(vs)
    return S.conj().T @ S
