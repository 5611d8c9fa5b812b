"""Zero-error reverse messages for asymmetric orthogonal gates.

For Bob to send ``k`` messages, Alice's amplitudes must be supported on a set
``R`` of at least ``k`` controls, and Bob's inputs must be common
eigenvectors of every ``U_m^+ U_n`` with ``m, n`` in ``R``. Given such
eigenvectors with relative phases ``xi_n(r)``, Alice's outputs are
orthogonal iff the weights ``p_n = |a_n|^2`` solve the linear system
``sum_n p_n exp(i[xi_n(r) - xi_n(r')]) = 0`` for ``r != r'``.

The search below is exhaustive over that input structure, so ``N_B`` is
the certified maximum *under product Alice inputs and common-eigenstate Bob
inputs*; whether other strategies could do better is left open.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistencyError, PreconditionError
from .gates import ControlledGate, verify_orthogonal
from .linalg import DEFAULT_TOL, canonical_basis, canonical_order, eig_unitary, frozen, max_norm, wrap_phase
from .lp import FEAS_TOL, phase1_feasible
from .protocol import ProtocolTranscript, attempt_reverse_general, check_distinguishability

SCOPE = (
    "certified achievable maximum under product Alice inputs and common-eigenstate Bob inputs; "
    "optimality over all input strategies is not established"
)

# singular values below this count as null directions in eigenspace intersection
RANK_CUTOFF = 1e-8


@dataclass(frozen=True, eq=False)
class SharedStates:
    """Common eigenvectors of the pairwise products over ``subset`` (0-based).

    ``xi[j, r]`` is the phase of ``U_{subset[0]}^+ U_{subset[j]}`` on
    ``states[r]``, so row 0 is zero.
    """

    subset: tuple
    states: tuple
    xi: np.ndarray

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class CapacityResult:
    N_B: int
    subset_R: tuple  # 1-based support of Alice's weights
    searched_subset: tuple  # 1-based subset whose shared states were used
    shared_states: tuple
    weights: np.ndarray
    xi_table: np.ndarray  # rows: searched_subset, columns: shared_states
    certificate: tuple
    gram: np.ndarray
    symmetric: bool
    scope: str = SCOPE


def _eigenspaces(P: np.ndarray, tol: float) -> list[complex]:
    """Distinct eigenvalues of a unitary (clustered within 1e-7 in phase)."""
    es = eig_unitary(P, tol)
    lams: list[complex] = []
    for lam in es.values:
        if all(abs(lam - mu) > 1e-7 for mu in lams):
            lams.append(complex(lam))
    return lams


def shared_eigenstates(gate: ControlledGate, subset: Sequence[int], tol: float = DEFAULT_TOL) -> SharedStates:
    """Maximal orthonormal set of common eigenvectors of ``{U_m^+ U_n : m, n in subset}``.

    ``subset`` holds 0-based control indices. Eigenspaces are intersected one
    product at a time: the part of a subspace ``span(Q)`` with eigenvalue
    ``lam`` is the null space of ``(P - lam) Q``.
    """
    sub = tuple(sorted(set(int(i) for i in subset)))
    if not sub:
        raise PreconditionError("subset must be nonempty")
    if sub[0] < 0 or sub[-1] >= gate.N:
        raise PreconditionError(f"subset indices must lie in 0..{gate.N - 1}")
    U = gate.unitaries
    N = gate.N
    spaces = [np.eye(N, dtype=np.complex128)]
    for m, n in itertools.combinations(sub, 2):
        P = U[m].conj().T @ U[n]
        refined = []
        for lam in _eigenspaces(P, tol):
            D = P - lam * np.eye(N)
            for Q in spaces:
                _, s, vh = np.linalg.svd(D @ Q)
                s_full = np.zeros(Q.shape[1])
                s_full[: s.size] = s
                null = vh.conj().T[:, s_full <= RANK_CUTOFF]
                if null.shape[1]:
                    Z, _ = np.linalg.qr(Q @ null)
                    refined.append(Z)
        spaces = refined
        if not spaces:
            break

    states = [v for Q in spaces for v in canonical_basis(Q)]
    pivot = U[sub[0]].conj().T
    check = 10 * max(tol, RANK_CUTOFF)
    keep, rows = [], []
    for v in states:
        ph = [np.angle(np.vdot(v, pivot @ U[n] @ v)) for n in sub]
        if all(max_norm(pivot @ U[n] @ v - np.exp(1j * p) * v) <= check for n, p in zip(sub, ph)):
            keep.append(v)
            rows.append(ph)
    if not keep:
        return SharedStates(sub, (), np.zeros((len(sub), 0)))
    xi = wrap_phase(np.array(rows).T, tol)
    xi[0] = 0.0
    V = np.column_stack(keep)
    order = canonical_order(xi, V)
    xi = np.array(xi[:, order], dtype=float)
    xi.flags.writeable = False
    return SharedStates(sub, tuple(frozen(V[:, i]) for i in order), xi)


def _same_phases(x: np.ndarray, y: np.ndarray) -> bool:
    return max_norm(np.exp(1j * x) - np.exp(1j * y)) <= 1e-8


def gram_constraints(xi: np.ndarray, chosen: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Real linear system for normalized weights making the outputs orthogonal."""
    rows = [np.ones(xi.shape[0])]
    for r, s in itertools.combinations(chosen, 2):
        d = xi[:, r] - xi[:, s]
        rows.append(np.cos(d))
        rows.append(np.sin(d))
    A = np.array(rows)
    b = np.zeros(len(rows))
    b[0] = 1.0
    return A, b


def achievable(
    gate: ControlledGate, shared: SharedStates, k: int, tol: float = DEFAULT_TOL
) -> Optional[tuple[np.ndarray, tuple]]:
    """First ``k``-subset of ``shared.states`` admitting orthogonalizing weights.

    Returns ``(weights, chosen)`` where ``weights`` has length ``N`` (zero off
    the subset) and ``chosen`` indexes ``shared.states``; ``None`` if no
    ``k``-subset is feasible.
    """
    if k > len(shared):
        raise PreconditionError(f"k={k} exceeds the {len(shared)} shared states")
    xi = shared.xi
    for chosen in itertools.combinations(range(len(shared)), k):
        # equal phase columns give identical Alice outputs; skip outright
        if any(_same_phases(xi[:, r], xi[:, s]) for r, s in itertools.combinations(chosen, 2)):
            continue
        A, b = gram_constraints(xi, chosen)
        p = phase1_feasible(A, b, FEAS_TOL)
        if p is None:
            continue
        p[p < 1e-12] = 0.0
        p /= p.sum()
        weights = np.zeros(gate.N)
        weights[list(shared.subset)] = p
        return weights, chosen
    return None


def _certify(gate, shared, chosen, weights, tol) -> tuple[tuple, np.ndarray]:
    states = [shared.states[i] for i in chosen]
    transcripts = attempt_reverse_general(gate, np.sqrt(weights), states, tol)
    G, ok = check_distinguishability(transcripts, max(tol, FEAS_TOL))
    decoded_ok = all(t.factorized and t.decoded == t.message for t in transcripts)
    if not (ok and decoded_ok):
        raise InconsistencyError(
            f"search found weights {weights.tolist()} but the protocol does not certify them"
        )
    return tuple(transcripts), G


def max_reverse_messages(gate: ControlledGate, tol: float = DEFAULT_TOL) -> CapacityResult:
    """Largest certified number of zero-error messages Bob can send to Alice.

    Message counts ``k`` are tried from ``N`` down; for each, subsets of
    controls are scanned by decreasing size then lexicographically, and the
    first feasible strategy is certified by simulating it.
    """
    if gate.reference is None:
        raise PreconditionError(f"gate {gate.label!r} needs a reference state")
    if not verify_orthogonal(gate.unitaries, gate.reference, tol).holds:
        raise PreconditionError(f"gate {gate.label!r} is not orthogonal for its reference")
    N = gate.N
    cache: dict[tuple, SharedStates] = {}
    for k in range(N, 0, -1):
        for size in range(N, k - 1, -1):
            for subset in itertools.combinations(range(N), size):
                shared = cache.get(subset)
                if shared is None:
                    shared = cache[subset] = shared_eigenstates(gate, subset, tol)
                if len(shared) < k:
                    continue
                found = achievable(gate, shared, k, tol)
                if found is None:
                    continue
                weights, chosen = found
                certificate, G = _certify(gate, shared, chosen, weights, tol)
                w = np.array(weights)
                w.flags.writeable = False
                xi = np.array(shared.xi[:, list(chosen)])
                xi.flags.writeable = False
                return CapacityResult(
                    N_B=k,
                    subset_R=tuple(int(i) + 1 for i in np.flatnonzero(w > 0)),
                    searched_subset=tuple(i + 1 for i in subset),
                    shared_states=tuple(shared.states[i] for i in chosen),
                    weights=w,
                    xi_table=xi,
                    certificate=certificate,
                    gram=frozen(G),
                    symmetric=(k == N),
                )
    raise InconsistencyError("no strategy found even for a single message")


def shared_eigenstate_bound(gate: ControlledGate, tol: float = DEFAULT_TOL) -> int:
    """Necessary-condition bound ``max_R min(|R|, #shared eigenstates of R)``."""
    best = 0
    for size in range(gate.N, 0, -1):
        if size <= best:
            break
        for subset in itertools.combinations(range(gate.N), size):
            best = max(best, min(size, len(shared_eigenstates(gate, subset, tol))))
    return best
