"""Independent reference computations used only by the tests.

Nothing here calls into the code paths it checks: factorization goes through
partial traces instead of an SVD, eigenvectors of shifts come from explicit
Fourier modes, and the capacity oracle is a grid search over Bob's inputs
and Alice's weights.
"""

from __future__ import annotations

import itertools

import numpy as np

GRID_PHASES = 12  # angles per phase parameter
WEIGHT_STEPS = 12  # simplex resolution for Alice's weights


def partial_trace_bob(joint: np.ndarray, dA: int, dB: int) -> np.ndarray:
    psi = joint.reshape(dA, dB)
    return psi @ psi.conj().T


def is_product_state(joint: np.ndarray, dA: int, dB: int, tol: float = 1e-9) -> bool:
    rho = partial_trace_bob(joint, dA, dB)
    return np.trace(rho @ rho).real >= 1 - tol


def alice_factor(joint: np.ndarray, dA: int, dB: int) -> np.ndarray:
    w, V = np.linalg.eigh(partial_trace_bob(joint, dA, dB))
    return V[:, -1]


def fourier_modes(N: int) -> list[np.ndarray]:
    """Eigenvectors of every cyclic shift ``|m> -> |m + s>``."""
    m = np.arange(N)
    return [np.exp(-2j * np.pi * k * m / N) / np.sqrt(N) for k in range(N)]


def shift_phase_table(N: int) -> np.ndarray:
    """``table[n, k]``: phase of shift-by-``n`` on Fourier mode ``k``, by direct evaluation."""
    table = np.zeros((N, N))
    for k, f in enumerate(fourier_modes(N)):
        for n in range(N):
            shifted = np.roll(f, n)  # |m> -> |m + n>
            table[n, k] = np.angle(np.vdot(f, shifted))
    return table


def grid_states(dim: int) -> list[np.ndarray]:
    """Unit vectors whose nonzero entries share one magnitude and have phases on a 12-point grid.

    The first nonzero entry is fixed to be real positive.
    """
    out = []
    angles = np.exp(2j * np.pi * np.arange(GRID_PHASES) / GRID_PHASES)
    for k in range(1, dim + 1):
        for support in itertools.combinations(range(dim), k):
            for phases in itertools.product(range(GRID_PHASES), repeat=k - 1):
                v = np.zeros(dim, dtype=complex)
                v[support[0]] = 1
                for idx, ph in zip(support[1:], phases):
                    v[idx] = angles[ph]
                out.append(v / np.sqrt(k))
    return out


def simplex_grid(support: tuple, N: int) -> list[np.ndarray]:
    """Weight vectors with entries in multiples of 1/12, strictly positive on ``support``."""
    out = []
    k = len(support)
    for counts in itertools.product(range(1, WEIGHT_STEPS + 1), repeat=k):
        if sum(counts) != WEIGHT_STEPS:
            continue
        p = np.zeros(N)
        p[list(support)] = np.array(counts) / WEIGHT_STEPS
        out.append(p)
    return out


def _max_orthogonal_family(states: list[np.ndarray], cap: int, tol: float = 1e-8) -> int:
    distinct: list[np.ndarray] = []
    for s in states:
        if all(abs(abs(np.vdot(d, s)) - 1) > tol for d in distinct):
            distinct.append(s)
    for size in range(min(cap, len(distinct)), 1, -1):
        for combo in itertools.combinations(distinct, size):
            if all(abs(np.vdot(a, b)) <= tol for a, b in itertools.combinations(combo, 2)):
                return size
    return 1


def grid_capacity(unitaries) -> int:
    """Most zero-error reverse messages found on the grid (a lower bound)."""
    U = [np.asarray(u) for u in unitaries]
    N = len(U)
    bob = grid_states(N)
    best = 1
    for size in range(N, 1, -1):
        if size <= best:
            break
        for support in itertools.combinations(range(N), size):
            uniform = np.zeros(N)
            uniform[list(support)] = 1 / size
            factorizing = []
            for phi in bob:
                joint = np.concatenate([np.sqrt(uniform[n]) * (U[n] @ phi) for n in range(N)])
                if is_product_state(joint, N, N):
                    factorizing.append(phi)
            if len(factorizing) < 2:
                continue
            for p in simplex_grid(support, N):
                outs = []
                for phi in factorizing:
                    joint = np.concatenate([np.sqrt(p[n]) * (U[n] @ phi) for n in range(N)])
                    outs.append(alice_factor(joint, N, N))
                best = max(best, _max_orthogonal_family(outs, size))
    return best


def grid_friendly_gate(N: int, rng: np.random.Generator):
    """Random orthogonal gate of signed permutations times grid phases.

    ``U_n`` sends ``|0>`` to ``+-e^{i theta}|n>``, so ``|0>`` is a valid
    reference. Every pairwise product is a signed permutation, whose
    eigenvectors sit on :func:`grid_states`.
    """
    ops = []
    for n in range(N):
        rest = [i for i in range(N) if i != n]
        rng.shuffle(rest)
        perm = [n] + rest  # column j -> row perm[j]
        P = np.zeros((N, N), dtype=complex)
        for j, i in enumerate(perm):
            P[i, j] = 1
        signs = rng.choice([-1.0, 1.0], size=N)
        theta = 2 * np.pi * rng.integers(GRID_PHASES) / GRID_PHASES
        ops.append(np.exp(1j * theta) * (signs[:, None] * P))
    ref = np.zeros(N, dtype=complex)
    ref[0] = 1
    return ops, ref
