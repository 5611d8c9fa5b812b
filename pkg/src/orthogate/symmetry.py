"""Symmetry verdicts, factorization ``U_n = T C_n`` and reference-state construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import CommutationError, GateValidationError, NumericalError, PreconditionError
from .gates import ControlledGate, OrthogonalityReport, verify_orthogonal
from .linalg import (
    DEFAULT_TOL,
    as_state,
    equal_up_to_phase,
    frozen,
    max_norm,
    random_unitary,
    simultaneous_eigenbasis,
    wrap_phase,
)


@dataclass(frozen=True)
class CommutationCheck:
    commuting: bool
    witness: Optional[tuple]  # (n, m, p, q), 1-based
    norm: float  # witness commutator norm, or the worst norm seen when commuting


def pairwise_products(gate: ControlledGate) -> np.ndarray:
    """Stack of ``U_n^dagger U_m`` indexed by ``n * N + m``."""
    U = np.stack(gate.unitaries)
    return np.ascontiguousarray(np.einsum("aji,bjk->abik", U.conj(), U).reshape(-1, gate.N, gate.N))


def check_commuting(gate: ControlledGate, tol: float = DEFAULT_TOL) -> CommutationCheck:
    """Full scan over index quadruples for ``[U_n^+ U_m, U_p^+ U_q] = 0``.

    The reported witness is the first violation in lexicographic order of
    ``(n, m, p, q)``.
    """
    N = gate.N
    a, b, norm = kernels.first_noncommuting(pairwise_products(gate), tol)
    if a < 0:
        return CommutationCheck(True, None, float(norm))
    n, m = divmod(a, N)
    p, q = divmod(b, N)
    return CommutationCheck(False, (n + 1, m + 1, p + 1, q + 1), float(norm))


def trace_matrix(unitaries: Sequence) -> np.ndarray:
    """``tr(U_n^dagger U_m)`` for all ``n, m``."""
    U = np.stack([np.asarray(u, dtype=np.complex128) for u in unitaries])
    return np.einsum("aij,bij->ab", U.conj(), U)


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    """Verdict plus, for symmetric gates, the eigenstructure behind it.

    ``phase_table[n, r]`` is the eigenphase of ``U_1^dagger U_n`` on
    ``eigenbasis[:, r]``; row 0 is identically zero.
    """

    gate: ControlledGate
    symmetric: bool
    witness: Optional[tuple] = None
    witness_norm: float = 0.0
    eigenbasis: Optional[np.ndarray] = None
    phase_table: Optional[np.ndarray] = None
    T: Optional[np.ndarray] = None
    C: Optional[tuple] = None
    gauge: Optional[np.ndarray] = None
    tol: float = DEFAULT_TOL

    @property
    def phase_matrix(self) -> np.ndarray:
        """Columns ``v(n)`` with ``v_r(n) = exp(i phi_n(r)) / sqrt(N)``."""
        N = self.gate.N
        return np.exp(1j * self.phase_table.T) / np.sqrt(N)

    def phase_orthogonality_error(self) -> float:
        """``max |(1/N) sum_r exp(i[phi_m(r) - phi_n(r)]) - delta_nm|``."""
        M = self.phase_matrix
        return max_norm(M.conj().T @ M - np.eye(self.gate.N))


def _real(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def analyze(gate: ControlledGate, tol: float = DEFAULT_TOL, gauge=None) -> SymmetryReport:
    """Decide symmetry and, if symmetric, factor every ``U_n`` as ``T C_n``.

    ``gauge`` holds the free phases ``w_r`` (default zero, making
    ``T = U_1`` and ``C_1 = I``).
    """
    chk = check_commuting(gate, tol)
    if not chk.commuting:
        return SymmetryReport(gate, False, chk.witness, chk.norm, tol=tol)

    N = gate.N
    U1 = gate.unitaries[0]
    products = [U1.conj().T @ U for U in gate.unitaries]
    try:
        shared = simultaneous_eigenbasis(products, tol)
    except CommutationError as exc:
        i, j = exc.pair
        return SymmetryReport(gate, False, (1, i + 1, 1, j + 1), exc.norm, tol=tol)

    L = np.array(shared.vectors)
    phi = np.array(shared.phases)
    phi[0] = 0.0
    w = np.zeros(N) if gauge is None else np.asarray(gauge, dtype=float)
    if w.shape != (N,):
        raise PreconditionError(f"gauge must have length {N}")

    T = U1 @ (L * np.exp(-1j * w)) @ L.conj().T
    C = tuple(frozen((L * np.exp(1j * (phi[n] + w))) @ L.conj().T) for n in range(N))
    resid = max(max_norm(U - T @ Cn) for U, Cn in zip(gate.unitaries, C))
    if resid > tol:
        raise NumericalError(f"factorization residual {resid:.3e} exceeds tol={tol:g}")
    return SymmetryReport(
        gate=gate,
        symmetric=True,
        witness=None,
        witness_norm=chk.norm,
        eigenbasis=frozen(L),
        phase_table=_real(wrap_phase(phi, tol)),
        T=frozen(T),
        C=C,
        gauge=_real(w),
        tol=tol,
    )


@dataclass(frozen=True, eq=False)
class ConstructedStates:
    reference: np.ndarray
    basis: tuple
    gamma: np.ndarray
    orthogonality: OrthogonalityReport


def _gamma(report: SymmetryReport, gamma) -> np.ndarray:
    N = report.gate.N
    g = np.zeros(N) if gamma is None else np.asarray(gamma, dtype=float)
    if g.shape != (N,):
        raise PreconditionError(f"gamma must have length {N}, got shape {g.shape}")
    return g


def _require_symmetric(report: SymmetryReport) -> None:
    if not report.symmetric:
        raise PreconditionError(f"gate {report.gate.label!r} is not symmetric")


def construct_states(report: SymmetryReport, gamma=None) -> ConstructedStates:
    """Reference state and orthogonal basis generated from the eigenbasis.

    ``|R> = N^-1/2 sum_r exp(-i gamma_r) |lambda_r>`` and
    ``|n> = N^-1/2 sum_r exp(i[phi_n(r) - gamma_r]) U_1 |lambda_r>``.
    """
    _require_symmetric(report)
    g = _gamma(report, gamma)
    N = report.gate.N
    L, phi = report.eigenbasis, report.phase_table
    ref = L @ np.exp(-1j * g) / np.sqrt(N)
    U1L = report.gate.unitaries[0] @ L
    basis = tuple(frozen(U1L @ np.exp(1j * (phi[n] - g)) / np.sqrt(N)) for n in range(N))
    orth = verify_orthogonal(report.gate.unitaries, ref, report.tol)
    if not orth.holds:
        raise GateValidationError(
            "gate commutes but is not orthogonal: no reference state maps to an orthogonal set "
            f"(overlap error {orth.worst_overlap_error:.3e})"
        )
    mismatch = max(max_norm(a - b) for a, b in zip(basis, orth.basis))
    if mismatch > 10 * report.tol:
        raise NumericalError(f"constructed basis disagrees with U_n|R> by {mismatch:.3e}")
    return ConstructedStates(frozen(ref), basis, _real(g), orth)


def eigenstates_from_basis(report: SymmetryReport, basis: Sequence, gamma=None) -> list[np.ndarray]:
    """Invert the construction: ``|lambda_r> = U_1^+ N^-1/2 e^{i gamma_r} sum_n e^{-i phi_n(r)} |n>``."""
    _require_symmetric(report)
    g = _gamma(report, gamma)
    N = report.gate.N
    B = np.column_stack([as_state(b, f"basis[{i}]") for i, b in enumerate(basis)])
    if B.shape != (N, N):
        raise PreconditionError(f"need {N} basis states of length {N}")
    U1h = report.gate.unitaries[0].conj().T
    out = []
    for r in range(N):
        coeff = np.exp(-1j * report.phase_table[:, r])
        v = U1h @ (B @ coeff) * np.exp(1j * g[r]) / np.sqrt(N)
        if not equal_up_to_phase(report.eigenbasis[:, r], v, 10 * report.tol):
            raise NumericalError(f"recovered eigenstate {r + 1} does not match (basis/gamma mismatch?)")
        out.append(v)
    return out


def dft_phase_table(N: int) -> np.ndarray:
    """``phi_n(r) = 2 pi n r / N`` (0-based)."""
    n = np.arange(N)
    return 2 * np.pi * np.outer(n, n) / N


def random_symmetric_gate(N: int, seed: int = 0, label: Optional[str] = None) -> ControlledGate:
    """Random symmetric orthogonal gate ``U_n = T L diag(e^{i phi_n}) L^+``.

    ``T`` and the eigenbasis ``L`` are Haar random; the phase table is a
    DFT table with shuffled rows and columns. The reference state follows
    from the eigenbasis with zero ``gamma``.
    """
    rng = np.random.default_rng(seed)
    T = random_unitary(N, rng)
    L = random_unitary(N, rng)
    phi = dft_phase_table(N)[rng.permutation(N)][:, rng.permutation(N)]
    ops = tuple(T @ (L * np.exp(1j * phi[n])) @ L.conj().T for n in range(N))
    ref = L.sum(axis=1) / np.sqrt(N)
    return ControlledGate(ops, ref, label or f"random-symmetric(n={N}, seed={seed})").validate()
