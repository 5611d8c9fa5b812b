"""Controlled gates, their orthogonality property, and the built-in catalog.

A controlled gate applies ``U_n`` to Bob's ``N``-dimensional system when
Alice's control is in basis state ``|n>``. Joint states are stored
Alice-major: amplitude of ``|n>_A |m>_B`` sits at index ``n * N + m``.
Message indices exposed to users are 1-based; array indices are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import jsonio
from .errors import DimensionError, GateParseError, GateValidationError
from .linalg import DEFAULT_TOL, as_matrix, as_state, frozen, is_unitary, max_norm, random_unitary

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class ControlledGate:
    unitaries: tuple
    reference: Optional[np.ndarray] = None
    label: str = "gate"

    def __post_init__(self):
        mats = tuple(frozen(as_matrix(U, f"U_{i + 1}")) for i, U in enumerate(self.unitaries))
        if not mats:
            raise DimensionError("a controlled gate needs at least one controlled operation")
        n = len(mats)
        for i, U in enumerate(mats):
            if U.shape != (n, n):
                raise DimensionError(
                    f"U_{i + 1} has shape {U.shape}; Bob's dimension must equal N={n}"
                )
        object.__setattr__(self, "unitaries", mats)
        if self.reference is not None:
            ref = as_state(self.reference, "reference")
            if ref.size != n:
                raise DimensionError(f"reference has length {ref.size}, expected {n}")
            object.__setattr__(self, "reference", frozen(ref))

    @property
    def N(self) -> int:
        return len(self.unitaries)

    @property
    def alice_dim(self) -> int:
        return self.N

    @property
    def bob_dim(self) -> int:
        return self.N

    def validate(self, tol: float = DEFAULT_TOL) -> "ControlledGate":
        """Raise :class:`GateValidationError` unless unitary (and orthogonal, if referenced)."""
        for i, U in enumerate(self.unitaries):
            if not is_unitary(U, tol):
                raise GateValidationError(f"non-unitary: U_{i + 1} fails unitarity at tol={tol:g}")
        if self.reference is not None:
            rep = verify_orthogonal(self.unitaries, self.reference, tol)
            if not rep.holds:
                raise GateValidationError(
                    f"orthogonality failed: worst overlap error {rep.worst_overlap_error:.3e} > tol={tol:g}"
                )
        return self

    def same_as(self, other: "ControlledGate", tol: float = 0.0) -> bool:
        if self.N != other.N or (self.reference is None) != (other.reference is None):
            return False
        diffs = [max_norm(a - b) for a, b in zip(self.unitaries, other.unitaries)]
        if self.reference is not None:
            diffs.append(max_norm(self.reference - other.reference))
        return max(diffs) <= tol


@dataclass(frozen=True, eq=False)
class ProductInput:
    """Product input ``sum_n a_n |n>_A (x) sum_m b_m |m>_B``."""

    alice: np.ndarray
    bob: np.ndarray
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        a, b = as_state(self.alice, "alice amplitudes"), as_state(self.bob, "bob amplitudes")
        for name, v in (("alice", a), ("bob", b)):
            if abs(np.vdot(v, v).real - 1.0) > self.tol:
                raise GateValidationError(f"{name} amplitudes are not normalized")
        object.__setattr__(self, "alice", frozen(a))
        object.__setattr__(self, "bob", frozen(b))


@dataclass(frozen=True)
class OrthogonalityReport:
    holds: bool
    basis: tuple
    worst_overlap_error: float


def verify_orthogonal(unitaries: Sequence, reference, tol: float = DEFAULT_TOL) -> OrthogonalityReport:
    """Check that ``U_n |R>`` form an orthonormal set."""
    ref = as_state(reference, "reference")
    mats = [as_matrix(U, f"U_{i + 1}") for i, U in enumerate(unitaries)]
    for i, U in enumerate(mats):
        if U.shape != (ref.size, ref.size):
            raise DimensionError(f"U_{i + 1} has shape {U.shape}, reference length {ref.size}")
        if not is_unitary(U, tol):
            raise GateValidationError(f"non-unitary: U_{i + 1} fails unitarity at tol={tol:g}")
    basis = np.column_stack([U @ ref for U in mats])
    err = max_norm(basis.conj().T @ basis - np.eye(len(mats)))
    return OrthogonalityReport(
        holds=err <= tol,
        basis=tuple(frozen(basis[:, n]) for n in range(len(mats))),
        worst_overlap_error=err,
    )


def apply(gate: ControlledGate, inp: ProductInput) -> np.ndarray:
    """Joint output ``sum_n a_n |n>_A U_n |b>_B`` (Alice-major)."""
    N = gate.N
    if inp.alice.size != gate.alice_dim or inp.bob.size != gate.bob_dim:
        raise DimensionError(
            f"input dims ({inp.alice.size}, {inp.bob.size}) do not match gate ({gate.alice_dim}, {N})"
        )
    out = np.empty(N * N, dtype=np.complex128)
    for n, U in enumerate(gate.unitaries):
        out[n * N:(n + 1) * N] = inp.alice[n] * (U @ inp.bob)
    return out


def basis_state(n: int, dim: int) -> np.ndarray:
    e = np.zeros(dim, dtype=np.complex128)
    e[n] = 1.0
    return e


# ---------------------------------------------------------------- catalog

def shift_operators(N: int) -> list[np.ndarray]:
    """``C''_n |m> = |(n + m) mod N>`` in 0-based labels; ``C''_1`` is the identity."""
    ops = []
    for n in range(N):
        S = np.zeros((N, N), dtype=np.complex128)
        for m in range(N):
            S[(n + m) % N, m] = 1.0
        ops.append(S)
    return ops


CPRIME_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


def _cnot() -> ControlledGate:
    return ControlledGate((I2, SIGMA_X), basis_state(0, 2), "cnot")


def _controlled_u(alpha: float = 0.0, b: complex = 1.0) -> ControlledGate:
    b = complex(b)
    if abs(abs(b) ** 2 - 1.0) > 1e-12:
        raise GateValidationError(f"controlled-u needs |b|^2 = 1, got {abs(b) ** 2:.17g}")
    U2 = np.exp(1j * alpha) * np.array([[0, b], [-np.conj(b), 0]], dtype=np.complex128)
    return ControlledGate((I2, U2), basis_state(0, 2), f"controlled-u(alpha={alpha:.17g}, b={b})")


def _controlled_pauli() -> ControlledGate:
    ops = tuple(np.kron(P, I2) for P in (I2, SIGMA_X, SIGMA_Y, SIGMA_Z))
    phi_plus = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    return ControlledGate(ops, phi_plus, "controlled-pauli")


def _cprime(basis=None) -> ControlledGate:
    L = np.eye(4, dtype=np.complex128) if basis is None else as_matrix(basis, "cprime basis")
    if L.shape != (4, 4) or not is_unitary(L, 1e-10):
        raise GateValidationError("cprime basis must be a 4x4 unitary (columns |lambda_r>)")
    ops = tuple(L @ np.diag(s) @ L.conj().T for s in CPRIME_SIGNS)
    ref = L.sum(axis=1) / 2
    return ControlledGate(ops, ref, "cprime")


def _shift(n: int = 3) -> ControlledGate:
    if n < 1:
        raise GateValidationError("shift needs N >= 1")
    return ControlledGate(tuple(shift_operators(n)), basis_state(0, n), f"shift({n})")


def _shifted_u(n: int = 3, T=None, seed: int = 0) -> ControlledGate:
    T = random_unitary(n, np.random.default_rng(seed)) if T is None else as_matrix(T, "T")
    if T.shape != (n, n) or not is_unitary(T, 1e-10):
        raise GateValidationError(f"T must be an {n}x{n} unitary")
    ops = tuple(T @ C for C in shift_operators(n))
    return ControlledGate(ops, basis_state(0, n), f"shifted-u({n})")


CATALOG = {
    "cnot": _cnot,
    "controlled-u": _controlled_u,
    "controlled-pauli": _controlled_pauli,
    "cprime": _cprime,
    "shift": _shift,
    "shifted-u": _shifted_u,
}

CATALOG_PARAMS = {
    "cnot": "",
    "controlled-u": "alpha (real), b (complex, |b|=1)",
    "controlled-pauli": "",
    "cprime": "basis (4x4 unitary, columns |lambda_r>; default computational)",
    "shift": "n (cardinality)",
    "shifted-u": "n (cardinality), T (n x n unitary) or seed for a random T",
}


def catalog(name: str, tol: float = DEFAULT_TOL, **params) -> ControlledGate:
    """Build a catalog gate together with its reference state.

    >>> catalog("shift", n=3).N
    3
    """
    try:
        factory = CATALOG[name]
    except KeyError:
        raise GateValidationError(f"unknown gate {name!r}; known: {', '.join(CATALOG)}") from None
    return factory(**params).validate(tol)


# ---------------------------------------------------------------- gate-spec files

def gate_to_dict(gate: ControlledGate) -> dict:
    doc = {
        "label": gate.label,
        "N": gate.N,
        "unitaries": [jsonio.complex_matrix(U) for U in gate.unitaries],
    }
    if gate.reference is not None:
        doc["reference"] = jsonio.complex_vector(gate.reference)
    return doc


def save_gate(gate: ControlledGate) -> str:
    return jsonio.dumps(gate_to_dict(gate)) + "\n"


def _complex(x, where: str) -> complex:
    if (
        not isinstance(x, list)
        or len(x) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)
    ):
        raise GateValidationError(f"{where}: expected [re, im] pair, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def _complex_vector(x, where: str) -> np.ndarray:
    if not isinstance(x, list):
        raise GateValidationError(f"{where}: expected a list of [re, im] pairs")
    return np.array([_complex(z, f"{where}[{i}]") for i, z in enumerate(x)], dtype=np.complex128)


def gate_from_dict(doc, tol: float = DEFAULT_TOL) -> ControlledGate:
    if not isinstance(doc, dict):
        raise GateValidationError("gate spec must be a JSON object")
    unknown = set(doc) - {"label", "N", "unitaries", "reference"}
    if unknown:
        raise GateValidationError(f"unknown gate-spec keys: {sorted(unknown)}")
    for key in ("N", "unitaries"):
        if key not in doc:
            raise GateValidationError(f"missing required key {key!r}")
    N = doc["N"]
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise GateValidationError(f"N must be a positive integer, got {N!r}")
    label = doc.get("label", "gate")
    if not isinstance(label, str):
        raise GateValidationError("label must be a string")
    raw = doc["unitaries"]
    if not isinstance(raw, list) or len(raw) != N:
        raise GateValidationError(f"unitaries must be a list of N={N} matrices")
    mats = []
    for i, M in enumerate(raw):
        where = f"unitaries[{i}]"
        if not isinstance(M, list) or len(M) != N:
            raise GateValidationError(f"{where}: expected {N} rows (Bob's dimension must equal N)")
        rows = [_complex_vector(row, f"{where}[{j}]") for j, row in enumerate(M)]
        if any(r.size != N for r in rows):
            raise GateValidationError(f"{where}: every row needs {N} entries (Bob's dimension must equal N)")
        mats.append(np.array(rows))
    ref = None
    if doc.get("reference") is not None:
        ref = _complex_vector(doc["reference"], "reference")
        if ref.size != N:
            raise GateValidationError(f"reference must have N={N} entries, got {ref.size}")
    return ControlledGate(tuple(mats), ref, label).validate(tol)


def load_gate(document: str, tol: float = DEFAULT_TOL) -> ControlledGate:
    """Parse and validate a gate-spec JSON document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise GateParseError(f"invalid gate-spec JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return gate_from_dict(doc, tol)
