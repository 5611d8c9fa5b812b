"""Single-use classical communication through a controlled gate.

Forward: Alice encodes ``n`` in her control basis, Bob inputs the reference
state and reads the orthogonal basis. Reverse: Bob encodes ``r`` in a shared
eigenstate, Alice inputs a uniform-amplitude superposition and reads her own
output state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import PreconditionError, ProtocolUnavailableError
from .gates import ControlledGate, ProductInput, apply, basis_state, verify_orthogonal
from .linalg import DEFAULT_TOL, as_state, canonical_phase, frozen, gram, max_norm
from .symmetry import SymmetryReport


@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    direction: str  # "forward" | "reverse"
    message: int  # 1-based
    input: ProductInput
    joint_output: np.ndarray
    factorized: bool
    alice_output: Optional[np.ndarray]
    bob_output: Optional[np.ndarray]
    decoded: Optional[int]  # None when the readout is ambiguous
    best_overlap: float
    eta: Optional[np.ndarray] = None
    gate: Optional[ControlledGate] = field(default=None, repr=False)


def factorize(joint: np.ndarray, dims: tuple[int, int], tol: float = DEFAULT_TOL):
    """Split an Alice-major joint state into ``(alice, bob)`` if Schmidt rank is 1.

    Returns ``(factorized, alice, bob, s_max)``. The Bob factor is rotated so
    its largest entry is real positive; the phase is pushed onto Alice.
    """
    M = np.asarray(joint, dtype=np.complex128).reshape(dims)
    u, s, vh = np.linalg.svd(M)
    smax = float(s[0])
    if smax < 1.0 - tol:
        return False, None, None, smax
    bob = vh[0]
    alice = u[:, 0] * s[0]
    rot = canonical_phase(bob)
    k = np.flatnonzero(np.abs(bob) > 0)[0]
    phase = rot[k] / bob[k]
    return True, alice / phase, rot, smax


def decode(state: np.ndarray, candidates: Sequence, tol: float = DEFAULT_TOL) -> tuple[Optional[int], float]:
    """1-based index of the unique candidate with unit overlap, else ``None``.

    Overlaps are squared moduli; the acceptance threshold is ``1 - 10 tol``.
    """
    ov = np.array([abs(np.vdot(c, state)) ** 2 for c in candidates])
    best = float(ov.max()) if ov.size else 0.0
    hits = np.flatnonzero(ov >= 1.0 - 10 * tol)
    if hits.size != 1:
        return None, best
    return int(hits[0]) + 1, best


def run_forward(gate: ControlledGate, n: int, tol: float = DEFAULT_TOL) -> ProtocolTranscript:
    """Alice sends message ``n`` (1-based) with control state ``|n>_A``."""
    if gate.reference is None:
        raise PreconditionError(f"gate {gate.label!r} has no reference state")
    N = gate.N
    if not 1 <= n <= N:
        raise PreconditionError(f"message must be in 1..{N}, got {n}")
    orth = verify_orthogonal(gate.unitaries, gate.reference, tol)
    if not orth.holds:
        raise PreconditionError(f"gate {gate.label!r} is not orthogonal for its reference")
    inp = ProductInput(basis_state(n - 1, N), gate.reference, tol)
    joint = apply(gate, inp)
    ok, alice, bob, smax = factorize(joint, (N, N), tol)
    decoded, best = decode(bob, orth.basis, tol) if ok else (None, 0.0)
    return ProtocolTranscript(
        "forward", n, inp, frozen(joint), ok,
        None if alice is None else frozen(alice),
        None if bob is None else frozen(bob),
        decoded, best, gate=gate,
    )


def reverse_alice_state(report: SymmetryReport, r: int, eta) -> np.ndarray:
    """``N^-1/2 sum_n exp(i[phi_n(r) + eta_n]) |n>`` for 1-based ``r``."""
    N = report.gate.N
    return np.exp(1j * (report.phase_table[:, r - 1] + np.asarray(eta, dtype=float))) / np.sqrt(N)


def run_reverse(
    gate: ControlledGate, report: SymmetryReport, r: int, eta=None, tol: float = DEFAULT_TOL
) -> ProtocolTranscript:
    """Bob sends message ``r`` (1-based) by inputting the ``r``-th shared eigenstate."""
    if not report.symmetric:
        w = report.witness
        raise ProtocolUnavailableError(
            f"gate {gate.label!r} is not symmetric (pairwise products {w} do not commute); "
            "Bob cannot send N messages"
        )
    if report.gate is not gate and not report.gate.same_as(gate):
        raise PreconditionError("symmetry report belongs to a different gate")
    N = gate.N
    if not 1 <= r <= N:
        raise PreconditionError(f"message must be in 1..{N}, got {r}")
    eta = np.zeros(N) if eta is None else np.asarray(eta, dtype=float)
    if eta.shape != (N,):
        raise PreconditionError(f"eta must have length {N}")
    inp = ProductInput(np.exp(1j * eta) / np.sqrt(N), report.eigenbasis[:, r - 1], tol)
    joint = apply(gate, inp)
    ok, alice, bob, smax = factorize(joint, (N, N), tol)
    if ok:
        candidates = [reverse_alice_state(report, s, eta) for s in range(1, N + 1)]
        decoded, best = decode(alice, candidates, tol)
    else:
        decoded, best = None, 0.0
    eta_f = np.array(eta, dtype=float)
    eta_f.flags.writeable = False
    return ProtocolTranscript(
        "reverse", r, inp, frozen(joint), ok,
        None if alice is None else frozen(alice),
        None if bob is None else frozen(bob),
        decoded, best, eta=eta_f, gate=gate,
    )


def check_distinguishability(transcripts: Sequence[ProtocolTranscript], tol: float = DEFAULT_TOL):
    """Gram matrix of Alice's outputs and whether it is the identity within ``tol``.

    A transcript whose output did not factorize makes the check fail.
    """
    if not transcripts:
        return np.zeros((0, 0), dtype=np.complex128), True
    g0 = transcripts[0].gate
    for t in transcripts[1:]:
        if t.gate is not g0 and not (g0 is not None and t.gate is not None and g0.same_as(t.gate)):
            raise PreconditionError("transcripts come from different gates")
        if (t.eta is None) != (transcripts[0].eta is None) or (
            t.eta is not None and max_norm(t.eta - transcripts[0].eta) > 0
        ):
            raise PreconditionError("transcripts use different eta phases")
    if not all(t.factorized for t in transcripts):
        n = len(transcripts)
        return np.full((n, n), np.nan, dtype=np.complex128), False
    G = gram([t.alice_output for t in transcripts])
    return G, max_norm(G - np.eye(len(transcripts))) <= tol


def attempt_reverse_general(
    gate: ControlledGate, a, bob_states: Sequence, tol: float = DEFAULT_TOL
) -> list[ProtocolTranscript]:
    """Run the gate on ``a (x) bob_states[r]`` for each ``r`` and test factorization.

    Decoding compares each factorized Alice output against all the others,
    so identical outputs come back ambiguous (``decoded is None``).
    """
    N = gate.N
    a = as_state(a, "alice amplitudes")
    runs = []
    for r, b in enumerate(bob_states, start=1):
        inp = ProductInput(a, as_state(b, f"bob state {r}"), tol)
        joint = apply(gate, inp)
        ok, alice, bob, _ = factorize(joint, (N, N), tol)
        runs.append((r, inp, joint, ok, alice, bob))
    fact_ids = [r for r, _, _, ok, _, _ in runs if ok]
    outputs = [alice / np.linalg.norm(alice) for *_, ok, alice, _ in runs if ok]
    transcripts = []
    for r, inp, joint, ok, alice, bob in runs:
        decoded, best = None, 0.0
        if ok:
            hit, best = decode(alice, outputs, tol)
            decoded = None if hit is None else fact_ids[hit - 1]
        transcripts.append(ProtocolTranscript(
            "reverse", r, inp, frozen(joint), ok,
            None if alice is None else frozen(alice),
            None if bob is None else frozen(bob),
            decoded, best, gate=gate,
        ))
    return transcripts
