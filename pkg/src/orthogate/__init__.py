"""Symmetry analysis of orthogonal controlled quantum gates.

A controlled gate applies one of ``N`` unitaries ``U_n`` to Bob's system,
selected by Alice's control state. If some reference state is mapped to
``N`` orthogonal states the gate is *orthogonal*; it is *symmetric* when Bob
can also send Alice one of ``N`` messages, which happens exactly when the
pairwise products ``U_n^+ U_m`` commute.
"""

from .capacity import CapacityResult, achievable, max_reverse_messages, shared_eigenstate_bound, shared_eigenstates
from .errors import (
    CommutationError,
    DimensionError,
    GateParseError,
    GateValidationError,
    InconsistencyError,
    NumericalError,
    OrthogateError,
    PreconditionError,
    ProtocolUnavailableError,
)
from .gates import (
    ControlledGate,
    OrthogonalityReport,
    ProductInput,
    apply,
    catalog,
    load_gate,
    save_gate,
    verify_orthogonal,
)
from .linalg import DEFAULT_TOL, EigenSystem, eig_unitary, gram, is_unitary, simultaneous_eigenbasis
from .protocol import (
    ProtocolTranscript,
    attempt_reverse_general,
    check_distinguishability,
    run_forward,
    run_reverse,
)
from .symmetry import (
    ConstructedStates,
    SymmetryReport,
    analyze,
    check_commuting,
    construct_states,
    eigenstates_from_basis,
    random_symmetric_gate,
)

__version__ = "0.1.0"
