"""Command-line front end.

Usage::

    orthogate check --gate cnot
    orthogate simulate --gate cprime --reverse --all
    orthogate capacity --gate controlled-pauli
    orthogate construct --random-symmetric --n 5 --seed 7 --out gate.json
    orthogate catalog

Every command prints one JSON document on stdout. Exit codes: 0 success or
symmetric, 3 asymmetric or protocol unavailable, 1 bad input, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, jsonio
from .capacity import CapacityResult, max_reverse_messages
from .errors import (
    GateParseError,
    InconsistencyError,
    NumericalError,
    OrthogateError,
    PreconditionError,
    ProtocolUnavailableError,
)
from .gates import CATALOG, CATALOG_PARAMS, ControlledGate, catalog, load_gate, save_gate, verify_orthogonal
from .linalg import DEFAULT_TOL, gram, max_norm
from .protocol import ProtocolTranscript, check_distinguishability, run_forward, run_reverse
from .symmetry import (
    SymmetryReport,
    analyze,
    check_commuting,
    construct_states,
    eigenstates_from_basis,
    random_symmetric_gate,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_ASYMMETRIC = 0, 1, 2, 3


class Asymmetric(Exception):
    """Command finished but the gate is asymmetric / the protocol is unavailable."""

    def __init__(self, doc: dict):
        self.doc = doc


# ---------------------------------------------------------------- serialization

def _vecs(vs) -> list:
    return [jsonio.complex_vector(v) for v in vs]


def _columns(M) -> list:
    return [jsonio.complex_vector(M[:, r]) for r in range(M.shape[1])]


def orthogonality_doc(rep) -> dict:
    return {
        "holds": rep.holds,
        "worst_overlap_error": rep.worst_overlap_error,
        "basis": _vecs(rep.basis),
    }


def symmetry_doc(rep: SymmetryReport) -> dict:
    doc = {"symmetric": rep.symmetric}
    if not rep.symmetric:
        doc["witness"] = {"indices": list(rep.witness), "commutator_norm": rep.witness_norm}
        return doc
    doc.update(
        eigenbasis=_columns(rep.eigenbasis),
        phase_table=[jsonio.real_list(row) for row in rep.phase_table],
        gauge=jsonio.real_list(rep.gauge),
        T=jsonio.complex_matrix(rep.T),
        C=[jsonio.complex_matrix(C) for C in rep.C],
        phase_orthogonality_error=rep.phase_orthogonality_error(),
    )
    return doc


def transcript_doc(t: ProtocolTranscript) -> dict:
    doc = {"direction": t.direction, "message": t.message}
    if t.eta is not None:
        doc["eta"] = jsonio.real_list(t.eta)
    doc.update(
        alice_input=jsonio.complex_vector(t.input.alice),
        bob_input=jsonio.complex_vector(t.input.bob),
        joint_output=jsonio.complex_vector(t.joint_output),
        factorized=t.factorized,
        alice_output=None if t.alice_output is None else jsonio.complex_vector(t.alice_output),
        bob_output=None if t.bob_output is None else jsonio.complex_vector(t.bob_output),
        decoded=t.decoded,
        best_overlap=t.best_overlap,
    )
    return doc


def capacity_doc(res: CapacityResult) -> dict:
    return {
        "N_B": res.N_B,
        "symmetric": res.symmetric,
        "subset_R": list(res.subset_R),
        "searched_subset": list(res.searched_subset),
        "weights": jsonio.real_list(res.weights),
        "shared_states": _vecs(res.shared_states),
        "xi_table": [jsonio.real_list(row) for row in res.xi_table],
        "certificate": {
            "messages": [t.message for t in res.certificate],
            "decoded": [t.decoded for t in res.certificate],
            "alice_outputs": _vecs([t.alice_output for t in res.certificate]),
            "gram_identity_error": max_norm(res.gram - np.eye(res.N_B)),
        },
        "scope": res.scope,
    }


# ---------------------------------------------------------------- helpers

def _floats(text: str | None, name: str):
    if text is None:
        return None
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"--{name} expects comma-separated reals, got {text!r}") from None


def resolve_tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("ORTHOGATE_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise PreconditionError(f"ORTHOGATE_TOL must be a real number, got {env!r}") from None
    return DEFAULT_TOL


def load_source(args, tol: float) -> ControlledGate:
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise PreconditionError(f"cannot read {args.file}: {exc.strerror}") from None
        return load_gate(text, tol)
    if not args.gate:
        raise PreconditionError("give a gate source: --gate NAME or --file PATH")
    params: dict = {}
    if args.gate == "controlled-u":
        params = {"alpha": args.alpha, "b": complex(args.b.replace(" ", ""))}
    elif args.gate in ("shift", "shifted-u"):
        params = {"n": args.n if args.n is not None else 3}
        if args.gate == "shifted-u":
            params["seed"] = args.seed
    elif args.gate == "cprime" and args.seed_given:
        from .linalg import random_unitary

        params = {"basis": random_unitary(4, np.random.default_rng(args.seed))}
    return catalog(args.gate, tol, **params)


def _header(args, gate: ControlledGate | None, tol: float) -> dict:
    return {
        "command": args.command,
        "tool_version": __version__,
        "gate_label": None if gate is None else gate.label,
        "N": None if gate is None else gate.N,
        "tol": tol,
    }


def _say(args, *lines: str) -> None:
    if args.verbose:
        for line in lines:
            print(line, file=sys.stderr)


# ---------------------------------------------------------------- commands

def cmd_check(args) -> dict:
    tol = resolve_tol(args)
    gate = load_source(args, tol)
    doc = _header(args, gate, tol)
    if gate.reference is not None:
        doc["orthogonality"] = orthogonality_doc(verify_orthogonal(gate.unitaries, gate.reference, tol))
    chk = check_commuting(gate, tol)
    doc["commuting"] = {
        "holds": chk.commuting,
        "witness": None if chk.witness is None else list(chk.witness),
        "commutator_norm": chk.norm if not chk.commuting else None,
    }
    rep = analyze(gate, tol)
    doc["symmetry"] = symmetry_doc(rep)
    _say(args, f"{gate.label}: {'symmetric' if rep.symmetric else 'asymmetric'}"
         + ("" if rep.symmetric else f" (witness n,m,p,q = {rep.witness})"))
    if not rep.symmetric:
        raise Asymmetric(doc)
    return doc


def cmd_simulate(args) -> dict:
    tol = resolve_tol(args)
    gate = load_source(args, tol)
    doc = _header(args, gate, tol)
    N = gate.N
    messages = list(range(1, N + 1)) if args.all else [args.m]
    if args.reverse:
        rep = analyze(gate, tol)
        doc["direction"] = "reverse"
        if not rep.symmetric:
            doc["error"] = {
                "kind": "protocol-unavailable",
                "message": f"gate is asymmetric; witness n,m,p,q = {list(rep.witness)}",
            }
            _say(args, doc["error"]["message"])
            raise Asymmetric(doc)
        eta = _floats(args.eta, "eta") or [0.0] * N
        transcripts = [run_reverse(gate, rep, r, eta, tol) for r in messages]
    else:
        doc["direction"] = "forward"
        transcripts = [run_forward(gate, n, tol) for n in messages]
    doc["transcripts"] = [transcript_doc(t) for t in transcripts]
    for t in transcripts:
        _say(args, f"message {t.message} -> decoded {t.decoded}")
    if args.all:
        if args.reverse:
            G, ok = check_distinguishability(transcripts, tol)
        else:
            G = gram([t.bob_output for t in transcripts])
            ok = max_norm(G - np.eye(len(transcripts))) <= tol
        doc["gram"] = {"matrix": jsonio.complex_matrix(G), "identity": ok}
        _say(args, f"outputs pairwise orthogonal: {ok}")
    return doc


def cmd_capacity(args) -> dict:
    tol = resolve_tol(args)
    gate = load_source(args, tol)
    doc = _header(args, gate, tol)
    res = max_reverse_messages(gate, tol)
    doc["capacity"] = capacity_doc(res)
    _say(args, f"{gate.label}: Bob can send {res.N_B} of {gate.N} messages", res.scope)
    return doc


def cmd_construct(args) -> dict:
    tol = resolve_tol(args)
    if args.random_symmetric:
        if args.n is None:
            raise PreconditionError("--random-symmetric needs --n")
        gate = random_symmetric_gate(args.n, args.seed)
    else:
        gate = load_source(args, tol)
    doc = _header(args, gate, tol)
    rep = analyze(gate, tol)
    if not rep.symmetric:
        doc["symmetry"] = symmetry_doc(rep)
        doc["error"] = {"kind": "asymmetric", "message": "construction requires a symmetric gate"}
        _say(args, f"{gate.label} is asymmetric; nothing to construct")
        raise Asymmetric(doc)
    gamma = _floats(args.gamma, "gamma")
    states = construct_states(rep, gamma)
    eig = eigenstates_from_basis(rep, states.basis, states.gamma)
    doc["gamma"] = jsonio.real_list(states.gamma)
    doc["reference"] = jsonio.complex_vector(states.reference)
    doc["basis"] = _vecs(states.basis)
    doc["eigenstates"] = _vecs(eig)
    doc["phase_table"] = [jsonio.real_list(row) for row in rep.phase_table]
    doc["orthogonality"] = orthogonality_doc(states.orthogonality)
    if args.out:
        spec_gate = ControlledGate(gate.unitaries, states.reference, gate.label)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(save_gate(spec_gate))
        doc["written"] = args.out
    _say(args, f"{gate.label}: constructed reference and basis (orthogonal: {states.orthogonality.holds})")
    return doc


def cmd_catalog(args) -> dict:
    return {
        "command": "catalog",
        "tool_version": __version__,
        "gates": [{"name": name, "params": CATALOG_PARAMS[name]} for name in CATALOG],
    }


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("gate source")
    src.add_argument("--gate", metavar="NAME", help=f"catalog gate: {', '.join(CATALOG)}")
    src.add_argument("--file", metavar="PATH", help="gate-spec JSON file")
    src.add_argument("--n", type=int, help="cardinality for shift / shifted-u / --random-symmetric")
    src.add_argument("--seed", type=int, default=None, help="seed for random T, bases and generators")
    src.add_argument("--alpha", type=float, default=0.0, help="controlled-u phase")
    src.add_argument("--b", default="1", help="controlled-u off-diagonal entry (Python complex literal)")
    common.add_argument("--tol", type=float, default=None, help="tolerance (default $ORTHOGATE_TOL or 1e-9)")
    common.add_argument("--verbose", action="store_true", help="human-readable summary on stderr")

    p = argparse.ArgumentParser(prog="orthogate", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"orthogate {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="orthogonality and symmetry verdict")

    sim = sub.add_parser("simulate", parents=[common], help="run the forward or reverse protocol")
    d = sim.add_mutually_exclusive_group()
    d.add_argument("--forward", dest="reverse", action="store_false", help="Alice -> Bob (default)")
    d.add_argument("--reverse", dest="reverse", action="store_true", help="Bob -> Alice")
    sim.add_argument("-m", type=int, default=1, help="message index (1-based)")
    sim.add_argument("--all", action="store_true", help="every message plus the Gram check")
    sim.add_argument("--eta", metavar="FLOAT,...", help="Alice's phases for the reverse protocol")

    sub.add_parser("capacity", parents=[common], help="maximum zero-error reverse messages")

    con = sub.add_parser("construct", parents=[common], help="reference state, basis and eigenstates")
    con.add_argument("--random-symmetric", action="store_true", help="generate a random symmetric gate")
    con.add_argument("--gamma", metavar="FLOAT,...", help="phases gamma_r (default 0)")
    con.add_argument("--out", metavar="PATH", help="write the gate-spec file here")

    sub.add_parser("catalog", help="list built-in gates")
    return p


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "capacity": cmd_capacity,
    "construct": cmd_construct,
    "catalog": cmd_catalog,
}


def _emit(doc: dict) -> None:
    sys.stdout.write(jsonio.dumps(doc) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "seed"):
        args.seed_given = args.seed is not None
        if args.seed is None:
            args.seed = 0
    try:
        _emit(COMMANDS[args.command](args))
        return EXIT_OK
    except Asymmetric as exc:
        _emit(exc.doc)
        return EXIT_ASYMMETRIC
    except ProtocolUnavailableError as exc:
        return _fail(args, "protocol-unavailable", exc, EXIT_ASYMMETRIC)
    except (NumericalError, InconsistencyError) as exc:
        return _fail(args, "numerical-failure", exc, EXIT_NUMERIC)
    except (OrthogateError, ValueError) as exc:
        return _fail(args, "input-error", exc, EXIT_INPUT)


def _fail(args, kind: str, exc: Exception, code: int) -> int:
    where = f"{args.file}: " if getattr(args, "file", None) else ""
    print(f"orthogate {args.command}: {where}{exc}", file=sys.stderr)
    doc = {"command": args.command, "tool_version": __version__, "error": {"kind": kind, "message": str(exc)}}
    if where:
        doc["error"]["file"] = args.file
    if isinstance(exc, GateParseError) and exc.line is not None:
        doc["error"]["line"] = exc.line
        doc["error"]["column"] = exc.column
    _emit(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
