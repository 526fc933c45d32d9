"""Command-line front end: run teleportations, verify, export circuits."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .statevector import (
    CapacityError,
    StateVector,
    random_state,
    state_from_dict,
)
from .teleport import circuit_schedule, render_schedule, teleport, trace_to_json
from .verify import VerificationReport, report_to_json, verify_protocol

EX_OK = 0
EX_FAIL = 1
EX_FILE = 2
EX_STATE = 3
EX_USAGE = 64

FIDELITY_THRESHOLD = 1.0 - 1e-10
LITERAL_NORM_ATOL = 1e-6


class CommandError(Exception):
    """Carries the exit code for a failed command."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qteleport",
        description="Simulate and verify teleportation of n-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("teleport", help="run one teleportation and emit its trace")
    t.add_argument("--n", type=int, required=True, help="number of qubits to teleport")
    t.add_argument("--seed", type=int, required=True, help="seed for state sampling and measurement")
    t.add_argument(
        "--state",
        default="random",
        help='"random", a comma-separated amplitude list (re or re+imi), or a state file path',
    )
    t.add_argument("--out", help="write output here instead of stdout")
    t.add_argument("--format", choices=("json", "text"), default="json")

    v = sub.add_parser("verify", help="cross-check the gate pipeline against the closed forms")
    v.add_argument("--n", type=int, required=True, help="qubits to teleport (1-3 exhaustive, 4-5 sampled)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="write output here instead of stdout")
    v.add_argument("--format", choices=("json", "text"), default="text")

    c = sub.add_parser("circuit", help="export the gate schedule as text")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out", help="write output here instead of stdout")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"teleport": _cmd_teleport, "verify": _cmd_verify, "circuit": _cmd_circuit}
    try:
        return handlers[args.command](args)
    except CommandError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return err.code
    except CapacityError as err:
        print(f"error: {err}", file=sys.stderr)
        return EX_USAGE


def _cmd_teleport(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise CommandError(EX_USAGE, f"--n must be >= 1, got {args.n}")
    psi = _resolve_state(args.state, args.n, args.seed)
    trace = teleport(psi, args.seed)
    if args.format == "json":
        payload = trace_to_json(trace) + "\n"
    else:
        payload = (
            f"n: {trace.n}\n"
            f"outcome: {trace.outcome.bits}\n"
            f"probability: {trace.outcome.probability!r}\n"
            f"fidelity: {trace.fidelity_to_input!r}\n"
        )
    _emit(payload, args.out)
    return EX_OK if trace.fidelity_to_input >= FIDELITY_THRESHOLD else EX_FAIL


def _cmd_verify(args: argparse.Namespace) -> int:
    if not 1 <= args.n <= 5:
        raise CommandError(EX_USAGE, f"--n must be between 1 and 5, got {args.n}")
    trials = 20 if args.n <= 3 else 5
    report = verify_protocol(args.n, trials=trials, seed=args.seed)
    if args.format == "json":
        payload = report_to_json(report) + "\n"
    else:
        payload = _render_report(report)
    _emit(payload, args.out)
    return EX_OK if report.passed else EX_FAIL


def _cmd_circuit(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise CommandError(EX_USAGE, f"--n must be >= 1, got {args.n}")
    _emit(render_schedule(circuit_schedule(args.n)), args.out)
    return EX_OK


def _resolve_state(source: str, n: int, seed: int) -> StateVector:
    if source == "random":
        return random_state(n, np.random.default_rng(seed))
    if "," in source:
        return _state_from_literal(source, n)
    return _state_from_file(source, n)


def _state_from_literal(text: str, n: int) -> StateVector:
    values = []
    for token in text.split(","):
        token = token.strip()
        try:
            values.append(complex(token.replace("i", "j")))
        except ValueError as exc:
            raise CommandError(EX_USAGE, f"bad amplitude token {token!r}") from exc
    if len(values) != 1 << n:
        raise CommandError(
            EX_USAGE, f"--n {n} needs {1 << n} amplitudes, got {len(values)}"
        )
    amps = np.array(values, dtype=np.complex128)
    if not np.all(np.isfinite(amps)):
        raise CommandError(EX_USAGE, "amplitudes must be finite")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > LITERAL_NORM_ATOL:
        raise CommandError(
            EX_STATE, f"input state norm is {norm!r}, off by more than {LITERAL_NORM_ATOL}"
        )
    if norm != 1.0:
        print(f"note: input renormalized (norm was {norm!r})", file=sys.stderr)
    return StateVector(n, amps / norm)


def _state_from_file(path: str, n: int) -> StateVector:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
        state = state_from_dict(payload)
    except OSError as exc:
        raise CommandError(EX_FILE, f"cannot read state file {path!r}: {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise CommandError(EX_FILE, f"state file {path!r} is not a valid state: {exc}") from exc
    if state.n_qubits != n:
        raise CommandError(
            EX_USAGE, f"--n {n} does not match the {state.n_qubits}-qubit state in {path!r}"
        )
    norm = state.norm()
    if abs(norm - 1.0) > LITERAL_NORM_ATOL:
        raise CommandError(
            EX_STATE, f"state in {path!r} has norm {norm!r}, off by more than {LITERAL_NORM_ATOL}"
        )
    if norm != 1.0:
        print(f"note: input renormalized (norm was {norm!r})", file=sys.stderr)
        return StateVector(n, state.amplitudes / norm)
    return state


def _render_report(report: VerificationReport) -> str:
    mode = "exhaustive" if report.n <= 3 else "sampled"
    lines = [f"protocol verification: n={report.n} ({mode})"]
    for stage in report.stages_checked:
        verdict = "PASS" if stage.max_deviation < 1e-10 else "FAIL"
        if stage.name == "sixteen_row_fixture":
            done = stage.cases if verdict == "PASS" else 0
            detail = f"fixture rows {done}/{stage.cases}"
        else:
            detail = f"{stage.cases} case(s)"
        lines.append(
            f"  {verdict}  {stage.name:<20} {detail:<22} max deviation {stage.max_deviation:.3e}"
        )
    branch_verdict = "PASS" if report.max_branch_deviation < 1e-10 else "FAIL"
    branch_detail = f"{report.branches_checked} checked"
    lines.append(
        f"  {branch_verdict}  {'outcome_branches':<20} {branch_detail:<22} "
        f"max deviation {report.max_branch_deviation:.3e}"
    )
    lines.append("overall: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(lines) + "\n"


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    except OSError as exc:
        raise CommandError(EX_FILE, f"cannot write {out!r}: {exc}") from exc


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
