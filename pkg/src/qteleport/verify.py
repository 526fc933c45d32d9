"""Closed-form oracles for each protocol stage and the exhaustive checker.

The oracles here are built by direct index arithmetic — no gate matrices —
so they share no code path with the simulator and a shared bug cannot mask
itself.  ``verify_protocol`` drives both routes over basis and random
inputs (exhaustively for n <= 3) and reports per-stage maximum amplitude
deviations; equality is literal, including signs, with no global-phase
alignment.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitchain import BitChain
from .statevector import StateVector, basis_state, random_state, tensor
from .gates import hadamard_closed_form, hadamard_layer
from .teleport import (
    alice_cnot_layer,
    alice_hadamard_layer,
    prepare_generalized_bell,
    teleport,
)

PASS_TOLERANCE = 1e-10

# Transcribed two-qubit pre-measurement table: for each 4-bit outcome, the
# receiver-block coefficient of basis label b is sign * alpha[source], listed
# for b = 00, 01, 10, 11.  Kept literal, as (sign, source) pairs, so it checks
# the generating code instead of sharing it.
TWO_QUBIT_OUTCOME_TABLE: dict[str, tuple[tuple[int, int], ...]] = {
    "0000": ((+1, 0), (+1, 1), (+1, 2), (+1, 3)),
    "0001": ((+1, 1), (+1, 0), (+1, 3), (+1, 2)),
    "0010": ((+1, 2), (+1, 3), (+1, 0), (+1, 1)),
    "0011": ((+1, 3), (+1, 2), (+1, 1), (+1, 0)),
    "0100": ((+1, 0), (-1, 1), (+1, 2), (-1, 3)),
    "0101": ((-1, 1), (+1, 0), (-1, 3), (+1, 2)),
    "0110": ((+1, 2), (-1, 3), (+1, 0), (-1, 1)),
    "0111": ((-1, 3), (+1, 2), (-1, 1), (+1, 0)),
    "1000": ((+1, 0), (+1, 1), (-1, 2), (-1, 3)),
    "1001": ((+1, 1), (+1, 0), (-1, 3), (-1, 2)),
    "1010": ((-1, 2), (-1, 3), (+1, 0), (+1, 1)),
    "1011": ((-1, 3), (-1, 2), (+1, 1), (+1, 0)),
    "1100": ((+1, 0), (-1, 1), (-1, 2), (+1, 3)),
    "1101": ((-1, 1), (+1, 0), (+1, 3), (-1, 2)),
    "1110": ((-1, 2), (+1, 3), (+1, 0), (-1, 1)),
    "1111": ((+1, 3), (-1, 2), (-1, 1), (+1, 0)),
}


def bell_closed_form(n: int) -> StateVector:
    """Matched-halves superposition on 2n qubits: amplitude 2^(-n/2) on every
    label whose first and second halves agree, 0 elsewhere."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    amps = np.zeros(1 << (2 * n), dtype=np.complex128)
    scale = 1.0 / math.sqrt(2.0**n)
    for j in range(1 << n):
        amps[(j << n) | j] = scale
    return StateVector(2 * n, amps)


def post_cnot_closed_form(alpha: Sequence[complex] | np.ndarray, n: int) -> StateVector:
    """3n-qubit state after the sender's CNOT layer: amplitude
    alpha[i] / sqrt(2^n) at index (i, j XOR i, j) for every i, j."""
    a = _as_alpha(alpha, n)
    amps = np.zeros(1 << (3 * n), dtype=np.complex128)
    scale = 1.0 / math.sqrt(2.0**n)
    for i in range(1 << n):
        for j in range(1 << n):
            amps[(i << (2 * n)) | ((j ^ i) << n) | j] = a[i] * scale
    return StateVector(3 * n, amps)


def pre_measurement_closed_form(alpha: Sequence[complex] | np.ndarray, n: int) -> StateVector:
    """3n-qubit state after the sender's Hadamard layer.

    Index (k, j XOR i, j) accumulates (-1)^parity(i AND k) * alpha[i] / 2^n
    over i; distinct i can land on the same index, so contributions add.
    """
    a = _as_alpha(alpha, n)
    amps = np.zeros(1 << (3 * n), dtype=np.complex128)
    scale = 1.0 / (2.0**n)
    dim = 1 << n
    for i in range(dim):
        for k in range(dim):
            sign = -1.0 if (i & k).bit_count() & 1 else 1.0
            contribution = sign * a[i] * scale
            for j in range(dim):
                amps[(k << (2 * n)) | ((j ^ i) << n) | j] += contribution
    return StateVector(3 * n, amps)


def outcome_branches(
    alpha: Sequence[complex] | np.ndarray, n: int
) -> dict[BitChain, StateVector]:
    """Outcome-keyed decomposition of the pre-measurement state.

    For outcome bits a (first half z, second half x) the receiver branch is
    branch[b] = (-1)^parity((b XOR x) AND z) * alpha[b XOR x] / 2^n — the
    forward Pauli product times the input, scaled by the common prefactor.
    Branches therefore have squared norm 4^(-n), not 1.
    """
    a = _as_alpha(alpha, n)
    scale = 1.0 / (2.0**n)
    dim = 1 << n
    branches: dict[BitChain, StateVector] = {}
    for out in range(1 << (2 * n)):
        z = out >> n
        x = out & (dim - 1)
        amps = np.empty(dim, dtype=np.complex128)
        for b in range(dim):
            source = b ^ x
            sign = -1.0 if (source & z).bit_count() & 1 else 1.0
            amps[b] = sign * a[source] * scale
        branches[BitChain(2 * n, out)] = StateVector(n, amps)
    return branches


def reassemble_from_branches(
    branches: dict[BitChain, StateVector], n: int
) -> StateVector:
    """Stack |outcome> tensor branch over all outcomes back into the full
    3n-qubit state; equality with the pre-measurement closed form is the
    identity the whole module exists to check."""
    amps = np.zeros(1 << (3 * n), dtype=np.complex128)
    for bits, branch in branches.items():
        start = bits.value << n
        amps[start : start + (1 << n)] = branch.amplitudes
    return StateVector(3 * n, amps)


def two_qubit_table_state(alpha: Sequence[complex] | np.ndarray) -> StateVector:
    """Assemble the 6-qubit pre-measurement state from the literal
    sixteen-row table (two teleported qubits only)."""
    a = _as_alpha(alpha, 2)
    amps = np.zeros(1 << 6, dtype=np.complex128)
    for outcome_text, row in TWO_QUBIT_OUTCOME_TABLE.items():
        out = int(outcome_text, 2)
        for b, (sign, source) in enumerate(row):
            amps[(out << 2) | b] = sign * a[source] / 4.0
    return StateVector(6, amps)


@dataclass(frozen=True)
class StageCheck:
    """Aggregate result of one comparison family."""

    name: str
    cases: int
    max_deviation: float


@dataclass(frozen=True)
class VerificationReport:
    n: int
    stages_checked: tuple[StageCheck, ...]
    branches_checked: int
    max_branch_deviation: float
    passed: bool


def verify_protocol(n: int, trials: int = 20, seed: int = 0) -> VerificationReport:
    """Cross-check the gate pipeline against every closed form.

    For n <= 3 the sweep is exhaustive over basis inputs and all 4^n forced
    outcomes; for larger n both are sampled.  Failures are reported in the
    returned record, never raised.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")
    rng = np.random.default_rng(seed)
    exhaustive = n <= 3
    dim = 1 << n
    stages: list[StageCheck] = []

    bell_gate = prepare_generalized_bell(n)
    stages.append(StageCheck("bell_preparation", 1, _dev(bell_gate, bell_closed_form(n))))

    transform_dev = 0.0
    for v in range(dim):
        label = BitChain(n, v)
        transform_dev = max(
            transform_dev,
            _dev(hadamard_layer(basis_state(label), range(1, n + 1)), hadamard_closed_form(label)),
        )
    stages.append(StageCheck("hadamard_transform", dim, transform_dev))

    if exhaustive:
        basis_values = list(range(dim))
    else:
        basis_values = sorted(rng.choice(dim, size=min(4, dim), replace=False).tolist())
    alphas = [_unit_alpha(dim, v) for v in basis_values]
    alphas += [random_state(n, rng).amplitudes for _ in range(trials)]

    cnot_dev = layer_dev = reassembly_dev = fixture_dev = 0.0
    branch_candidates: list[tuple[np.ndarray, dict[BitChain, StateVector]]] = []
    for a in alphas:
        psi = StateVector(n, a)
        staged = alice_cnot_layer(tensor(psi, bell_gate), n)
        cnot_dev = max(cnot_dev, _dev(staged, post_cnot_closed_form(a, n)))
        pre_gate = alice_hadamard_layer(staged, n)
        pre_oracle = pre_measurement_closed_form(a, n)
        layer_dev = max(layer_dev, _dev(pre_gate, pre_oracle))
        branches = outcome_branches(a, n)
        reassembly_dev = max(reassembly_dev, _dev(reassemble_from_branches(branches, n), pre_oracle))
        if n == 2:
            table = two_qubit_table_state(a)
            fixture_dev = max(fixture_dev, _dev(table, pre_oracle), _dev(table, pre_gate))
        branch_candidates.append((a, branches))
    stages.append(StageCheck("cnot_layer", len(alphas), cnot_dev))
    stages.append(StageCheck("hadamard_layer", len(alphas), layer_dev))
    stages.append(StageCheck("branch_reassembly", len(alphas), reassembly_dev))
    if n == 2:
        stages.append(StageCheck("sixteen_row_fixture", len(TWO_QUBIT_OUTCOME_TABLE), fixture_dev))

    if exhaustive:
        outcome_values = list(range(1 << (2 * n)))
    else:
        outcome_values = sorted(
            rng.choice(1 << (2 * n), size=min(32, 1 << (2 * n)), replace=False).tolist()
        )
    uniform_probability = 4.0 ** (-n)
    branches_checked = 0
    branch_dev = 0.0
    for a, branches in branch_candidates:
        psi = StateVector(n, a)
        for out in outcome_values:
            bits = BitChain(2 * n, out)
            trace = teleport(psi, force_outcome=bits)
            predicted = branches[bits].amplitudes * (2.0**n)  # normalized branch
            branch_dev = max(
                branch_dev,
                float(np.max(np.abs(trace.bob_pre_correction.amplitudes - predicted))),
                float(np.max(np.abs(trace.bob_post_correction.amplitudes - a))),
                abs(trace.outcome.probability - uniform_probability),
            )
            branches_checked += 1

    passed = branch_dev < PASS_TOLERANCE and all(
        s.max_deviation < PASS_TOLERANCE for s in stages
    )
    return VerificationReport(
        n=n,
        stages_checked=tuple(stages),
        branches_checked=branches_checked,
        max_branch_deviation=branch_dev,
        passed=passed,
    )


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "n": report.n,
        "stages_checked": [
            {"name": s.name, "cases": s.cases, "max_deviation": s.max_deviation}
            for s in report.stages_checked
        ],
        "branches_checked": report.branches_checked,
        "max_branch_deviation": report.max_branch_deviation,
        "passed": report.passed,
    }


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report_to_dict(report))


def _dev(a: StateVector, b: StateVector) -> float:
    """Maximum absolute amplitude difference; no global-phase alignment."""
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def _unit_alpha(dim: int, index: int) -> np.ndarray:
    a = np.zeros(dim, dtype=np.complex128)
    a[index] = 1.0
    return a


def _as_alpha(alpha: Sequence[complex] | np.ndarray, n: int) -> np.ndarray:
    a = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    if a.shape != (1 << n,):
        raise ValueError(f"expected {1 << n} input amplitudes for n={n}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("input amplitudes must be finite")
    drift = abs(float(np.linalg.norm(a)) - 1.0)
    if drift > 1e-8:
        raise ValueError(f"input amplitudes are not normalized (drift {drift:.3e})")
    return a
