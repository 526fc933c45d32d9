"""End-to-end teleportation of an n-qubit state.

Register layout, big-endian: qubits 1..n hold the payload, n+1..2n the
sender's ancillas, 2n+1..3n the receiver's.  A run entangles the 2n
ancillas into a generalized Bell state, applies the sender's CNOT layer
(qubit m controls qubit n+m) and Hadamard layer (qubits 1..n), measures
the first 2n qubits, and finally undoes the outcome-keyed Pauli product on
the receiver's block.  Of the 2n measured bits, the first n select Z
exponents and the last n select X exponents; the receiver applies the
exact inverse of that product, so the corrected state equals the payload
amplitude by amplitude, not just up to phase.

Every stage re-checks normalization (drift beyond 1e-8 raises) so a buggy
gate surfaces immediately instead of being hidden by renormalization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bitchain import BitChain
from .gates import (
    PauliCorrection,
    apply_cnot,
    apply_gate,
    apply_pauli_correction,
    apply_pauli_correction_inverse,
    hadamard,
    hadamard_layer,
    schedule_line,
)
from .statevector import (
    MeasurementOutcome,
    StateVector,
    basis_state,
    fidelity,
    measure_subset,
    project_onto_outcome,
    state_to_dict,
    tensor,
)


@dataclass(frozen=True)
class TeleportTrace:
    """Full record of one protocol run."""

    n: int
    input_state: StateVector
    bell_state: StateVector
    pre_measurement_state: StateVector
    outcome: MeasurementOutcome
    bob_pre_correction: StateVector
    bob_post_correction: StateVector
    fidelity_to_input: float


@dataclass(frozen=True)
class ScheduleOp:
    """One circuit operation.

    ``kind`` is "H" (qubits = (target,)), "CNOT" ((control, target)),
    "M" ((first, last) measured span) or "CORRECT" ((first, last) span of
    the receiver block awaiting the measured-bit-keyed Pauli product).
    """

    kind: str
    qubits: tuple[int, ...]


def prepare_generalized_bell(n: int) -> StateVector:
    """Entangle 2n fresh qubits: H on each of the first n, then CNOT from
    qubit m to qubit n+m.  The result has amplitude 2^(-n/2) exactly on the
    labels whose two halves agree, 0 elsewhere."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    state = basis_state(BitChain(2 * n, 0))
    for m in range(1, n + 1):
        state = apply_gate(state, hadamard(), m)
    for m in range(1, n + 1):
        state = apply_cnot(state, m, n + m)
    return state


def alice_cnot_layer(state: StateVector, n: int) -> StateVector:
    """Sender's CNOTs on the full 3n register: qubit m controls qubit n+m."""
    _check_register(state, n)
    out = state
    for m in range(1, n + 1):
        out = apply_cnot(out, m, n + m)
    return out


def alice_hadamard_layer(state: StateVector, n: int) -> StateVector:
    """Sender's Hadamards on qubits 1..n of the full 3n register."""
    _check_register(state, n)
    return hadamard_layer(state, range(1, n + 1))


def correction_for_outcome(outcome: BitChain) -> PauliCorrection:
    """Split 2n measured bits into exponents: first half Z, second half X."""
    if outcome.width % 2 != 0:
        raise ValueError(f"outcome width {outcome.width} is not 2n for any n")
    n = outcome.width // 2
    z_bits = BitChain(n, outcome.value >> n)
    x_bits = BitChain(n, outcome.value & ((1 << n) - 1))
    return PauliCorrection(n=n, x_exponents=x_bits, z_exponents=z_bits)


def branch_state(outcome: MeasurementOutcome | BitChain, psi: StateVector) -> StateVector:
    """Predicted (uncorrected) receiver state for one measurement outcome:
    the forward Pauli product keyed by the outcome bits, applied to psi."""
    bits = outcome.bits if isinstance(outcome, MeasurementOutcome) else outcome
    if bits.width != 2 * psi.n_qubits:
        raise ValueError(
            f"outcome width {bits.width} != 2n for the {psi.n_qubits}-qubit input"
        )
    return apply_pauli_correction(psi, correction_for_outcome(bits), base=1)


def teleport(
    psi: StateVector,
    seed: int | None = None,
    *,
    force_outcome: BitChain | None = None,
) -> TeleportTrace:
    """Run the full protocol on ``psi``.

    With ``seed`` the sender's measurement is sampled reproducibly; with
    ``force_outcome`` that outcome is imposed instead (its reported
    probability is still the true Born value), which lets callers sweep all
    4^n branches.
    """
    n = psi.n_qubits
    psi.require_normalized(context="input state")
    bell = prepare_generalized_bell(n)
    bell.require_normalized(context="entangled ancilla state")
    full = tensor(psi, bell)
    full = alice_cnot_layer(full, n)
    full.require_normalized(context="post-CNOT state")
    pre_measurement = alice_hadamard_layer(full, n)
    pre_measurement.require_normalized(context="pre-measurement state")

    alice_qubits = list(range(1, 2 * n + 1))
    if force_outcome is not None:
        outcome, collapsed = project_onto_outcome(pre_measurement, alice_qubits, force_outcome)
    else:
        if seed is None:
            raise ValueError("teleport needs a seed unless force_outcome is given")
        outcome, collapsed = measure_subset(pre_measurement, alice_qubits, seed)

    bob_pre = _receiver_block(collapsed, n, outcome.bits)
    bob_post = apply_pauli_correction_inverse(
        bob_pre, correction_for_outcome(outcome.bits), base=1
    )
    bob_post.require_normalized(context="corrected receiver state")
    return TeleportTrace(
        n=n,
        input_state=psi,
        bell_state=bell,
        pre_measurement_state=pre_measurement,
        outcome=outcome,
        bob_pre_correction=bob_pre,
        bob_post_correction=bob_post,
        fidelity_to_input=fidelity(psi, bob_post),
    )


def circuit_schedule(n: int) -> list[ScheduleOp]:
    """Gate schedule of the protocol on 3n qubits, in causal order."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ops: list[ScheduleOp] = []
    ops += [ScheduleOp("H", (n + m,)) for m in range(1, n + 1)]
    ops += [ScheduleOp("CNOT", (n + m, 2 * n + m)) for m in range(1, n + 1)]
    ops += [ScheduleOp("CNOT", (m, n + m)) for m in range(1, n + 1)]
    ops += [ScheduleOp("H", (m,)) for m in range(1, n + 1)]
    ops.append(ScheduleOp("M", (1, 2 * n)))
    ops.append(ScheduleOp("CORRECT", (2 * n + 1, 3 * n)))
    return ops


def render_schedule(ops: list[ScheduleOp]) -> str:
    """Text form, one operation per line; the correction marker becomes a
    trailing comment naming the operator family."""
    lines = []
    for op in ops:
        if op.kind == "CORRECT":
            first, last = op.qubits
            lines.append(
                f"# correct q{first}..q{last}: inverse (X products)(Z products) "
                "keyed by the measured bits"
            )
        else:
            lines.append(schedule_line(op.kind, op.qubits))
    return "\n".join(lines) + "\n"


def replay_schedule(ops: list[ScheduleOp], psi: StateVector) -> StateVector:
    """Re-run the gate part of a schedule on ``psi`` plus zeroed ancillas,
    stopping at the measurement marker; reproduces the pre-measurement state."""
    n = psi.n_qubits
    state = tensor(psi, basis_state(BitChain(2 * n, 0)))
    for op in ops:
        if op.kind == "H":
            state = apply_gate(state, hadamard(), op.qubits[0])
        elif op.kind == "CNOT":
            state = apply_cnot(state, op.qubits[0], op.qubits[1])
        elif op.kind == "M":
            break
        else:
            raise ValueError(f"cannot replay schedule op {op.kind!r}")
    return state


def trace_to_dict(trace: TeleportTrace) -> dict:
    """JSON-ready record of a run; states use the state-vector format."""
    return {
        "n": trace.n,
        "outcome": str(trace.outcome.bits),
        "probability": trace.outcome.probability,
        "fidelity": trace.fidelity_to_input,
        "states": {
            "input": state_to_dict(trace.input_state),
            "bell": state_to_dict(trace.bell_state),
            "pre_measurement": state_to_dict(trace.pre_measurement_state),
            "bob_pre_correction": state_to_dict(trace.bob_pre_correction),
            "bob_post_correction": state_to_dict(trace.bob_post_correction),
        },
    }


def trace_to_json(trace: TeleportTrace) -> str:
    return json.dumps(trace_to_dict(trace))


def _check_register(state: StateVector, n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if state.n_qubits != 3 * n:
        raise ValueError(f"expected a {3 * n}-qubit register, got {state.n_qubits} qubits")


def _receiver_block(collapsed: StateVector, n: int, outcome: BitChain) -> StateVector:
    """Extract the receiver's n-qubit factor after the first 2n qubits
    collapsed onto ``outcome``; the full state is |outcome> tensor (block)."""
    start = outcome.value << n
    block = collapsed.amplitudes[start : start + (1 << n)]
    return StateVector(n, block)
