"""State-vector simulator and analytic oracles for teleporting n-qubit states."""

from .bitchain import (
    BitChain,
    append_bit,
    bitwise_and,
    bitwise_xor,
    iverson_delta,
    parity_of_ones,
)
from .statevector import (
    CapacityError,
    MeasurementOutcome,
    NormalizationError,
    StateVector,
    basis_state,
    fidelity,
    inner_product,
    max_qubits,
    measure_subset,
    probabilities_of_subset,
    project_onto_outcome,
    random_state,
    state_from_dict,
    state_from_json,
    state_to_dict,
    state_to_json,
    tensor,
)
from .gates import (
    Gate2x2,
    PauliCorrection,
    apply_cnot,
    apply_gate,
    apply_pauli_correction,
    apply_pauli_correction_inverse,
    hadamard,
    hadamard_closed_form,
    hadamard_layer,
    identity,
    pauli_x,
    pauli_z,
)
from .teleport import (
    ScheduleOp,
    TeleportTrace,
    alice_cnot_layer,
    alice_hadamard_layer,
    branch_state,
    circuit_schedule,
    correction_for_outcome,
    prepare_generalized_bell,
    render_schedule,
    replay_schedule,
    teleport,
    trace_to_dict,
    trace_to_json,
)
from .verify import (
    TWO_QUBIT_OUTCOME_TABLE,
    StageCheck,
    VerificationReport,
    bell_closed_form,
    outcome_branches,
    post_cnot_closed_form,
    pre_measurement_closed_form,
    reassemble_from_branches,
    report_to_dict,
    report_to_json,
    two_qubit_table_state,
    verify_protocol,
)

__version__ = "0.1.0"

__all__ = [
    "BitChain",
    "append_bit",
    "bitwise_and",
    "bitwise_xor",
    "iverson_delta",
    "parity_of_ones",
    "CapacityError",
    "MeasurementOutcome",
    "NormalizationError",
    "StateVector",
    "basis_state",
    "fidelity",
    "inner_product",
    "max_qubits",
    "measure_subset",
    "probabilities_of_subset",
    "project_onto_outcome",
    "random_state",
    "state_from_dict",
    "state_from_json",
    "state_to_dict",
    "state_to_json",
    "tensor",
    "Gate2x2",
    "PauliCorrection",
    "apply_cnot",
    "apply_gate",
    "apply_pauli_correction",
    "apply_pauli_correction_inverse",
    "hadamard",
    "hadamard_closed_form",
    "hadamard_layer",
    "identity",
    "pauli_x",
    "pauli_z",
    "ScheduleOp",
    "TeleportTrace",
    "alice_cnot_layer",
    "alice_hadamard_layer",
    "branch_state",
    "circuit_schedule",
    "correction_for_outcome",
    "prepare_generalized_bell",
    "render_schedule",
    "replay_schedule",
    "teleport",
    "trace_to_dict",
    "trace_to_json",
    "TWO_QUBIT_OUTCOME_TABLE",
    "StageCheck",
    "VerificationReport",
    "bell_closed_form",
    "outcome_branches",
    "post_cnot_closed_form",
    "pre_measurement_closed_form",
    "reassemble_from_branches",
    "report_to_dict",
    "report_to_json",
    "two_qubit_table_state",
    "verify_protocol",
    "__version__",
]
