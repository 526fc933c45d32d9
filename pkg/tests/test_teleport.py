import itertools
import json
import math

import numpy as np
import pytest

from qteleport.bitchain import BitChain
from qteleport.statevector import (
    NormalizationError,
    StateVector,
    basis_state,
    probabilities_of_subset,
    random_state,
    tensor,
)
from qteleport.teleport import (
    ScheduleOp,
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

SQRT_HALF = 1.0 / math.sqrt(2.0)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def pauli_product_matrix(x_bits, z_bits):
    """Dense (X products)(Z products) built with plain kronecker algebra,
    independent of the gate-application code."""
    x_op = np.array([[1.0 + 0j]])
    z_op = np.array([[1.0 + 0j]])
    for xb, zb in zip(x_bits, z_bits):
        x_op = np.kron(x_op, X if xb else I2)
        z_op = np.kron(z_op, Z if zb else I2)
    return x_op @ z_op


class TestBellPreparation:
    def test_single_pair(self):
        np.testing.assert_allclose(
            prepare_generalized_bell(1).amplitudes, [SQRT_HALF, 0, 0, SQRT_HALF], atol=1e-15
        )

    def test_two_pairs(self):
        expected = np.zeros(16)
        expected[[0b0000, 0b0101, 0b1010, 0b1111]] = 0.25 * 2  # 1/2 each
        np.testing.assert_allclose(prepare_generalized_bell(2).amplitudes, expected, atol=1e-15)

    def test_matched_halves_for_three_pairs(self):
        state = prepare_generalized_bell(3)
        expected = np.zeros(64)
        for j in range(8):
            expected[(j << 3) | j] = 1.0 / math.sqrt(8.0)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-14)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            prepare_generalized_bell(0)


class TestAliceLayers:
    def test_cnot_layer_single_qubit_case(self):
        a, b = 0.6, 0.8
        staged = alice_cnot_layer(tensor(StateVector(1, [a, b]), prepare_generalized_bell(1)), 1)
        expected = np.zeros(8)
        expected[[0b000, 0b011]] = a * SQRT_HALF
        expected[[0b110, 0b101]] = b * SQRT_HALF
        np.testing.assert_allclose(staged.amplitudes, expected, atol=1e-15)

    def test_cnot_layer_identity_on_zero_payload(self):
        for n in (1, 2, 3):
            full = tensor(basis_state(BitChain(n, 0)), prepare_generalized_bell(n))
            staged = alice_cnot_layer(full, n)
            np.testing.assert_array_equal(staged.amplitudes, full.amplitudes)

    def test_hadamard_layer_single_qubit_branches(self):
        a, b = 0.6, 0.8j
        staged = alice_cnot_layer(tensor(StateVector(1, [a, b]), prepare_generalized_bell(1)), 1)
        pre = alice_hadamard_layer(staged, 1)
        expected = np.zeros(8, dtype=complex)
        for outcome, pair in {0b00: (a, b), 0b01: (b, a), 0b10: (a, -b), 0b11: (-b, a)}.items():
            expected[(outcome << 1) | 0] = pair[0] / 2.0
            expected[(outcome << 1) | 1] = pair[1] / 2.0
        np.testing.assert_allclose(pre.amplitudes, expected, atol=1e-15)

    def test_hadamard_layer_uniform_for_basis_payload(self):
        full = tensor(basis_state(BitChain(2, 0)), prepare_generalized_bell(2))
        pre = alice_hadamard_layer(alice_cnot_layer(full, 2), 2)
        # payload e_0 leaves the first two qubits in the uniform positive superposition
        marginals = probabilities_of_subset(pre, [1, 2])
        for prob in marginals.values():
            assert prob == pytest.approx(0.25, abs=1e-12)
        assert np.all(pre.amplitudes[np.abs(pre.amplitudes) > 1e-12].real > 0)

    def test_register_size_validation(self):
        with pytest.raises(ValueError):
            alice_cnot_layer(random_state(4, 0), 1)
        with pytest.raises(ValueError):
            alice_hadamard_layer(random_state(5, 0), 2)


class TestBranchState:
    def test_zero_outcome_is_identity(self):
        psi = random_state(2, 3)
        result = branch_state(BitChain(4, 0), psi)
        np.testing.assert_array_equal(result.amplitudes, psi.amplitudes)

    def test_single_qubit_table(self):
        a, b = 0.6, 0.8j
        psi = StateVector(1, [a, b])
        expected = {
            "00": [a, b],     # does nothing
            "01": [b, a],     # X
            "10": [a, -b],    # Z
            "11": [-b, a],    # X then Z seen from the branch side
        }
        for text, amps in expected.items():
            result = branch_state(BitChain.from_string(text), psi)
            np.testing.assert_allclose(result.amplitudes, amps, atol=1e-15)

    def test_two_qubit_operator_pattern(self):
        psi = random_state(2, 9)
        for bits in itertools.product((0, 1), repeat=4):
            a_, b_, c_, d_ = bits
            outcome = BitChain.from_bits(bits)
            matrix = pauli_product_matrix(x_bits=(c_, d_), z_bits=(a_, b_))
            np.testing.assert_allclose(
                branch_state(outcome, psi).amplitudes,
                matrix @ psi.amplitudes,
                atol=1e-14,
                err_msg=f"outcome {outcome}",
            )

    def test_width_validation(self):
        with pytest.raises(ValueError):
            branch_state(BitChain(3, 0), random_state(2, 0))

    def test_correction_split(self):
        corr = correction_for_outcome(BitChain.from_string("1001"))
        assert corr.z_exponents == BitChain(2, 0b10)
        assert corr.x_exponents == BitChain(2, 0b01)
        with pytest.raises(ValueError):
            correction_for_outcome(BitChain(3, 0))


class TestTeleport:
    def test_basis_input_any_seed(self):
        for seed in range(5):
            trace = teleport(basis_state(BitChain(1, 0)), seed)
            assert trace.fidelity_to_input == pytest.approx(1.0, abs=1e-12)

    def test_uniform_two_qubit_input(self):
        psi = StateVector(2, [0.5, 0.5, 0.5, 0.5])
        trace = teleport(psi, 1)
        assert trace.fidelity_to_input == pytest.approx(1.0, abs=1e-10)
        assert trace.outcome.probability == pytest.approx(1 / 16, abs=1e-12)

    def test_many_seeds_three_qubits(self):
        psi = random_state(3, 77)
        for seed in range(200):
            trace = teleport(psi, seed)
            assert trace.fidelity_to_input == pytest.approx(1.0, abs=1e-10)

    def test_amplitudewise_exactness(self):
        for n in (1, 2, 3):
            for seed in range(10):
                psi = random_state(n, seed)
                trace = teleport(psi, seed)
                np.testing.assert_allclose(
                    trace.bob_post_correction.amplitudes, psi.amplitudes, atol=1e-10
                )

    def test_forced_outcomes_cover_all_branches(self):
        psi = random_state(2, 5)
        for value in range(16):
            bits = BitChain(4, value)
            trace = teleport(psi, force_outcome=bits)
            assert trace.outcome.bits == bits
            assert trace.outcome.probability == pytest.approx(1 / 16, abs=1e-12)
            predicted = branch_state(bits, psi)
            np.testing.assert_allclose(
                trace.bob_pre_correction.amplitudes, predicted.amplitudes, atol=1e-12
            )
            np.testing.assert_allclose(
                trace.bob_post_correction.amplitudes, psi.amplitudes, atol=1e-12
            )

    def test_uniform_outcome_law(self):
        for n in (1, 2, 3):
            psi = random_state(n, n)
            trace = teleport(psi, 0)
            probs = probabilities_of_subset(trace.pre_measurement_state, list(range(1, 2 * n + 1)))
            assert len(probs) == 4**n
            for prob in probs.values():
                assert prob == pytest.approx(4.0 ** (-n), abs=1e-10)

    def test_no_signaling_average(self):
        # averaging |branch|^2 over outcomes with their Born weights gives the
        # maximally mixed (uniform) probability vector
        for n in (1, 2):
            psi = random_state(n, 21 + n)
            accumulated = np.zeros(1 << n)
            for value in range(4**n):
                trace = teleport(psi, force_outcome=BitChain(2 * n, value))
                accumulated += trace.outcome.probability * np.abs(
                    trace.bob_pre_correction.amplitudes
                ) ** 2
            np.testing.assert_allclose(accumulated, 2.0 ** (-n), atol=1e-10)

    def test_requires_seed_or_forced_outcome(self):
        with pytest.raises(ValueError):
            teleport(random_state(1, 0))

    def test_rejects_unnormalized_input(self):
        with pytest.raises(NormalizationError):
            teleport(StateVector(1, [1.0, 0.5]), 0)

    def test_forced_outcome_width_checked(self):
        with pytest.raises(ValueError):
            teleport(random_state(2, 0), force_outcome=BitChain(3, 0))


class TestSchedule:
    def test_single_qubit_sequence(self):
        assert circuit_schedule(1) == [
            ScheduleOp("H", (2,)),
            ScheduleOp("CNOT", (2, 3)),
            ScheduleOp("CNOT", (1, 2)),
            ScheduleOp("H", (1,)),
            ScheduleOp("M", (1, 2)),
            ScheduleOp("CORRECT", (3, 3)),
        ]

    def test_operation_counts(self):
        for n in (1, 2, 3, 4):
            ops = circuit_schedule(n)
            kinds = [op.kind for op in ops]
            assert kinds.count("H") == 2 * n
            assert kinds.count("CNOT") == 2 * n
            assert kinds.count("M") == 1
            assert kinds.count("CORRECT") == 1

    def test_rendered_text_single_qubit(self):
        assert render_schedule(circuit_schedule(1)) == (
            "H q2\n"
            "CNOT q2 q3\n"
            "CNOT q1 q2\n"
            "H q1\n"
            "M q1..q2\n"
            "# correct q3..q3: inverse (X products)(Z products) keyed by the measured bits\n"
        )

    def test_render_is_deterministic(self):
        assert render_schedule(circuit_schedule(3)) == render_schedule(circuit_schedule(3))

    def test_replay_matches_pipeline(self):
        for n in (1, 2, 3):
            psi = random_state(n, 31 + n)
            trace = teleport(psi, 0)
            replayed = replay_schedule(circuit_schedule(n), psi)
            np.testing.assert_allclose(
                replayed.amplitudes, trace.pre_measurement_state.amplitudes, atol=1e-12
            )

    def test_replay_rejects_foreign_ops(self):
        with pytest.raises(ValueError):
            replay_schedule([ScheduleOp("SWAP", (1, 2))], random_state(1, 0))


class TestTraceSerialization:
    def test_document_shape(self):
        trace = teleport(random_state(2, 4), 11)
        payload = trace_to_dict(trace)
        assert payload["n"] == 2
        assert payload["outcome"] == str(trace.outcome.bits)
        assert set(payload["states"]) == {
            "input",
            "bell",
            "pre_measurement",
            "bob_pre_correction",
            "bob_post_correction",
        }
        assert payload["states"]["input"]["n_qubits"] == 2
        assert payload["states"]["pre_measurement"]["n_qubits"] == 6

    def test_byte_identical_for_equal_seeds(self):
        first = trace_to_json(teleport(random_state(2, 8), 99))
        second = trace_to_json(teleport(random_state(2, 8), 99))
        assert first == second

    def test_json_parses(self):
        trace = teleport(random_state(1, 2), 5)
        parsed = json.loads(trace_to_json(trace))
        assert parsed["fidelity"] == pytest.approx(1.0, abs=1e-10)
