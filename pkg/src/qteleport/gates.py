"""Single-qubit gates, CNOT, the multi-qubit Hadamard transform, and
measured-bit Pauli products.

``hadamard_closed_form`` builds the transform of a basis state directly
from the AND-parity sign, without touching a matrix; it is the independent
twin of ``hadamard_layer`` and the two are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bitchain import BitChain, iverson_delta
from .statevector import StateVector

_UNITARITY_ATOL = 1e-12


class Gate2x2:
    """A 2x2 unitary; construction rejects anything with M M† != I."""

    __slots__ = ("matrix", "label")

    def __init__(self, matrix, label: str = "U") -> None:
        m = np.array(matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("gate entries must be finite")
        deviation = np.max(np.abs(m @ m.conj().T - np.eye(2)))
        if deviation > _UNITARITY_ATOL:
            raise ValueError(f"matrix is not unitary (deviation {deviation:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("Gate2x2 is immutable")

    def __repr__(self) -> str:
        return f"Gate2x2({self.label})"


_SQRT_HALF = 1.0 / math.sqrt(2.0)
_H = Gate2x2([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], "H")
_X = Gate2x2([[0.0, 1.0], [1.0, 0.0]], "X")
_Z = Gate2x2([[1.0, 0.0], [0.0, -1.0]], "Z")
_I = Gate2x2([[1.0, 0.0], [0.0, 1.0]], "I")


def hadamard() -> Gate2x2:
    """|0> -> (|0>+|1>)/sqrt(2), |1> -> (|0>-|1>)/sqrt(2)."""
    return _H


def pauli_x() -> Gate2x2:
    """Bit flip: swaps |0> and |1>."""
    return _X


def pauli_z() -> Gate2x2:
    """Phase flip: negates |1>."""
    return _Z


def identity() -> Gate2x2:
    return _I


def apply_gate(state: StateVector, gate: Gate2x2, target: int) -> StateVector:
    """Apply a 2x2 gate on the target qubit (1-based), identity elsewhere."""
    n = state.n_qubits
    if not 1 <= target <= n:
        raise ValueError(f"target qubit {target} outside 1..{n}")
    t = state.amplitudes.reshape((2,) * n)
    t = np.moveaxis(t, target - 1, 0)
    t = np.tensordot(gate.matrix, t, axes=([1], [0]))
    t = np.moveaxis(t, 0, target - 1)
    return StateVector(n, t.reshape(-1))


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Flip the target qubit wherever the control qubit is 1."""
    n = state.n_qubits
    if control == target:
        raise ValueError(f"control and target must differ, both are {control}")
    for q in (control, target):
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} outside 1..{n}")
    cmask = 1 << (n - control)
    tmask = 1 << (n - target)
    idx = np.arange(1 << n)
    source = np.where(idx & cmask, idx ^ tmask, idx)
    return StateVector(n, state.amplitudes[source])


def hadamard_layer(state: StateVector, qubits: Iterable[int]) -> StateVector:
    """Fold a Hadamard over each listed qubit (they commute on distinct qubits)."""
    out = state
    for q in qubits:
        out = apply_gate(out, _H, q)
    return out


def hadamard_closed_form(i: BitChain) -> StateVector:
    """The Hadamard transform of basis state ``|i>``, built without matrices.

    Every label k receives amplitude (-1)^delta(i, k) / sqrt(2^n) where
    delta is the AND-parity of the two labels.
    """
    n = i.width
    scale = 1.0 / math.sqrt(2.0**n)
    amps = np.empty(1 << n, dtype=np.complex128)
    for k in range(1 << n):
        sign = -1.0 if iverson_delta(i, BitChain(n, k)) else 1.0
        amps[k] = sign * scale
    return StateVector(n, amps)


@dataclass(frozen=True)
class PauliCorrection:
    """Exponent bits for products of X and Z over a block of n qubits.

    Bit m of each chain is the exponent on the gate acting on the m-th
    qubit of the block (M^0 = I, M^1 = M).
    """

    n: int
    x_exponents: BitChain
    z_exponents: BitChain

    def __post_init__(self) -> None:
        if self.x_exponents.width != self.n or self.z_exponents.width != self.n:
            raise ValueError(
                f"exponent widths ({self.x_exponents.width}, {self.z_exponents.width}) "
                f"must equal n={self.n}"
            )


def _check_block(state: StateVector, corr: PauliCorrection, base: int) -> None:
    if base < 1 or base + corr.n - 1 > state.n_qubits:
        raise ValueError(
            f"correction block {base}..{base + corr.n - 1} outside 1..{state.n_qubits}"
        )


def apply_pauli_correction(state: StateVector, corr: PauliCorrection, base: int) -> StateVector:
    """Apply (X products)(Z products) on qubits base..base+n-1.

    The Z-exponent factors act first, then the X factors; qubit base+m-1
    carries the m-th exponent bit of each chain.
    """
    _check_block(state, corr, base)
    out = state
    for m in range(1, corr.n + 1):
        if corr.z_exponents.bit(m):
            out = apply_gate(out, _Z, base + m - 1)
    for m in range(1, corr.n + 1):
        if corr.x_exponents.bit(m):
            out = apply_gate(out, _X, base + m - 1)
    return out


def apply_pauli_correction_inverse(
    state: StateVector, corr: PauliCorrection, base: int
) -> StateVector:
    """Exact inverse of :func:`apply_pauli_correction`: X factors first, then Z.

    Composing the forward operator with this one is the identity including
    sign, not merely up to a global phase.
    """
    _check_block(state, corr, base)
    out = state
    for m in range(1, corr.n + 1):
        if corr.x_exponents.bit(m):
            out = apply_gate(out, _X, base + m - 1)
    for m in range(1, corr.n + 1):
        if corr.z_exponents.bit(m):
            out = apply_gate(out, _Z, base + m - 1)
    return out


def schedule_line(kind: str, qubits: Sequence[int]) -> str:
    """One line of the text gate format: ``H q3``, ``CNOT q1 q4``, ``M q1..q6``."""
    if kind in ("H", "X", "Z"):
        (q,) = qubits
        return f"{kind} q{q}"
    if kind == "CNOT":
        control, target = qubits
        return f"CNOT q{control} q{target}"
    if kind == "M":
        first, last = qubits
        return f"M q{first}..q{last}"
    raise ValueError(f"unknown gate kind {kind!r}")
