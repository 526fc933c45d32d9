"""Dense amplitude vectors over qubit registers.

Qubits are numbered 1..n with qubit 1 the most significant bit of a basis
index, so ``|i>`` for a chain ``i`` sits at array position ``i.value``.
Operations return fresh vectors; amplitude arrays are frozen on
construction, which makes states safe to share across threads.

Normalization is deliberately not enforced by the type: protocol stages
re-check it explicitly (see :meth:`StateVector.require_normalized`) so a
drifting pipeline fails loudly instead of being silently renormalized, and
sub-normalized vectors (e.g. unnormalized measurement branches) remain
representable.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitchain import BitChain

DEFAULT_MAX_QUBITS = 21
CAPACITY_ENV_VAR = "QTELEPORT_MAX_QUBITS"

# Mass below this is treated as "no probability left", i.e. a broken state.
_ZERO_MASS = 1e-12


class CapacityError(RuntimeError):
    """A register would exceed the configured qubit capacity."""


class NormalizationError(RuntimeError):
    """A state that must be normalized has drifted beyond tolerance."""


def max_qubits() -> int:
    """Largest allowed register size.

    Defaults to 21 qubits (~32 MiB of amplitudes); the QTELEPORT_MAX_QUBITS
    environment variable overrides it.
    """
    raw = os.environ.get(CAPACITY_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        limit = int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAPACITY_ENV_VAR} must be an integer, got {raw!r}") from exc
    if limit < 1:
        raise ValueError(f"{CAPACITY_ENV_VAR} must be >= 1, got {limit}")
    return limit


@dataclass(frozen=True)
class MeasurementOutcome:
    """Classical bits read off a measured subset, with their Born probability."""

    bits: BitChain
    probability: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability {self.probability} outside [0, 1]")


class StateVector:
    """Complex amplitudes over an n-qubit register, indexed big-endian."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: Sequence[complex] | np.ndarray) -> None:
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
        if n_qubits > max_qubits():
            raise CapacityError(f"{n_qubits} qubits exceeds the capacity of {max_qubits()}")
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (1 << n_qubits,):
            raise ValueError(
                f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite (no NaN/Inf)")
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "amplitudes", amps)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("StateVector is immutable")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, atol: float = 1e-10) -> bool:
        return abs(self.norm() - 1.0) <= atol

    def require_normalized(self, atol: float = 1e-8, context: str = "state") -> None:
        """Raise :class:`NormalizationError` if the norm drifted beyond ``atol``."""
        drift = abs(self.norm() - 1.0)
        if drift > atol:
            raise NormalizationError(f"{context} has norm drift {drift:.3e} (> {atol:.0e})")

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, norm={self.norm():.6f})"


def basis_state(label: BitChain) -> StateVector:
    """The computational basis state carrying the given label."""
    amps = np.zeros(1 << label.width, dtype=np.complex128)
    amps[label.value] = 1.0
    return StateVector(label.width, amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; ``a`` supplies the high-order qubits."""
    combined = a.n_qubits + b.n_qubits
    if combined > max_qubits():
        raise CapacityError(
            f"tensor product needs {combined} qubits, exceeding the capacity of {max_qubits()}"
        )
    return StateVector(combined, np.kron(a.amplitudes, b.amplitudes))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product, conjugating ``a``."""
    _check_same_size(a, b, "inner_product")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2; 1 means equal up to a global phase."""
    _check_same_size(a, b, "fidelity")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def probabilities_of_subset(state: StateVector, qubits: Sequence[int]) -> dict[BitChain, float]:
    """Born probabilities of every outcome on the given qubits, in ascending
    outcome order.  Bit m of an outcome corresponds to ``qubits[m-1]``."""
    keep = _validate_qubits(state, qubits)
    n = state.n_qubits
    probs = np.abs(state.amplitudes.reshape((2,) * n)) ** 2
    others = tuple(ax for ax in range(n) if ax not in set(keep))
    marginal = probs.sum(axis=others)
    # summing leaves surviving axes in register order; restore the requested order
    order = [sorted(keep).index(ax) for ax in keep]
    marginal = np.transpose(marginal, order).reshape(-1)
    total = float(marginal.sum())
    if total < _ZERO_MASS:
        raise NormalizationError("state carries no probability mass; it was not normalized")
    k = len(qubits)
    return {BitChain(k, v): float(marginal[v]) for v in range(1 << k)}


def project_onto_outcome(
    state: StateVector, qubits: Sequence[int], bits: BitChain
) -> tuple[MeasurementOutcome, StateVector]:
    """Deterministically collapse the given qubits onto ``bits``.

    Returns the outcome with its true Born probability and the renormalized
    conditional state on the full register.
    """
    keep = _validate_qubits(state, qubits)
    if bits.width != len(qubits):
        raise ValueError(f"outcome width {bits.width} != {len(qubits)} measured qubits")
    n = state.n_qubits
    idx = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for pos, ax in enumerate(keep):
        want = bits.bit(pos + 1)
        mask &= ((idx >> (n - 1 - ax)) & 1) == want
    prob = float(np.sum(np.abs(state.amplitudes[mask]) ** 2))
    if prob < _ZERO_MASS:
        raise NormalizationError(f"outcome {bits} has no probability mass to collapse onto")
    collapsed = np.where(mask, state.amplitudes, 0.0) / math.sqrt(prob)
    return MeasurementOutcome(bits, min(prob, 1.0)), StateVector(n, collapsed)


def measure_subset(
    state: StateVector, qubits: Sequence[int], rng: np.random.Generator | int
) -> tuple[MeasurementOutcome, StateVector]:
    """Measure the given qubits with Born-rule sampling and collapse.

    The outcome is drawn by cumulative-probability inversion over outcomes
    in ascending label order from a seeded generator, so runs repeat
    bit-for-bit given the same seed.
    """
    generator = np.random.default_rng(rng)
    distribution = probabilities_of_subset(state, qubits)
    draw = generator.random()
    cumulative = 0.0
    chosen = None
    for bits, prob in distribution.items():
        cumulative += prob
        if draw < cumulative:
            chosen = bits
            break
    if chosen is None:  # cumulative fell short of 1 by rounding; take the last live outcome
        chosen = max((b for b, p in distribution.items() if p > 0.0), key=lambda b: b.value)
    return project_onto_outcome(state, qubits, chosen)


def random_state(n_qubits: int, rng: np.random.Generator | int) -> StateVector:
    """Haar-adjacent random state: 2^(n+1) independent standard normals form
    the real then imaginary parts, then the vector is normalized."""
    generator = np.random.default_rng(rng)
    half = 1 << n_qubits
    draws = generator.standard_normal(2 * half)
    amps = draws[:half] + 1j * draws[half:]
    return StateVector(n_qubits, amps / np.linalg.norm(amps))


def state_to_dict(state: StateVector) -> dict:
    """JSON-ready form: {"n_qubits": n, "amplitudes": [[re, im], ...]}.

    Floats serialize with round-trip-exact decimal representations.
    """
    return {
        "n_qubits": state.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_dict(payload: dict) -> StateVector:
    """Inverse of :func:`state_to_dict`; round-trips amplitudes exactly."""
    try:
        n = payload["n_qubits"]
        pairs = payload["amplitudes"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"not a state-vector document: missing {exc}") from exc
    if not isinstance(n, int):
        raise ValueError(f"n_qubits must be an integer, got {n!r}")
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return StateVector(n, amps)


def state_to_json(state: StateVector) -> str:
    return json.dumps(state_to_dict(state))


def state_from_json(text: str) -> StateVector:
    return state_from_dict(json.loads(text))


def _check_same_size(a: StateVector, b: StateVector, op: str) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"{op} needs equal registers, got {a.n_qubits} and {b.n_qubits} qubits")


def _validate_qubits(state: StateVector, qubits: Sequence[int]) -> list[int]:
    """Map 1-based qubit indices to tensor axes, rejecting bad subsets."""
    if not qubits:
        raise ValueError("no qubits selected for measurement")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices must be distinct, got {list(qubits)}")
    for q in qubits:
        if not 1 <= q <= state.n_qubits:
            raise ValueError(f"qubit {q} outside 1..{state.n_qubits}")
    return [q - 1 for q in qubits]
