"""Dense statevector and the primitive operations of interference search.

Basis convention: the ket |b1 b2 ... bn> maps to index sum(b_k * 2**(n-k)),
so the leftmost bit is the most significant. Every module uses this ordering.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .errors import (
    ArityMismatch,
    CapExceeded,
    NotNormalized,
    NullInterference,
    ShapeMismatch,
)

MAX_QUBITS = 24
NULL_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-9


class SupportsTruthTable(Protocol):
    arity: int

    def truth_table(self) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class StateVector:
    """``2**n_qubits`` complex128 amplitudes.

    Construction checks shape and finiteness only; normalization is checked
    where an operation needs it (see :meth:`is_normalized`).
    """

    n_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.n_qubits:
            raise ShapeMismatch(
                f"{self.n_qubits} qubits need {1 << self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, amps: Iterable[complex]) -> StateVector:
        arr = np.asarray(list(amps) if not isinstance(amps, np.ndarray) else amps,
                         dtype=np.complex128)
        n = int(arr.shape[0]).bit_length() - 1
        if arr.shape[0] != 1 << n:
            raise ShapeMismatch(f"length {arr.shape[0]} is not a power of two")
        return cls(n, arr)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> StateVector:
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def __len__(self) -> int:
        return self.amps.shape[0]

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return self.amps.real ** 2 + self.amps.imag ** 2

    def is_normalized(self, tol: float = NORM_TOLERANCE) -> bool:
        return abs(self.norm_sq() - 1.0) < tol

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        return self.n_qubits == other.n_qubits and bool(
            np.max(np.abs(self.amps - other.amps), initial=0.0) <= atol
        )


@dataclass(frozen=True)
class Histogram:
    """Shot counts keyed by basis index; zero-count outcomes are omitted."""

    n_qubits: int
    counts: dict[int, int]
    shots: int

    def modal(self) -> int:
        """Most frequent outcome, lowest index on ties."""
        return min(self.counts, key=lambda i: (-self.counts[i], i))

    def frequencies(self) -> dict[int, float]:
        return {i: c / self.shots for i, c in self.counts.items()}


def hadamard_uniform(n: int, cap: int = MAX_QUBITS) -> StateVector:
    """Equal superposition over all ``2**n`` basis states, amplitudes ``2**(-n/2)``."""
    if n < 0:
        raise ValueError(f"qubit count must be non-negative, got {n}")
    if n > cap:
        raise CapExceeded(f"{n} qubits exceeds cap of {cap}")
    size = 1 << n
    return StateVector(n, np.full(size, 1.0 / np.sqrt(size), dtype=np.complex128))


def invalid_mask(oracle: SupportsTruthTable, n_qubits: int,
                 exclusions: Iterable[int] = ()) -> np.ndarray:
    """Boolean mask of indices whose phase the marked arm inverts.

    True where the oracle rejects the basis state or the state was already
    found (excluded).
    """
    if oracle.arity != n_qubits:
        raise ArityMismatch(f"oracle arity {oracle.arity} != register size {n_qubits}")
    mask = ~oracle.truth_table()
    excl = np.fromiter(exclusions, dtype=np.int64)
    if excl.size:
        if excl.min() < 0 or excl.max() >= (1 << n_qubits):
            raise ValueError(f"exclusions must lie in [0, {1 << n_qubits})")
        mask = mask.copy()
        mask[excl] = True
    return mask


def apply_phase_oracle(state: StateVector, oracle: SupportsTruthTable,
                       exclusions: Iterable[int] = ()) -> StateVector:
    """Negate amplitudes where the oracle is false or the index is excluded."""
    mask = invalid_mask(oracle, state.n_qubits, exclusions)
    amps = state.amps.copy()
    np.negative(amps, out=amps, where=mask)
    return StateVector(state.n_qubits, amps)


def _renormalize(amps: np.ndarray, null_tolerance: float) -> np.ndarray:
    norm_sq = float(np.vdot(amps, amps).real)
    if not norm_sq >= null_tolerance:
        raise NullInterference(norm_sq, null_tolerance)
    return amps / np.sqrt(norm_sq)


def renormalize(state: StateVector, null_tolerance: float = NULL_TOLERANCE) -> StateVector:
    """Rescale to unit norm.

    Raises NullInterference when the squared norm is below ``null_tolerance``.
    """
    return StateVector(state.n_qubits, _renormalize(state.amps, null_tolerance))


def interfere(arm_a: StateVector, arm_b: StateVector,
              null_tolerance: float = NULL_TOLERANCE) -> StateVector:
    """Overlap two arms: componentwise sum, then renormalize.

    There is no recombining beam splitter; the sum is taken as is.
    """
    if arm_a.n_qubits != arm_b.n_qubits:
        raise ShapeMismatch(f"arms have {arm_a.n_qubits} and {arm_b.n_qubits} qubits")
    return StateVector(arm_a.n_qubits, _renormalize(arm_a.amps + arm_b.amps, null_tolerance))


def apply_amplitude_noise(state: StateVector, delta: float, rng: np.random.Generator,
                          null_tolerance: float = NULL_TOLERANCE) -> StateVector:
    """Multiply each amplitude by ``1 + delta*g``, then renormalize.

    ``g`` are i.i.d. standard complex Gaussians (real and imaginary parts each
    N(0, 1/2), so E|g|^2 = 1). ``delta == 0`` returns the input untouched and
    draws nothing from ``rng``.
    """
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if delta == 0:
        return state
    size = len(state)
    g = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    g *= np.sqrt(0.5)
    amps = state.amps * (1.0 + delta * g)
    return StateVector(state.n_qubits, _renormalize(amps, null_tolerance))


def measure(state: StateVector, shots: int, rng: np.random.Generator) -> Histogram:
    """Draw ``shots`` independent Born-rule samples.

    Sampling is a single multinomial draw over ``|amp_i|**2``, which has the
    same distribution as ``shots`` independent categorical samples.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    if not state.is_normalized():
        raise NotNormalized(f"state has squared norm {state.norm_sq():.12g}")
    p = state.probabilities()
    p = p / p.sum()
    draws = rng.multinomial(shots, p)
    nz = np.flatnonzero(draws)
    return Histogram(state.n_qubits, {int(i): int(draws[i]) for i in nz}, shots)
