"""
Dense state vectors for N qudits of dimension D.

Amplitude of |d_0>|d_1>...|d_{N-1}> lives at index sum_i d_i * D^(N-1-i):
particle 0 is the most significant digit, matching left-to-right ket order.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from core.config import ALGEBRA_TOLERANCE, get_settings
from core.exceptions import DegenerateStateError, IncompatibleOperandsError, SizeGuardError


def check_size(dimension: int, exponent: int, max_amplitudes: Optional[int] = None) -> int:
    """Return D^exponent, raising SizeGuardError when it exceeds the guard"""
    limit = max_amplitudes if max_amplitudes is not None else get_settings().max_amplitudes
    size = dimension ** exponent
    if size > limit:
        raise SizeGuardError(dimension, exponent, limit)
    return size


def digit_weights(dimension: int, count: int) -> np.ndarray:
    """Place values D^(count-1), ..., D, 1 for big-endian digit strings"""
    return dimension ** np.arange(count - 1, -1, -1, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable amplitude array of D^N complex numbers"""

    dimension: int
    num_qudits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be at least 2, got {self.dimension}")
        if self.num_qudits < 0:
            raise ValueError(f"num_qudits must be non-negative, got {self.num_qudits}")
        size = check_size(self.dimension, self.num_qudits)
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != size:
            raise IncompatibleOperandsError(
                f"expected {size} amplitudes for {self.num_qudits} qudits of dimension "
                f"{self.dimension}, got {amplitudes.size}"
            )
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def shape(self) -> tuple:
        return (self.dimension,) * self.num_qudits

    def as_tensor(self) -> np.ndarray:
        """Amplitudes viewed with one axis per particle"""
        return self.amplitudes.reshape(self.shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tolerance: float = ALGEBRA_TOLERANCE) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tolerance

    def amplitude(self, digits: Sequence[int]) -> complex:
        if len(digits) != self.num_qudits:
            raise IncompatibleOperandsError(
                f"expected {self.num_qudits} digits, got {len(digits)}"
            )
        index = int(np.dot(np.asarray(digits, dtype=np.int64), digit_weights(self.dimension, self.num_qudits)))
        return complex(self.amplitudes[index])

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.dimension, self.num_qudits, self.amplitudes * factor)

    def __repr__(self) -> str:
        return f"StateVector(dimension={self.dimension}, num_qudits={self.num_qudits})"


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    """Single-particle density matrix"""

    dimension: int
    entries: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, tolerance: float = ALGEBRA_TOLERANCE) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0.0, atol=tolerance))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def distance_from_maximally_mixed(self) -> float:
        """Max-norm distance to (1/D) I"""
        target = np.eye(self.dimension) / self.dimension
        return float(np.max(np.abs(self.entries - target)))


def basis_ket(digits: Sequence[int], dimension: int) -> StateVector:
    """Computational basis ket |d_0 d_1 ...>"""
    for digit in digits:
        if not 0 <= digit < dimension:
            raise ValueError(f"digit {digit} out of range for dimension {dimension}")
    size = check_size(dimension, len(digits))
    amplitudes = np.zeros(size, dtype=np.complex128)
    if digits:
        amplitudes[int(np.dot(np.asarray(digits, dtype=np.int64), digit_weights(dimension, len(digits))))] = 1.0
    else:
        amplitudes[0] = 1.0
    return StateVector(dimension, len(digits), amplitudes)


def _require_same_dimension(u: StateVector, v: StateVector) -> None:
    if u.dimension != v.dimension:
        raise IncompatibleOperandsError(
            f"dimension mismatch: {u.dimension} vs {v.dimension}"
        )


def _require_same_shape(u: StateVector, v: StateVector) -> None:
    _require_same_dimension(u, v)
    if u.num_qudits != v.num_qudits:
        raise IncompatibleOperandsError(
            f"particle count mismatch: {u.num_qudits} vs {v.num_qudits}"
        )


def tensor(u: StateVector, v: StateVector) -> StateVector:
    _require_same_dimension(u, v)
    check_size(u.dimension, u.num_qudits + v.num_qudits)
    return StateVector(u.dimension, u.num_qudits + v.num_qudits, np.kron(u.amplitudes, v.amplitudes))


def tensor_all(states: Sequence[StateVector]) -> StateVector:
    if not states:
        raise ValueError("tensor_all needs at least one state")
    result = states[0]
    for state in states[1:]:
        result = tensor(result, state)
    return result


def inner(u: StateVector, v: StateVector) -> complex:
    """<u|v>, antilinear in the first argument"""
    _require_same_shape(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def fidelity_up_to_phase(u: StateVector, v: StateVector) -> float:
    """|<u|v>|; equals 1 iff u and v differ by a global phase"""
    return abs(inner(u, v))


def normalize(state: StateVector) -> StateVector:
    norm = state.norm()
    if norm <= ALGEBRA_TOLERANCE:
        raise DegenerateStateError("degenerate state: cannot normalize a zero vector")
    return state.scaled(1.0 / norm)


def permute_particles(state: StateVector, order: Sequence[int]) -> StateVector:
    """New particle j is old particle order[j]"""
    if sorted(order) != list(range(state.num_qudits)):
        raise ValueError(f"{list(order)} is not a permutation of {state.num_qudits} particles")
    moved = np.transpose(state.as_tensor(), list(order))
    return StateVector(state.dimension, state.num_qudits, moved.reshape(-1))


def reduce_to_single(state: StateVector, particle: int) -> ReducedDensity:
    """Partial trace over every particle except `particle`"""
    if not 0 <= particle < state.num_qudits:
        raise IndexError(f"particle {particle} out of range for {state.num_qudits} qudits")
    matrix = np.moveaxis(state.as_tensor(), particle, 0).reshape(state.dimension, -1)
    return ReducedDensity(state.dimension, matrix @ matrix.conj().T)


def uniform_random_state(dimension: int, num_qudits: int, rng: np.random.Generator) -> StateVector:
    """Haar-distributed pure state (normalized complex Gaussian vector)"""
    size = check_size(dimension, num_qudits)
    raw = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return normalize(StateVector(dimension, num_qudits, raw))
