"""
Discrete Weyl operators on single particles of a StateVector.

R_x(n) shifts the x-basis digit, R_x(n)|d> = |(d + n) mod D>; R_p(m) multiplies
|d> by exp(i 2 pi m d / D), so that R_p(m)|p_l> = |p_(l+m) mod D>. Both act as
index permutations or phase multiplications, never as dense matrices. With
these conventions R_p(m) R_x(n) = exp(i 2 pi m n / D) R_x(n) R_p(m).
"""

import math

import numpy as np

from services.qudit_state import StateVector

ShiftAmount = int


def roots_of_unity(dimension: int) -> np.ndarray:
    """omega^j for j in [0, D), omega = exp(i 2 pi / D)"""
    return np.exp(2j * np.pi * np.arange(dimension) / dimension)


def _check_particle(state: StateVector, particle: int) -> None:
    if not 0 <= particle < state.num_qudits:
        raise IndexError(f"particle {particle} out of range for {state.num_qudits} qudits")


def p_basis_state(l: int, dimension: int) -> StateVector:
    """|p_l> = D^(-1/2) sum_k exp(i 2 pi k l / D) |k>"""
    if not 0 <= l < dimension:
        raise ValueError(f"momentum index {l} out of range for dimension {dimension}")
    k = np.arange(dimension)
    amplitudes = roots_of_unity(dimension)[(k * l) % dimension] / math.sqrt(dimension)
    return StateVector(dimension, 1, amplitudes)


def apply_rx(state: StateVector, particle: int, n: ShiftAmount) -> StateVector:
    _check_particle(state, particle)
    shifted = np.roll(state.as_tensor(), n % state.dimension, axis=particle)
    return StateVector(state.dimension, state.num_qudits, shifted.reshape(-1))


def apply_rp(state: StateVector, particle: int, m: ShiftAmount) -> StateVector:
    _check_particle(state, particle)
    dimension = state.dimension
    phases = roots_of_unity(dimension)[(np.arange(dimension) * (m % dimension)) % dimension]
    broadcast = [1] * state.num_qudits
    broadcast[particle] = dimension
    phased = state.as_tensor() * phases.reshape(broadcast)
    return StateVector(dimension, state.num_qudits, phased.reshape(-1))


def apply_displacement(state: StateVector, particle: int, n: ShiftAmount, m: ShiftAmount) -> StateVector:
    """Phase-space displacement R_x(n) R_p(m) on one particle"""
    return apply_rx(apply_rp(state, particle, m), particle, n)


def commutation_phase(n: ShiftAmount, m: ShiftAmount, dimension: int) -> complex:
    return complex(roots_of_unity(dimension)[(n * m) % dimension])
