"""
Generalized Bell basis and M-particle maximally entangled states.

psi(l; k_1..k_{M-1}) = D^(-1/2) sum_n exp(i 2 pi l n / D) |n> (x)_i |n - k_i mod D>
"""

import itertools
import math
from typing import Any, Iterator, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from services.qudit_state import StateVector, check_size, digit_weights
from services.weyl import apply_rp, apply_rx, roots_of_unity


def _reduce_residues(value: Any, info: ValidationInfo) -> Any:
    """Runs after int coercion, so numpy integers are reduced too"""
    dimension = info.data.get("dimension")
    if dimension is None:
        return value
    if isinstance(value, tuple):
        return tuple(v % dimension for v in value)
    return value % dimension


def _render(prefix: str, head: int, tail: Sequence[int]) -> str:
    if not tail:
        return f"{prefix}({head};)"
    return f"{prefix}({head}; {','.join(str(v) for v in tail)})"


class MultiEntangledSpec(BaseModel):
    """Label (l, k_1..k_{M-1}) of an M-qudit maximally entangled state"""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(..., ge=2)
    l: int = 0
    k: tuple[int, ...] = ()

    @field_validator("l", "k", mode="after")
    @classmethod
    def _reduce(cls, value: Any, info: ValidationInfo) -> Any:
        return _reduce_residues(value, info)

    @property
    def num_particles(self) -> int:
        return len(self.k) + 1

    @property
    def full_k(self) -> tuple[int, ...]:
        """k with k_0 = 0 prepended for the reference particle"""
        return (0,) + self.k

    def render(self) -> str:
        return _render("psi", self.l, self.k)


class GBellLabel(BaseModel):
    """Measurement outcome (r, s_1..s_{M-1}) in the generalized Bell basis"""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(..., ge=2)
    r: int = 0
    s: tuple[int, ...] = ()

    @field_validator("r", "s", mode="after")
    @classmethod
    def _reduce(cls, value: Any, info: ValidationInfo) -> Any:
        return _reduce_residues(value, info)

    @property
    def num_particles(self) -> int:
        return len(self.s) + 1

    @property
    def full_s(self) -> tuple[int, ...]:
        """Flat offsets with s_0 = 0 for the phase reference"""
        return (0,) + self.s

    @property
    def index(self) -> int:
        """Position in enumerate_basis order"""
        digits = (self.r,) + self.s
        return int(np.dot(np.asarray(digits, dtype=np.int64), digit_weights(self.dimension, len(digits))))

    def as_spec(self) -> MultiEntangledSpec:
        return MultiEntangledSpec(dimension=self.dimension, l=self.r, k=self.s)

    def render(self) -> str:
        return _render("bell", self.r, self.s)


def make_entangled(spec: MultiEntangledSpec) -> StateVector:
    dimension, count = spec.dimension, spec.num_particles
    size = check_size(dimension, count)
    n = np.arange(dimension)
    digits = (n[:, None] - np.asarray(spec.full_k, dtype=np.int64)[None, :]) % dimension
    indices = digits @ digit_weights(dimension, count)
    amplitudes = np.zeros(size, dtype=np.complex128)
    amplitudes[indices] = roots_of_unity(dimension)[(spec.l * n) % dimension] / math.sqrt(dimension)
    return StateVector(dimension, count, amplitudes)


def enumerate_basis(dimension: int, num_particles: int) -> Iterator[GBellLabel]:
    """All D^M labels, r most significant, then s_1, s_2, ..."""
    check_size(dimension, num_particles)
    for digits in itertools.product(range(dimension), repeat=num_particles):
        yield GBellLabel(dimension=dimension, r=digits[0], s=digits[1:])


def bell_from_shifts(m: int, n: int, dimension: int) -> StateVector:
    """
    psi(m, n) generated from psi(0, 0) by local shifts.

    R_p(m) (x) R_x(n) applied to psi(0, 0) gives psi(m, -n), so the second
    particle is shifted by D - n instead.
    """
    origin = make_entangled(MultiEntangledSpec(dimension=dimension, l=0, k=(0,)))
    phased = apply_rp(origin, 0, m)
    return apply_rx(phased, 1, (dimension - n) % dimension)


def relabel(spec: MultiEntangledSpec, order: Sequence[int]) -> MultiEntangledSpec:
    """
    The same state with particles reordered: new particle j is old order[j].

    Exact up to the global phase exp(i 2 pi l k_{order[0]} / D).
    """
    if sorted(order) != list(range(spec.num_particles)):
        raise ValueError(f"{list(order)} is not a permutation of {spec.num_particles} particles")
    full_k = spec.full_k
    reference = full_k[order[0]]
    return MultiEntangledSpec(
        dimension=spec.dimension,
        l=spec.l,
        k=tuple(full_k[old] - reference for old in order[1:]),
    )
