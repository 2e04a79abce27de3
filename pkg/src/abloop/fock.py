"""Occupation-number basis for spinless fermions and its one-body operators.

Configurations are stored as sorted tuples of occupied dots and ordered by
their bit pattern (dot 0 is the least significant bit). Fermionic signs use
the Jordan-Wigner string in that same dot order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .errors import DomainError

MAX_DOTS = 12


def _mask(config):
    return sum(1 << k for k in config)


@dataclass(frozen=True)
class FockBasis:
    n_dots: int
    n_particles: int
    states: tuple = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.states)})

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, config) -> int:
        """Position of a configuration (any iterable of occupied dots)."""
        key = tuple(sorted(config))
        try:
            return self._index[key]
        except KeyError:
            raise DomainError(f"configuration {key} not in basis") from None

    def basis_state(self, config) -> "StateVector":
        amps = np.zeros(self.dim, dtype=complex)
        amps[self.index(config)] = 1.0
        return StateVector(self, amps)

    def _check_dot(self, i):
        if not (0 <= i < self.n_dots):
            raise DomainError(f"dot index {i} outside 0..{self.n_dots - 1}")


@dataclass(frozen=True)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probability(self, config) -> float:
        return float(abs(self.amplitudes[self.basis.index(config)]) ** 2)

    def amplitude(self, config) -> complex:
        return complex(self.amplitudes[self.basis.index(config)])


@dataclass(frozen=True)
class HermitianOperator:
    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.basis.dim, self.basis.dim):
            raise DomainError(f"matrix shape {m.shape} does not match basis dimension {self.basis.dim}")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=1e-12):
            raise DomainError("matrix is not Hermitian")

    def __add__(self, other):
        if other.basis != self.basis:
            raise DomainError("operators live on different bases")
        return HermitianOperator(self.basis, self.matrix + other.matrix)

    def __rmul__(self, scalar):
        return HermitianOperator(self.basis, float(scalar) * self.matrix)

    def expectation(self, psi: StateVector) -> float:
        v = psi.amplitudes
        return float(np.real(np.vdot(v, self.matrix @ v)))


def build_basis(n_dots: int, n_particles: int) -> FockBasis:
    if not 1 <= n_dots <= MAX_DOTS:
        raise DomainError(f"n_dots must satisfy 1 <= n_dots <= {MAX_DOTS}, got {n_dots}")
    if not 0 <= n_particles <= n_dots:
        raise DomainError(f"n_particles must satisfy 0 <= n_particles <= n_dots, got {n_particles}")
    configs = sorted(combinations(range(n_dots), n_particles), key=_mask)
    return FockBasis(n_dots, n_particles, tuple(configs))


def hop_amplitudes(basis: FockBasis, i: int, j: int):
    """Yield (target, source, sign) for every nonzero element of a†_i a_j."""
    lo, hi = min(i, j), max(i, j)
    for src, config in enumerate(basis.states):
        occ = set(config)
        if j not in occ or i in occ:
            continue
        between = sum(1 for k in config if lo < k < hi)
        new = tuple(sorted((occ - {j}) | {i}))
        yield basis.index(new), src, (-1) ** between


def hopping_matrix(basis: FockBasis, i: int, j: int) -> np.ndarray:
    """Dense a†_i a_j (not Hermitian on its own)."""
    basis._check_dot(i)
    basis._check_dot(j)
    if i == j:
        raise DomainError("hopping needs two distinct dots; use number_operator for i == j")
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    for tgt, src, sign in hop_amplitudes(basis, i, j):
        m[tgt, src] = sign
    return m


def hopping_operator(basis: FockBasis, i: int, j: int) -> HermitianOperator:
    """a†_i a_j + a†_j a_i."""
    m = hopping_matrix(basis, i, j)
    return HermitianOperator(basis, m + m.conj().T)


def number_operator(basis: FockBasis, i: int) -> HermitianOperator:
    basis._check_dot(i)
    diag = np.array([1.0 if i in s else 0.0 for s in basis.states])
    return HermitianOperator(basis, np.diag(diag).astype(complex))


def total_number_operator(basis: FockBasis) -> HermitianOperator:
    diag = np.array([float(len(s)) for s in basis.states])
    return HermitianOperator(basis, np.diag(diag).astype(complex))


def dimension(n_dots: int, n_particles: int) -> int:
    return comb(n_dots, n_particles)
