"""Exact propagation under piecewise-constant Hamiltonians."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .constants import HBAR
from .errors import DomainError
from .fock import HermitianOperator, StateVector


@dataclass(frozen=True)
class PulseSegment:
    hamiltonian: HermitianOperator
    duration: float  # ps

    def __post_init__(self):
        if not np.isfinite(self.duration) or self.duration < 0:
            raise DomainError(f"segment duration must be finite and >= 0, got {self.duration}")


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        if segs and any(s.hamiltonian.basis != segs[0].hamiltonian.basis for s in segs):
            raise DomainError("all segments must share one basis")
        object.__setattr__(self, "segments", segs)

    @property
    def basis(self):
        return self.segments[0].hamiltonian.basis


def propagator(h: HermitianOperator, t: float) -> np.ndarray:
    """exp(-i H t / hbar) from the eigendecomposition of H."""
    if not np.isfinite(t) or t < 0:
        raise DomainError(f"evolution time must be finite and >= 0, got {t}")
    w, v = np.linalg.eigh(h.matrix)
    return (v * np.exp(-1j * w * t / HBAR)) @ v.conj().T


def evolve(h: HermitianOperator, psi: StateVector, t: float) -> StateVector:
    if h.basis != psi.basis:
        raise DomainError("Hamiltonian and state live on different bases")
    return StateVector(psi.basis, propagator(h, t) @ psi.amplitudes)


def sequence_propagator(seq: PulseSequence) -> np.ndarray:
    if not seq.segments:
        raise DomainError("pulse sequence is empty")
    u = np.eye(seq.basis.dim, dtype=complex)
    for seg in seq.segments:
        if seg.duration > 0:
            u = propagator(seg.hamiltonian, seg.duration) @ u
    return u


def run_sequence(seq: PulseSequence, psi0: StateVector) -> StateVector:
    if not seq.segments:
        raise DomainError("pulse sequence is empty")
    if seq.basis != psi0.basis:
        raise DomainError("sequence and initial state live on different bases")
    return StateVector(psi0.basis, sequence_propagator(seq) @ psi0.amplitudes)


class TransferTime(NamedTuple):
    calibrated: float  # ps, first maximum of sin^2(J t / hbar)
    printed_formula: float  # ps, pi hbar / J


def calibrate_transfer_time(J: float) -> TransferTime:
    """Shortest full-transfer time for two resonant dots coupled by J (meV).

    Under H = -J sigma_x the transfer probability is sin^2(J t / hbar), so
    full transfer first happens at pi hbar / (2 J). The formula pi hbar / J
    quoted alongside is twice that and is reported, not used.
    """
    if not J > 0:
        raise DomainError(f"J must be positive, got {J}")
    return TransferTime(np.pi * HBAR / (2 * J), np.pi * HBAR / J)


def transfer_probability(J: float, t: float) -> float:
    return float(np.sin(J * t / HBAR) ** 2)


def single_qubit_rotation(J: float, t: float) -> np.ndarray:
    """Propagator of the resonant dot pair, restricted to (left, right)."""
    if not J > 0:
        raise DomainError(f"J must be positive, got {J}")
    if not np.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and >= 0, got {t}")
    w, v = np.linalg.eigh(np.array([[0.0, -J], [-J, 0.0]]))
    return (v * np.exp(-1j * w * t / HBAR)) @ v.conj().T


def build_sequence(pairs: Sequence[tuple]) -> PulseSequence:
    """PulseSequence from (hamiltonian, duration) pairs."""
    return PulseSequence(tuple(PulseSegment(h, t) for h, t in pairs))
