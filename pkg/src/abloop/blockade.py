"""Two-level Coulomb-blockade model H = [[0, -J], [-J, U]]."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class BlockadePair:
    J: float  # meV, bare tunnelling
    U: float  # meV, penalty on the blocked dot

    def __post_init__(self):
        if not self.J > 0:
            raise DomainError(f"J must be positive, got {self.J}")
        if not self.U >= 0:
            raise DomainError(f"U must be non-negative, got {self.U}")

    def matrix(self) -> np.ndarray:
        return np.array([[0.0, -self.J], [-self.J, self.U]])


def exact_spectrum(pair: BlockadePair) -> tuple[float, float]:
    root = math.hypot(pair.U, 2 * pair.J)
    # lower root written without cancellation for U >> J
    e_minus = -2 * pair.J**2 / (pair.U + root)
    return e_minus, pair.U - e_minus


def effective_tunneling(pair: BlockadePair) -> float:
    """First-order coupling J^2 / U through the blocked dot; valid for U >> J."""
    if not pair.U > 0:
        raise DomainError("effective tunnelling needs U > 0")
    return pair.J**2 / pair.U


def exact_shift(pair: BlockadePair) -> float:
    """|E_minus|, the exact level shift that J^2 / U approximates."""
    return -exact_spectrum(pair)[0]


def truncation_error(pair: BlockadePair) -> float:
    """Relative deviation of J^2 / U from the exact shift."""
    exact = exact_shift(pair)
    return abs(effective_tunneling(pair) - exact) / exact


def max_leakage(pair: BlockadePair) -> float:
    """Peak population of the blocked dot under the detuned Rabi drive."""
    return 4 * pair.J**2 / (pair.U**2 + 4 * pair.J**2)
