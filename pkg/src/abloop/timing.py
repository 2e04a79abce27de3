"""Common-control timing: integers with sqrt(2) m close to 2n + 1.

With links (1,2) and (1,3) on one control, the occupied branch oscillates at
J and the empty branch at sqrt(2) J. One joint duration t serves both when
J t / hbar = m pi and sqrt(2) J t / hbar = (2n + 1) pi, which is only met
approximately.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable

from .constants import HBAR
from .errors import DomainError
from .optimize import scan_then_refine
from .protocols import DeviceLayout, common_control_protocol, wrap_phase
from .trap import fmt

SQRT2 = math.sqrt(2.0)
CONVENTIONS = ("as-printed", "half")
TIMING_HEADER = ("m", "n", "mismatch", "gate_error", "convention")


@dataclass
class TimingSolution:
    m: int
    n: int
    mismatch: float
    gate_error: float = math.nan
    pareto: bool = False

    @property
    def numerator(self) -> float:
        return abs(SQRT2 * self.m - (2 * self.n + 1))


def best_n(m: int) -> int:
    """n >= 0 minimising |sqrt(2) m - (2n + 1)|; ties go to the smaller n."""
    x = SQRT2 * m
    lo = max(0, math.floor((x - 1) / 2))
    cands = [n for n in (lo - 1, lo, lo + 1, lo + 2) if n >= 0]
    return min(cands, key=lambda n: (abs(x - (2 * n + 1)), n))


def integer_pair_search(max_m: int) -> list[TimingSolution]:
    """Best n for every m <= max_m, with the Pareto frontier of (m, mismatch) marked."""
    if max_m < 1:
        raise DomainError(f"max_m must be >= 1, got {max_m}")
    out = []
    best = math.inf
    for m in range(1, max_m + 1):
        n = best_n(m)
        mis = abs(SQRT2 * m - (2 * n + 1)) / (2 * n + 1)
        sol = TimingSolution(m, n, mis, pareto=mis < best)
        best = min(best, mis)
        out.append(sol)
    return out


def best_solution(solutions: Iterable[TimingSolution]) -> TimingSolution:
    """Smallest mismatch; the smallest m wins ties."""
    return min(solutions, key=lambda s: (s.mismatch, s.m))


def joint_time(m: int, J: float, convention: str = "as-printed") -> float:
    """Joint pulse duration in ps for the occupied-branch condition J t / hbar = m pi."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    t = m * math.pi * HBAR / J
    return t if convention == "as-printed" else t / 2


def ideal_target_phase(solution: TimingSolution, convention: str = "as-printed") -> float:
    """cp-gate angle reached when both conditions hold exactly.

    With the full-period convention the occupied branch returns with (-1)^m
    and the empty one with -1, so odd m gives no conditional phase and even m
    gives pi. Under the halved convention the electrons end away from home for odd m and no
    diagonal gate is reached; 0 is used as the reference.
    """
    if convention == "half":
        return 0.0
    return wrap_phase(math.pi * ((solution.m + 1) % 2))


def gate_error_from_mismatch(
    solution: TimingSolution,
    layout: DeviceLayout,
    J: float,
    U: float,
    B: float,
    convention: str = "as-printed",
    t23: float = 0.0,
) -> float:
    """1 - fidelity of the common-control gate at t_joint for this (m, n)."""
    if U < 100 * J:
        raise DomainError(f"timing analysis needs U/J >= 100, got {U / J:.6g}")
    res = common_control_protocol(
        layout, J, joint_time(solution.m, J, convention), t23, B, U,
        target_phase=ideal_target_phase(solution, convention),
    )
    solution.gate_error = 1.0 - res.fidelity
    return solution.gate_error


def joint_time_optimize(
    layout: DeviceLayout,
    J: float,
    U: float,
    B: float,
    t_window: tuple[float, float],
    target_phase: float = 0.0,
    t23: float = 0.0,
    n_grid: int = 401,
    gauge=None,
) -> tuple[float, float]:
    """Minimise 1 - fidelity over t_joint in the window; returns (t*, error*)."""
    lo, hi = t_window
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi <= lo:
        raise DomainError(f"t_window must be a nonempty interval in [0, inf), got {t_window}")

    def err(t):
        r = common_control_protocol(layout, J, t, t23, B, U, target_phase=target_phase, gauge=gauge)
        return 1.0 - r.fidelity

    return scan_then_refine(err, lo, hi, n_grid=n_grid, tol=1e-9 * (hi - lo))


def write_timing_csv(solutions: Iterable[TimingSolution], convention: str, out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TIMING_HEADER)
    for s in solutions:
        w.writerow([s.m, s.n, fmt(s.mismatch), fmt(s.gate_error), convention])
