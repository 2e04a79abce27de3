"""Trap-derived device parameters and the (d, V0) sweep.

The double well along x is V(x) = (m wx^2 / 2 d^2)(x^2 - d^2/4)^2, so the
barrier at x = 0 is V0 = m wx^2 d^2 / 32 and the curvature at each minimum
is m wx^2. Transverse confinement is harmonic in y and z.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import IO, Iterable, NamedTuple, Sequence

from . import constants as C
from .dynamics import calibrate_transfer_time
from .errors import DomainError

EXP_LIMIT = 700.0
BLOCKADE_RATIO = 100.0
COULOMB_MODES = ("bare-coulomb", "as-printed")
CSV_HEADER = ("d_nm", "V0_meV", "J_meV", "U_meV", "I_meV", "t34_meV", "T_ps", "blockade_ok")


@dataclass(frozen=True)
class MaterialParams:
    effective_mass: float = C.GAAS_EFFECTIVE_MASS  # units of m_e
    kappa: float = C.GAAS_KAPPA

    def __post_init__(self):
        if not (self.effective_mass > 0 and self.kappa > 0):
            raise DomainError("effective mass and kappa must be positive")

    @property
    def mass(self) -> float:
        """Effective mass in meV ps^2 / nm^2."""
        return self.effective_mass * C.ELECTRON_MASS


@dataclass(frozen=True)
class TrapParams:
    V0: float  # meV
    d: float  # nm
    omega_y: float | None = None  # rad/ps, None means equal to omega_x
    omega_z: float | None = None

    def __post_init__(self):
        if not (self.V0 > 0 and self.d > 0):
            raise DomainError(f"V0 and d must be positive, got V0={self.V0}, d={self.d}")
        for w in (self.omega_y, self.omega_z):
            if w is not None and not w > 0:
                raise DomainError("transverse frequencies must be positive")


@dataclass(frozen=True)
class DeviceParams:
    material: MaterialParams
    interdot: TrapParams
    intradot: TrapParams


def gaas_device(
    V0: float = 5.0,
    d: float = 60.0,
    hw_y: float = 2.0,
    hw_z: float = 10.0,
) -> DeviceParams:
    """GaAs device with fixed transverse confinement given as hbar*omega in meV."""
    trap = TrapParams(V0, d, hw_y / C.HBAR, hw_z / C.HBAR)
    return DeviceParams(MaterialParams(), trap, trap)


class Coupling(NamedTuple):
    value: float  # meV
    underflow: bool


def omega_from_barrier(V0: float, d: float, m_eff: float) -> float:
    """omega_x (rad/ps) such that the quartic well has barrier V0 at x = 0."""
    if not (V0 > 0 and d > 0 and m_eff > 0):
        raise DomainError("V0, d and effective mass must be positive")
    return math.sqrt(32 * V0 / (m_eff * C.ELECTRON_MASS)) / d


def quartic_potential(x: float, omega_x: float, d: float, m_eff: float) -> float:
    m = m_eff * C.ELECTRON_MASS
    return 0.5 * m * omega_x**2 / d**2 * (x * x - d * d / 4) ** 2


def alpha_squared(omega: float, m_eff: float) -> float:
    """m omega / hbar in nm^-2."""
    return m_eff * C.ELECTRON_MASS * omega / C.HBAR


def tunnel_coupling_from_frequencies(
    omega_x: float, omega_y: float, omega_z: float, d: float, m_eff: float
) -> Coupling:
    """(hbar/2)(wx + wy + wz) exp(-alpha_x^2 d^2 / 4)."""
    expo = alpha_squared(omega_x, m_eff) * d * d / 4
    if expo > EXP_LIMIT:
        return Coupling(0.0, True)
    return Coupling(0.5 * C.HBAR * (omega_x + omega_y + omega_z) * math.exp(-expo), False)


def trap_frequencies(params: TrapParams, m_eff: float) -> tuple[float, float, float]:
    wx = omega_from_barrier(params.V0, params.d, m_eff)
    wy = wx if params.omega_y is None else params.omega_y
    wz = wx if params.omega_z is None else params.omega_z
    return wx, wy, wz


def tunnel_coupling(params: TrapParams, m_eff: float) -> Coupling:
    wx, wy, wz = trap_frequencies(params, m_eff)
    return tunnel_coupling_from_frequencies(wx, wy, wz, params.d, m_eff)


def coulomb_coupling(d: float, kappa: float, alpha_sq: float, mode: str = "bare-coulomb") -> Coupling:
    """Nearest-neighbour repulsion q^2 / (8 pi eps0 kappa d), optionally with
    the Gaussian overlap factor exp(-alpha^2 d^2 / 2) ("as-printed")."""
    if not (d > 0 and kappa > 0 and alpha_sq > 0):
        raise DomainError("d, kappa and alpha^2 must be positive")
    bare = C.COULOMB_CONSTANT / (2 * kappa * d)
    if mode == "bare-coulomb":
        return Coupling(bare, False)
    if mode != "as-printed":
        raise DomainError(f"unknown Coulomb mode {mode!r}; expected one of {COULOMB_MODES}")
    expo = alpha_sq * d * d / 2
    if expo > EXP_LIMIT:
        return Coupling(0.0, True)
    return Coupling(bare * math.exp(-expo), False)


class GateTime(NamedTuple):
    T: float  # ps, 4 x calibrated transfer time
    J: float  # meV
    tau: float  # ps
    T_printed: float  # ps, 4 pi hbar / J


def gate_time(device: DeviceParams) -> GateTime:
    J, under = tunnel_coupling(device.interdot, device.material.effective_mass)
    if under or J <= 0:
        raise DomainError("no tunneling: interdot coupling underflows")
    tt = calibrate_transfer_time(J)
    return GateTime(4 * tt.calibrated, J, tt.calibrated, 4 * tt.printed_formula)


@dataclass(frozen=True)
class SweepRow:
    d: float
    V0: float
    J: float
    U_bare: float
    U_printed: float
    U: float  # the selected mode
    I: float
    t34: float
    T: float
    T_printed: float
    blockade_ok: bool


def sweep_point(template: DeviceParams, d: float, V0: float, mode: str = "bare-coulomb") -> SweepRow:
    """One grid point; (d, V0) is applied to both the interdot and intradot trap."""
    m_eff = template.material.effective_mass
    inter = replace(template.interdot, d=d, V0=V0)
    intra = replace(template.intradot, d=d, V0=V0)
    J, _ = tunnel_coupling(inter, m_eff)
    t34, _ = tunnel_coupling(intra, m_eff)
    a2 = alpha_squared(trap_frequencies(intra, m_eff)[0], m_eff)
    u_bare = coulomb_coupling(d, template.material.kappa, a2, "bare-coulomb").value
    u_printed = coulomb_coupling(d, template.material.kappa, a2, "as-printed").value
    U = u_bare if mode == "bare-coulomb" else u_printed
    if J > 0:
        tt = calibrate_transfer_time(J)
        T, T_printed = 4 * tt.calibrated, 4 * tt.printed_formula
    else:
        T = T_printed = math.inf
    I = J * J / U if U > 0 else math.inf
    ok = J == 0 or (U > 0 and U / J >= BLOCKADE_RATIO)
    return SweepRow(d, V0, J, u_bare, u_printed, U, I, t34, T, T_printed, ok)


def sweep(
    template: DeviceParams,
    d_range: Sequence[float],
    V0_range: Sequence[float],
    mode: str = "bare-coulomb",
) -> list[SweepRow]:
    """Rows in d-major order."""
    if mode not in COULOMB_MODES:
        raise DomainError(f"unknown Coulomb mode {mode!r}")
    if len(d_range) == 0 or len(V0_range) == 0:
        raise DomainError("sweep grids must be nonempty")
    return [sweep_point(template, float(d), float(v), mode) for d in d_range for v in V0_range]


def fmt(x) -> str:
    """9 significant digits, lowercase exponent."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".9g")


def write_sweep_csv(rows: Iterable[SweepRow], out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([fmt(v) for v in (r.d, r.V0, r.J, r.U, r.I, r.t34, r.T, r.blockade_ok)])


def read_sweep_csv(f: IO[str]) -> list[dict]:
    rows = []
    for rec in csv.DictReader(f):
        rows.append({k: (v == "true" if k == "blockade_ok" else float(v)) for k, v in rec.items()})
    return rows
