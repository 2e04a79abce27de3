"""Device Hamiltonians: dot geometry, Peierls link phases, Coulomb terms.

The uniform field enters only through link phases in the symmetric gauge
A = (B/2)(-y, x, 0). A link (i, j, J, theta) contributes
-J (e^{i theta} a†_i a_j + e^{-i theta} a†_j a_i).
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import constants as C
from .errors import DomainError
from .fock import FockBasis, HermitianOperator, hopping_matrix, number_operator


@dataclass(frozen=True)
class DotGeometry:
    positions: tuple  # ((x, y), ...) in nm

    def __post_init__(self):
        pts = np.asarray(self.positions, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DomainError("positions must be a sequence of (x, y) pairs")
        if len(pts) < 2:
            raise DomainError("need at least 2 dots")
        if not np.all(np.isfinite(pts)):
            raise DomainError("positions must be finite")
        if len({tuple(p) for p in pts.tolist()}) != len(pts):
            raise DomainError("dot positions must be pairwise distinct")
        object.__setattr__(self, "positions", tuple(tuple(map(float, p)) for p in pts))

    @property
    def n_dots(self) -> int:
        return len(self.positions)

    def _check(self, i):
        if not 0 <= i < self.n_dots:
            raise DomainError(f"dot index {i} outside 0..{self.n_dots - 1}")


@dataclass(frozen=True)
class LinkCoupling:
    i: int
    j: int
    strength: float  # meV
    phase: float = 0.0  # rad, on the directed link i -> j

    def __post_init__(self):
        if self.i == self.j:
            raise DomainError("self-links are not allowed")
        if self.strength < 0:
            raise DomainError("link strength must be non-negative")

    def reversed(self) -> "LinkCoupling":
        return LinkCoupling(self.j, self.i, self.strength, -self.phase)


@dataclass(frozen=True)
class HamiltonianSpec:
    geometry: DotGeometry
    links: tuple = ()
    onsite: tuple = ()  # meV per dot, empty means all zero
    density_density: tuple = ()  # ((i, j, U), ...) in meV

    def __post_init__(self):
        n = self.geometry.n_dots
        seen = set()
        for link in self.links:
            self.geometry._check(link.i)
            self.geometry._check(link.j)
            key = frozenset((link.i, link.j))
            if key in seen:
                raise DomainError(f"duplicate link between dots {link.i} and {link.j}")
            seen.add(key)
        if self.onsite and len(self.onsite) != n:
            raise DomainError(f"onsite needs {n} entries, got {len(self.onsite)}")
        for i, j, u in self.density_density:
            self.geometry._check(i)
            self.geometry._check(j)
            if i == j:
                raise DomainError("density-density term needs two distinct dots")
            if u < 0:
                raise DomainError("density-density strength must be non-negative")

    def gauge_shifted(self, chi: Sequence[float]) -> "HamiltonianSpec":
        """Apply a per-dot gauge: every link phase gains chi_j - chi_i."""
        links = tuple(replace(l, phase=l.phase + chi[l.j] - chi[l.i]) for l in self.links)
        return replace(self, links=links)


def peierls_phase(geometry: DotGeometry, field_T: float, i: int, j: int) -> float:
    """Link phase (e B / 2 hbar)(x_i y_j - y_i x_j) in the symmetric gauge."""
    geometry._check(i)
    geometry._check(j)
    if i == j:
        raise DomainError("Peierls phase needs two distinct dots")
    if not np.isfinite(field_T):
        raise DomainError("field must be finite")
    (xi, yi), (xj, yj) = geometry.positions[i], geometry.positions[j]
    cross = (xi * yj - yi * xj) * C.NM**2
    return C.ELEMENTARY_CHARGE * field_T * cross / (2 * C.HBAR_SI)


def loop_flux_phase(geometry: DotGeometry, field_T: float, loop: Sequence[int]) -> float:
    """Sum of Peierls phases around a closed loop, e B A_signed / hbar."""
    loop = list(loop)
    if len(loop) < 3:
        raise DomainError("a loop needs at least 3 dots")
    if len(set(loop)) != len(loop):
        raise DomainError(f"degenerate loop {loop}: repeated dot")
    edges = zip(loop, loop[1:] + loop[:1])
    return sum(peierls_phase(geometry, field_T, a, b) for a, b in edges)


def signed_area(geometry: DotGeometry, loop: Sequence[int]) -> float:
    """Shoelace area in nm^2, positive for counter-clockwise loops."""
    pts = np.array([geometry.positions[k] for k in loop])
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def field_for_phase(phase: float, area_nm2: float) -> float:
    """Field in T that threads `phase` radians through `area_nm2`."""
    if area_nm2 == 0:
        raise DomainError("zero-area loop encloses no flux")
    return phase * C.HBAR_SI / (C.ELEMENTARY_CHARGE * area_nm2 * C.NM**2)


def peierls_links(geometry: DotGeometry, field_T: float, pairs, strength: float):
    return tuple(
        LinkCoupling(i, j, strength, peierls_phase(geometry, field_T, i, j)) for i, j in pairs
    )


def build_hamiltonian(spec: HamiltonianSpec, basis: FockBasis) -> HermitianOperator:
    if spec.geometry.n_dots != basis.n_dots:
        raise DomainError(
            f"spec has {spec.geometry.n_dots} dots but basis has {basis.n_dots}"
        )
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for link in spec.links:
        if link.strength == 0:
            continue
        hop = hopping_matrix(basis, link.i, link.j)
        term = np.exp(1j * link.phase) * hop
        h -= link.strength * (term + term.conj().T)
    occ = np.array([[1.0 if k in s else 0.0 for k in range(basis.n_dots)] for s in basis.states])
    diag = np.zeros(basis.dim)
    if spec.onsite:
        diag += occ @ np.asarray(spec.onsite, dtype=float)
    for i, j, u in spec.density_density:
        diag += u * occ[:, i] * occ[:, j]
    h += np.diag(diag)
    return HermitianOperator(basis, h)


# ---------------------------------------------------------------- config text

def spec_to_config(spec: HamiltonianSpec) -> str:
    cp = configparser.ConfigParser()
    cp["geometry"] = {
        "positions": "; ".join(f"{x!r}, {y!r}" for x, y in spec.geometry.positions)
    }
    if spec.onsite:
        cp["onsite"] = {"energies": ", ".join(repr(float(e)) for e in spec.onsite)}
    for k, l in enumerate(spec.links):
        cp[f"link.{k}"] = {
            "i": str(l.i), "j": str(l.j),
            "strength": repr(float(l.strength)), "phase": repr(float(l.phase)),
        }
    for k, (i, j, u) in enumerate(spec.density_density):
        cp[f"density.{k}"] = {"i": str(i), "j": str(j), "u": repr(float(u))}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def spec_from_config(text: str) -> HamiltonianSpec:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    try:
        raw = cp["geometry"]["positions"]
    except KeyError:
        raise DomainError("config needs a [geometry] section with 'positions'") from None
    positions = tuple(tuple(float(v) for v in p.split(",")) for p in raw.split(";") if p.strip())
    onsite = ()
    if cp.has_section("onsite"):
        onsite = tuple(float(v) for v in cp["onsite"]["energies"].split(","))
    links, dd = [], []
    for name in cp.sections():
        sec = cp[name]
        if name.startswith("link."):
            links.append(LinkCoupling(sec.getint("i"), sec.getint("j"),
                                      sec.getfloat("strength"), sec.getfloat("phase", 0.0)))
        elif name.startswith("density."):
            dd.append((sec.getint("i"), sec.getint("j"), sec.getfloat("u")))
    return HamiltonianSpec(DotGeometry(positions), tuple(links), onsite, tuple(dd))
