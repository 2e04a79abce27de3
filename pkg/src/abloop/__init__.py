"""Simulator for conditional Aharonov-Bohm phase gates in quantum-dot arrays."""
from .errors import DomainError, GateNotDiagonalError
from .fock import (
    FockBasis,
    HermitianOperator,
    StateVector,
    build_basis,
    hopping_operator,
    number_operator,
)
from .hamiltonian import (
    DotGeometry,
    HamiltonianSpec,
    LinkCoupling,
    build_hamiltonian,
    loop_flux_phase,
    peierls_phase,
)
from .dynamics import (
    PulseSegment,
    PulseSequence,
    calibrate_transfer_time,
    evolve,
    run_sequence,
    single_qubit_rotation,
)
from .protocols import (
    DeviceLayout,
    GateResult,
    common_control_protocol,
    compare_to_target,
    default_layout,
    entangling_phase,
    sequential_loop_protocol,
)
from .blockade import BlockadePair, effective_tunneling, exact_spectrum, max_leakage
from .trap import (
    DeviceParams,
    MaterialParams,
    TrapParams,
    coulomb_coupling,
    gate_time,
    omega_from_barrier,
    sweep,
    tunnel_coupling,
)
from .timing import (
    TimingSolution,
    gate_error_from_mismatch,
    integer_pair_search,
    joint_time_optimize,
)

__version__ = "0.1.0"
