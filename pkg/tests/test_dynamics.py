import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abloop.constants import HBAR
from abloop.dynamics import (
    PulseSegment,
    PulseSequence,
    calibrate_transfer_time,
    evolve,
    propagator,
    run_sequence,
    single_qubit_rotation,
    transfer_probability,
)
from abloop.errors import DomainError
from abloop.fock import HermitianOperator, StateVector, build_basis

B2 = build_basis(2, 1)


def two_site(J):
    return HermitianOperator(B2, np.array([[0, -J], [-J, 0]], dtype=complex))


def random_hermitian(rng, basis, scale=1.0):
    a = rng.normal(size=(basis.dim, basis.dim)) + 1j * rng.normal(size=(basis.dim, basis.dim))
    return HermitianOperator(basis, scale * (a + a.conj().T) / 2)


def random_state(rng, basis):
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return StateVector(basis, v / np.linalg.norm(v))


def test_zero_time_is_identity():
    psi = B2.basis_state((0,))
    np.testing.assert_allclose(evolve(two_site(0.3), psi, 0.0).amplitudes, psi.amplitudes, atol=1e-15)


@pytest.mark.parametrize("J", [0.01, 0.166, 0.5, 2.0])
@pytest.mark.parametrize("t", [0.0, 0.3, 1.7, 10.0, 123.4])
def test_rabi_law(J, t):
    psi = evolve(two_site(J), B2.basis_state((0,)), t)
    assert psi.probability((1,)) == pytest.approx(math.sin(J * t / HBAR) ** 2, abs=1e-10)


def test_semigroup():
    rng = np.random.default_rng(1)
    b = build_basis(5, 2)
    h, psi = random_hermitian(rng, b), random_state(rng, b)
    a = evolve(h, psi, 3.7)
    c = evolve(h, evolve(h, psi, 1.2), 2.5)
    np.testing.assert_allclose(a.amplitudes, c.amplitudes, atol=1e-10)


def test_unitarity_and_energy_conservation():
    rng = np.random.default_rng(2)
    b = build_basis(6, 2)
    for _ in range(20):
        h = random_hermitian(rng, b)
        t = rng.uniform(0, 50)
        u = propagator(h, t)
        assert np.abs(u.conj().T @ u - np.eye(b.dim)).max() < 1e-10
        psi = random_state(rng, b)
        e0 = h.expectation(psi)
        assert h.expectation(evolve(h, psi, t)) == pytest.approx(e0, abs=1e-10)


def test_norm_through_long_sequence():
    rng = np.random.default_rng(3)
    b = build_basis(6, 3)
    segs = tuple(PulseSegment(random_hermitian(rng, b), rng.uniform(0, 5)) for _ in range(100))
    psi = run_sequence(PulseSequence(segs), random_state(rng, b))
    assert abs(psi.norm() - 1) < 1e-9


def test_sequence_composition():
    h = two_site(0.2)
    psi = B2.basis_state((0,))
    one = run_sequence(PulseSequence((PulseSegment(h, 4.0),)), psi)
    two = run_sequence(PulseSequence((PulseSegment(h, 2.0), PulseSegment(h, 2.0))), psi)
    zero = run_sequence(PulseSequence((PulseSegment(h, 0.0), PulseSegment(two_site(1.0), 0.0))), psi)
    np.testing.assert_allclose(one.amplitudes, two.amplitudes, atol=1e-12)
    np.testing.assert_array_equal(zero.amplitudes, psi.amplitudes)


def test_sequence_errors():
    with pytest.raises(DomainError):
        run_sequence(PulseSequence(()), B2.basis_state((0,)))
    b3 = build_basis(3, 1)
    with pytest.raises(DomainError):
        PulseSequence((PulseSegment(two_site(1.0), 1.0),
                       PulseSegment(HermitianOperator(b3, np.zeros((3, 3))), 1.0)))
    with pytest.raises(DomainError):
        evolve(two_site(1.0), b3.basis_state((0,)), 1.0)
    with pytest.raises(DomainError):
        PulseSegment(two_site(1.0), -1.0)


def test_calibrated_transfer_time():
    J = HBAR * math.pi / 2
    tt = calibrate_transfer_time(J)
    assert tt.calibrated == pytest.approx(1.0, rel=1e-14)
    assert tt.printed_formula == pytest.approx(2.0, rel=1e-14)
    assert transfer_probability(J, tt.calibrated) == pytest.approx(1.0, abs=1e-12)
    psi = evolve(two_site(J), B2.basis_state((0,)), tt.calibrated)
    assert psi.probability((1,)) == pytest.approx(1.0, abs=1e-12)


def test_gaas_transfer_time_example():
    tt = calibrate_transfer_time(0.166)
    assert tt.calibrated == pytest.approx(6.23, abs=5e-3)
    assert 4 * tt.calibrated == pytest.approx(24.9, abs=0.05)
    assert 4 * tt.calibrated < 1000


@pytest.mark.parametrize("J", [0.0, -1.0])
def test_calibrate_rejects_nonpositive(J):
    with pytest.raises(DomainError):
        calibrate_transfer_time(J)


def test_single_qubit_rotation():
    J = 0.4
    np.testing.assert_allclose(single_qubit_rotation(J, 0.0), np.eye(2), atol=1e-15)
    swap = single_qubit_rotation(J, math.pi * HBAR / (2 * J))
    np.testing.assert_allclose(np.abs(swap), [[0, 1], [1, 0]], atol=1e-12)
    half = single_qubit_rotation(J, math.pi * HBAR / (4 * J))
    np.testing.assert_allclose(np.abs(half[:, 0]) ** 2, [0.5, 0.5], atol=1e-12)


@given(st.floats(0.01, 5), st.floats(0, 1000))
@settings(max_examples=50, deadline=None)
def test_single_qubit_rotation_unitary(J, t):
    u = single_qubit_rotation(J, t)
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12
