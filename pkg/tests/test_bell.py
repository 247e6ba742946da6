import itertools
import math

import numpy as np
import pytest

from seqdi import linalg as la
from seqdi.bell import (
    DegenerateCoefficients,
    bell_operator,
    best_chsh,
    boundary_residual,
    coefficients,
    i_omega,
    saturation_residual,
    sdag_s_residual,
    tsirelson_bound_omega,
    xa_za,
    xa_za_state_residuals,
)
from seqdi.correlations import joint_dilated, joint_povm
from seqdi.linalg import SX, SZ
from seqdi.protocol import InvalidParameters, ProtocolParams, chsh, dilated_realization, wooltorton

THETAS = [k * math.pi / 36 for k in range(1, 9)]
DELTAS = [k * math.pi / 18 for k in range(1, 9)]
INTERIOR = [(t, d) for t in (math.pi / 12, math.pi / 8, math.pi / 5) for d in (0.3, math.pi / 2, 2.2)]


def test_coefficients_delta_pi2_theta_pi8():
    c = coefficients(math.pi / 8, math.pi / 2)
    expected = (0.0, math.sqrt(2) / 2, math.sqrt(2) / 2, 0.0)
    assert np.allclose(c.as_tuple(), expected, atol=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.1, 0.4, math.pi / 4])
def test_coefficients_delta_pi2(theta):
    c = coefficients(theta, math.pi / 2)
    assert np.allclose(c.as_tuple(), (0, math.cos(2 * theta), math.sin(2 * theta), 0), atol=1e-15)


@pytest.mark.parametrize("theta, delta", list(itertools.product(THETAS, DELTAS)))
def test_coefficient_identities(theta, delta):
    c = coefficients(theta, delta)
    assert c.norm_residual() < 1e-12
    assert c.orthogonality_residual() < 1e-12


@pytest.mark.parametrize("delta", [0.0, math.pi])
def test_coefficients_degenerate(delta):
    with pytest.raises(DegenerateCoefficients):
        coefficients(0.0, delta)


def test_coefficients_pi4_delta0_not_degenerate():
    # cos(2 theta) = 0 keeps the denominator at 1; only c1 survives.
    c = coefficients(math.pi / 4, 0.0)
    assert abs(c.c1 - 1) < 1e-15 and abs(c.c2) + abs(c.c3) + abs(c.c4) < 1e-15


def test_xa_za_chsh():
    xa, za = xa_za(chsh(0.3))
    assert la.max_abs(xa - SX) < 1e-13 and la.max_abs(za - SZ) < 1e-13


def test_xa_za_wooltorton():
    xa, za = xa_za(wooltorton(math.pi / 6, 0.3))
    assert la.max_abs(xa - SX) < 1e-13 and la.max_abs(za - SZ) < 1e-13


def test_xa_za_sign_convention():
    # The inverse-matrix form has a minus sign in X_A's numerator.
    p = ProtocolParams(0.3, 1.4, 0.5, 0.2, 1.0)
    r = dilated_realization(p)
    xa, _ = xa_za(p)
    manual = (math.sin(p.alpha1) * r.A0 - math.sin(p.alpha0) * r.A1) / math.sin(p.alpha1 - p.alpha0)
    assert la.max_abs(xa - manual) < 1e-13
    plus_sign = (math.sin(p.alpha1) * r.A0 + math.sin(p.alpha0) * r.A1) / math.sin(p.alpha1 - p.alpha0)
    assert la.max_abs(plus_sign - SX) > 0.1


def test_xa_za_singular():
    p = ProtocolParams(0.0, 1.0, 0.5, 0.2, 1.0)
    object.__setattr__(p, "alpha1", math.pi)
    with pytest.raises(InvalidParameters):
        xa_za(p)


@pytest.mark.parametrize("theta, delta", INTERIOR)
def test_state_relations(theta, delta):
    for p in (chsh(theta, delta=delta), wooltorton(math.pi / 6, theta, delta=delta)):
        assert max(xa_za_state_residuals(p).values()) < 1e-13
        assert saturation_residual(p) < 1e-12
        assert sdag_s_residual(p) < 1e-12
        assert boundary_residual(p) < 1e-12


def test_bell_operator_hermitian_and_psd_on_state(chsh_pi8):
    s = bell_operator(chsh_pi8)
    assert la.is_hermitian(s)
    r = dilated_realization(chsh_pi8)
    assert abs(la.expval(r.psi, s)) < 1e-12


def test_mismatched_coefficients_negative_control(chsh_pi8):
    s = bell_operator(chsh_pi8, coeffs=coefficients(math.pi / 6, math.pi / 2))
    r = dilated_realization(chsh_pi8)
    assert np.linalg.norm(s @ r.psi) > 1e-3


def test_boundary_endpoint_theta0():
    p = chsh(0.0)
    assert np.allclose(coefficients(0.0, math.pi / 2).as_tuple(), (0, 1, 0, 0), atol=1e-16)
    assert boundary_residual(p) < 1e-12


def test_boundary_non_ideal_state(chsh_pi8):
    ket000 = np.zeros(8, dtype=complex)
    ket000[0] = 1
    assert boundary_residual(chsh_pi8, psi=ket000) > 0.5


def test_i_omega_pi6():
    t = joint_dilated(wooltorton(math.pi / 6, 0.3))
    assert abs(i_omega(t, math.pi / 6) - 3 * math.sqrt(3)) < 1e-9
    assert abs(tsirelson_bound_omega(math.pi / 6) - 3 * math.sqrt(3)) < 1e-9


@pytest.mark.parametrize("omega", [math.pi / 12, 0.2, 0.45])
def test_i_omega_saturates_bound(omega):
    t = joint_povm(wooltorton(omega, 0.2))
    assert abs(i_omega(t, omega) - tsirelson_bound_omega(omega)) < 1e-9


def test_i_omega_domain():
    t = joint_dilated(wooltorton(math.pi / 6, 0.3))
    with pytest.raises(InvalidParameters):
        i_omega(t, 0.0)
    with pytest.raises(InvalidParameters):
        tsirelson_bound_omega(1.0)


def test_best_chsh_brute_force():
    t = joint_dilated(chsh(0.3))
    assert abs(best_chsh(t) - 2 * math.sqrt(2)) < 1e-9


def test_best_chsh_classical_strategy_bound():
    # Deterministic Alice angles differing by pi/2 against a single Bob axis stay at 2.
    p = ProtocolParams(0.0, math.pi / 2, 0.0, 0.0, math.pi / 2)
    assert best_chsh(joint_dilated(p)) <= 2 + 1e-12
