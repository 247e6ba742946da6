import math

import numpy as np
import pytest

from seqdi import linalg as la
from seqdi.linalg import I2, KET0, SX, SZ
from seqdi.protocol import (
    InvalidParameters,
    Preset,
    ProtocolParams,
    alice_observable,
    ancilla_ket,
    bob_observable,
    chsh,
    dilated_realization,
    hadamard_hook,
    kraus_pair,
    wooltorton,
)

THETAS = np.linspace(0, math.pi / 4, 11)


def params(**kw):
    base = dict(alpha0=0.0, alpha1=math.pi / 2, beta1=0.4, theta=0.3, delta=1.1)
    base.update(kw)
    return ProtocolParams(**base)


@pytest.mark.parametrize("alpha, expected", [(0.0, SX), (math.pi / 2, SZ), (math.pi / 4, (SX + SZ) / math.sqrt(2))])
def test_alice_observable(alpha, expected):
    a = alice_observable(params(alpha0=alpha, alpha1=alpha + 1.0), 0)
    assert la.max_abs(a - expected) < 1e-15
    assert la.is_hermitian(a) and la.is_unitary(a)
    assert abs(la.trace(a)) < 1e-15


def test_alice_pi4_entry():
    a = alice_observable(params(alpha0=math.pi / 4, alpha1=1.5), 0)
    assert abs(a[0, 0] - math.sqrt(2) / 2) < 1e-15


def test_kraus_endpoints():
    kp, km = kraus_pair(0.0)
    assert la.max_abs(kp - (I2 + SX) / 2) < 1e-15
    assert la.max_abs(km - (I2 - SX) / 2) < 1e-15
    kp, km = kraus_pair(math.pi / 4)
    assert la.max_abs(kp - I2 / math.sqrt(2)) < 1e-15
    assert la.max_abs(km - I2 / math.sqrt(2)) < 1e-15


@pytest.mark.parametrize("theta", THETAS)
def test_kraus_completeness_and_eigenbasis(theta):
    kp, km = kraus_pair(theta)
    assert la.max_abs(kp.conj().T @ kp + km.conj().T @ km - I2) < 1e-14
    assert la.is_hermitian(kp) and la.is_hermitian(km)
    assert la.max_abs(la.commutator(kp, SX)) < 1e-14
    assert la.max_abs(la.commutator(km, SX)) < 1e-14


@pytest.mark.parametrize("theta", [-0.01, math.pi / 4 + 1e-6, math.nan])
def test_kraus_out_of_range(theta):
    with pytest.raises(InvalidParameters):
        kraus_pair(theta)


def test_bob_observables():
    p = chsh(0.2)
    assert la.max_abs(bob_observable(p, "B0prime") - SX) == 0
    assert la.max_abs(bob_observable(p, "Bob2_y0") - SX) == 0
    assert la.max_abs(bob_observable(p, "B1") - SZ) < 1e-15
    w = wooltorton(math.pi / 6, 0.2)
    expected = math.cos(2 * math.pi / 3) * SX + math.sin(2 * math.pi / 3) * SZ
    assert la.max_abs(bob_observable(w, "B1") - expected) < 1e-15
    d = params(delta=0.7)
    assert la.max_abs(bob_observable(d, "Bob2_y1") - (math.cos(0.7) * SX + math.sin(0.7) * SZ)) < 1e-15
    with pytest.raises(ValueError):
        bob_observable(p, "B2")


def test_presets_expand():
    p = Preset("chsh").expand(0.1)
    assert (p.alpha0, p.alpha1, p.beta1, p.delta) == (math.pi / 4, 3 * math.pi / 4, math.pi / 2, math.pi / 2)
    w = Preset("wooltorton", 0.3).expand(0.1)
    assert (w.alpha0, w.alpha1, w.beta1, w.delta) == (math.pi / 2, -0.3, 0.3 + math.pi / 2, math.pi / 2)
    assert Preset("chsh").expand(0.1) == Preset("chsh").expand(0.1)


@pytest.mark.parametrize("omega", [0.0, -0.1, 0.6, None])
def test_wooltorton_omega_domain(omega):
    with pytest.raises(InvalidParameters):
        Preset("wooltorton", omega)


def test_bad_presets():
    with pytest.raises(InvalidParameters):
        Preset("bb84")
    with pytest.raises(InvalidParameters):
        Preset("chsh", 0.2)


def test_degenerate_alice_angles():
    with pytest.raises(InvalidParameters, match="degenerate Alice angles"):
        params(alpha0=0.3, alpha1=0.3 + math.pi)


def test_security_valid_predicate():
    assert params(theta=0.3, delta=1.0).security_valid
    assert not params(theta=0.0).security_valid
    assert not params(theta=1e-13).security_valid
    assert not params(theta=math.pi / 4).security_valid
    assert not params(delta=0.0).security_valid
    assert not params(delta=math.pi).security_valid


def test_dilation_state():
    r = dilated_realization(params(theta=0.3))
    assert abs(np.vdot(r.psi, r.psi) - 1) < 1e-14
    # theta = pi/4 puts the ancilla in |0>
    assert la.max_abs(ancilla_ket(math.pi / 4) - KET0) < 1e-15


@pytest.mark.parametrize("theta", THETAS)
def test_dilation_observables(theta):
    r = dilated_realization(params(theta=theta, delta=0.9, beta1=2.0))
    for o in [*r.observables().values()]:
        assert la.is_hermitian(o) and la.is_unitary(o)
        assert la.involution_residual(o) < 1e-13
    assert la.max_abs(la.commutator(r.B0, r.B00)) < 1e-14
    assert la.max_abs(la.commutator(r.B0, r.B01)) < 1e-14
    assert la.is_unitary(r.U)


def test_cnot_generates_dilated_observables():
    # Heisenberg picture of the CNOT: reading the ancilla in the X basis gives B0,
    # and Bob2's observable on the system becomes B0y2.
    p = params(delta=0.9)
    r = dilated_realization(p)
    u = r.U
    assert la.max_abs(u.conj().T @ la.kron(I2, SX) @ u - r.B0) < 1e-14
    assert la.max_abs(u.conj().T @ la.kron(SX, I2) @ u - r.B00) < 1e-14
    bob2 = math.cos(0.9) * SX + math.sin(0.9) * SZ
    assert la.max_abs(u.conj().T @ la.kron(bob2, I2) @ u - r.B01) < 1e-14


@pytest.mark.parametrize("theta", [0.0, 0.2, math.pi / 4])
def test_cnot_realizes_kraus(theta):
    # <+-|_anc U (|chi> |anc>) equals K+- |chi> for any Bob state chi.
    u = dilated_realization(params(theta=theta)).U
    kp, km = kraus_pair(theta)
    chi = np.array([0.6, 0.8j])
    out = (u @ la.kron(chi, ancilla_ket(theta))).reshape(2, 2)
    assert la.max_abs(out @ la.KET_PLUS.conj() - kp @ chi) < 1e-14
    assert la.max_abs(out @ la.KET_MINUS.conj() - km @ chi) < 1e-14


def test_hadamard_hook_transforms_consistently():
    r = dilated_realization(chsh(0.3))
    h = hadamard_hook(r)
    assert la.max_abs(h.A0 - r.A0) == 0
    assert abs(np.vdot(h.psi, h.psi) - 1) < 1e-14
    assert la.max_abs(h.B00 - la.kron(SZ, I2)) < 1e-14
