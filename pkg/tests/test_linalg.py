import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqdi import linalg as la
from seqdi.linalg import I2, PHI_PLUS, SX, SZ

from conftest import random_matrix


def test_kron_identity():
    assert la.max_abs(la.kron(I2, I2) - np.eye(4)) == 0


def test_kron_bit_flip():
    ket00 = la.kron(la.KET0, la.KET0)
    ket11 = la.kron(la.KET1, la.KET1)
    assert la.max_abs(la.kron(SX, SX) @ ket00 - ket11) == 0


def test_kron_sign_pattern():
    m = la.kron(SZ, I2)
    assert m[0, 0] == 1 and m[3, 3] == -1


def test_kron_block_order_left_slowest():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    m = la.kron(a, I2)
    assert m[0, 2] == 2 and m[2, 0] == 3 and m[1, 3] == 2


def test_expval_phi_plus():
    assert la.expval(PHI_PLUS, la.kron(SX, SX)) == pytest.approx(1)
    assert abs(la.expval(PHI_PLUS, la.kron(SX, SZ))) < 1e-15


def test_expval_rotated_alice():
    a0 = np.cos(np.pi / 4) * SX + np.sin(np.pi / 4) * SZ
    v = la.expval(PHI_PLUS, la.kron(a0, SX))
    assert abs(v - np.sqrt(2) / 2) < 1e-15
    assert abs(v.imag) < 1e-12


def test_expval_density_matches_ket(rng):
    psi = random_matrix(rng, 4, 1)[:, 0]
    psi /= np.linalg.norm(psi)
    h = random_matrix(rng, 4)
    h = h + h.conj().T
    assert abs(la.expval(psi, h) - la.expval(la.dm(psi), h)) < 1e-12
    assert abs(la.expval(psi.reshape(4, 1), h) - la.expval(psi, h)) < 1e-12


def test_expval_dimension_mismatch():
    with pytest.raises(ValueError):
        la.expval(PHI_PLUS, np.eye(8))
    with pytest.raises(ValueError):
        la.expval(np.eye(2) / 2, np.eye(4))


def test_plumbing():
    m = random_matrix(np.random.default_rng(1), 3)
    assert la.max_abs(la.adjoint(la.adjoint(m)) - m) < 1e-15
    assert la.trace(np.eye(8)) == 8
    assert la.max_abs(la.mul(SX, SX) - I2) == 0
    assert la.max_abs(la.sub(la.add(SX, SZ), SZ) - SX) == 0
    assert la.max_abs(la.scale(2, SX) - 2 * SX) == 0


def test_shape_errors():
    with pytest.raises(ValueError):
        la.mul(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        la.trace(np.ones((2, 3)))
    with pytest.raises(ValueError):
        la.add(np.eye(2), np.eye(4))
    with pytest.raises(ValueError):
        la.cmat([1, 2, 3], rows=2, cols=2)


def test_cmat_row_major():
    m = la.cmat([1, 2, 3, 4], rows=2)
    assert m[0, 1] == 2 and m[1, 0] == 3


def test_check_density():
    la.check_density(la.dm(PHI_PLUS))
    with pytest.raises(ValueError):
        la.check_density(np.eye(4))
    with pytest.raises(ValueError):
        la.check_density(np.diag([1.5, -0.5]))


def test_projector_rejects_bad_outcome():
    with pytest.raises(ValueError):
        la.projector(SX, 0)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.sampled_from([1, 2, 4])


@settings(max_examples=40, deadline=None)
@given(seeds, dims, dims)
def test_kron_bilinear(seed, n, m):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, n), random_matrix(rng, n)
    c = random_matrix(rng, m)
    assert la.max_abs(la.kron(a + b, c) - la.kron(a, c) - la.kron(b, c)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, dims, dims)
def test_mixed_product(seed, n, m):
    rng = np.random.default_rng(seed)
    a, c = random_matrix(rng, n), random_matrix(rng, n)
    b, d = random_matrix(rng, m), random_matrix(rng, m)
    lhs = la.mul(la.kron(a, b), la.kron(c, d))
    rhs = la.kron(la.mul(a, c), la.mul(b, d))
    assert la.max_abs(lhs - rhs) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, dims, dims)
def test_trace_of_kron(seed, n, m):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, n) / 2, random_matrix(rng, m) / 2
    assert abs(la.trace(la.kron(a, b)) - la.trace(a) * la.trace(b)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_mul_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_matrix(rng, 8) / 4 for _ in range(3))
    assert la.max_abs(la.mul(la.mul(a, b), c) - la.mul(a, la.mul(b, c))) < 1e-13
