"""Small dense complex-matrix helpers for 2-, 4- and 8-dimensional spaces.

Matrices are plain ``numpy`` complex arrays. Kets are 1-D arrays; density
matrices and operators are square 2-D arrays. Tensor order is always
Alice (x) Bob (x) Bob-ancilla, left factor varying slowest.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
DENSITY_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = (KET0 + KET1) / np.sqrt(2)
KET_MINUS = (KET0 - KET1) / np.sqrt(2)
PHI_PLUS = (np.kron(KET0, KET0) + np.kron(KET1, KET1)) / np.sqrt(2)


def cmat(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Build a complex matrix from nested rows or from a flat row-major list."""
    arr = np.asarray(entries, dtype=complex)
    if rows is not None:
        cols = cols if cols is not None else arr.size // rows
        if arr.size != rows * cols:
            raise ValueError(f"{arr.size} entries cannot fill a {rows}x{cols} matrix")
        arr = arr.reshape(rows, cols)
    return arr


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more factors, left factor slowest."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, factors)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def mul(*factors: np.ndarray) -> np.ndarray:
    """Matrix product of the factors, checking shapes."""
    out = np.asarray(factors[0])
    for f in factors[1:]:
        f = np.asarray(f)
        if out.shape[-1] != f.shape[0]:
            raise ValueError(f"shape mismatch in product: {out.shape} @ {f.shape}")
        out = out @ f
    return out


def trace(a: np.ndarray) -> complex:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace of non-square matrix with shape {a.shape}")
    return complex(np.trace(a))


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return np.asarray(a) + np.asarray(b)


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return np.asarray(a) - np.asarray(b)


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return c * np.asarray(a)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) - mul(b, a)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) + mul(b, a)


def max_abs(a: np.ndarray) -> float:
    """Largest entrywise magnitude; 0.0 for an empty array."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_residual(a: np.ndarray) -> float:
    return max_abs(np.asarray(a) - adjoint(a))


def unitarity_residual(a: np.ndarray) -> float:
    a = np.asarray(a)
    return max_abs(adjoint(a) @ a - np.eye(a.shape[0]))


def involution_residual(a: np.ndarray) -> float:
    """Distance of ``a @ a`` from the identity (dichotomic observables)."""
    a = np.asarray(a)
    return max_abs(a @ a - np.eye(a.shape[0]))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_residual(a) < tol


def is_unitary(a: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_residual(a) < tol


def projector(observable: np.ndarray, outcome: int) -> np.ndarray:
    """Eigenprojector ``(1 + outcome * O) / 2`` of a dichotomic observable."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    observable = np.asarray(observable)
    return (np.eye(observable.shape[0]) + outcome * observable) / 2


def dm(ket: np.ndarray) -> np.ndarray:
    """Density matrix ``|ket><ket|``."""
    ket = np.asarray(ket, dtype=complex).ravel()
    return np.outer(ket, ket.conj())


def check_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> None:
    """Raise ``ValueError`` unless ``rho`` is a unit-trace positive Hermitian matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if hermiticity_residual(rho) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh((rho + adjoint(rho)) / 2).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")


def expval(state: np.ndarray, op: np.ndarray) -> complex:
    """Born-rule expectation of ``op``.

    ``state`` is either a ket (1-D, or a single column) giving <psi|op|psi>,
    or a density matrix giving Tr[state @ op].
    """
    state = np.asarray(state)
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    if state.ndim == 2 and state.shape[1] == 1:
        state = state[:, 0]
    if state.ndim == 1:
        if state.shape[0] != op.shape[0]:
            raise ValueError(f"dimension mismatch: ket {state.shape[0]} vs operator {op.shape[0]}")
        return complex(state.conj() @ op @ state)
    if state.shape != op.shape:
        raise ValueError(f"dimension mismatch: state {state.shape} vs operator {op.shape}")
    return complex(np.trace(state @ op))


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if np.shape(a) != np.shape(b):
        raise ValueError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")
