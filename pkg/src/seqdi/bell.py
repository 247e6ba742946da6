"""Bell operator of the sequential scenario and its saturation checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .correlations import CorrelationTable
from .linalg import kron
from .protocol import (
    DilatedRealization,
    InvalidParameters,
    ProtocolParams,
    check_omega,
    dilated_realization,
)

COEFF_TOL = 1e-12


class DegenerateCoefficients(ValueError):
    """The coefficient denominator vanishes (theta = 0 with delta = 0 mod pi)."""


@dataclass(frozen=True)
class Coefficients:
    c1: float
    c2: float
    c3: float
    c4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def norm_residual(self) -> float:
        return abs(sum(c * c for c in self.as_tuple()) - 1.0)

    def orthogonality_residual(self) -> float:
        return abs(self.c1 * self.c2 + self.c3 * self.c4)

    @property
    def determinant(self) -> float:
        """``c2 c3 - c1 c4``; nonzero iff Bob's two observables can be recovered."""
        return self.c2 * self.c3 - self.c1 * self.c4


def coefficients(theta: float, delta: float) -> Coefficients:
    cd, sd = math.cos(delta), math.sin(delta)
    c2t, s2t = math.cos(2 * theta), math.sin(2 * theta)
    denom = 1.0 - cd**2 * c2t**2
    if denom <= COEFF_TOL:
        raise DegenerateCoefficients(
            f"coefficient denominator {denom:.3g} vanishes at theta={theta!r}, delta={delta!r}"
        )
    return Coefficients(
        c1=cd * s2t**2 / denom,
        c2=c2t * sd**2 / denom,
        c3=sd * s2t / denom,
        c4=-sd * cd * c2t * s2t / denom,
    )


def xa_za(p: ProtocolParams, A0: np.ndarray | None = None, A1: np.ndarray | None = None):
    """Recover Alice's ``X`` and ``Z`` from her two observables.

    Solves ``[[cos a0, sin a0], [cos a1, sin a1]] @ (X, Z) = (A0, A1)``.
    On the ideal observables this returns exactly the Pauli ``X`` and ``Z``.
    """
    m = np.array([[math.cos(p.alpha0), math.sin(p.alpha0)],
                  [math.cos(p.alpha1), math.sin(p.alpha1)]])
    if abs(np.linalg.det(m)) <= 1e-9:
        raise InvalidParameters("degenerate Alice angles: cannot recover X_A, Z_A")
    if A0 is None or A1 is None:
        r = dilated_realization(p)
        A0, A1 = r.A0, r.A1
    inv = np.linalg.inv(m)
    return inv[0, 0] * A0 + inv[0, 1] * A1, inv[1, 0] * A0 + inv[1, 1] * A1


def _bob_combinations(r: DilatedRealization, c: Coefficients):
    bx = c.c1 * r.B01 + c.c2 * r.B0
    bz = c.c3 * r.B01 + c.c4 * r.B0
    return bx, bz


def bell_operator(
    p: ProtocolParams,
    coeffs: Coefficients | None = None,
    realization: DilatedRealization | None = None,
) -> np.ndarray:
    """8x8 Bell operator ``(1 - X_A Bx - Z_A Bz) / 2`` on the dilated realization.

    Its expectation is nonnegative under the self-test relations and vanishes
    exactly on the ideal protocol. ``coeffs`` and ``realization`` may be
    overridden to build mismatched operators for negative controls.
    """
    r = realization if realization is not None else dilated_realization(p)
    c = coeffs if coeffs is not None else coefficients(p.theta, p.delta)
    xa, za = xa_za(p, r.A0, r.A1)
    bx, bz = _bob_combinations(r, c)
    return 0.5 * (np.eye(8) - kron(xa, bx) - kron(za, bz))


def saturation_residual(p: ProtocolParams, realization: DilatedRealization | None = None) -> float:
    """``||S |psi>||``; zero iff the Tsirelson bound is saturated."""
    r = realization if realization is not None else dilated_realization(p)
    return float(np.linalg.norm(bell_operator(p, realization=r) @ r.psi))


def sdag_s_residual(p: ProtocolParams) -> float:
    """``|<S^dag S> - <S>|`` on the ideal state."""
    r = dilated_realization(p)
    s = bell_operator(p, realization=r)
    sdag_s = r.psi.conj() @ s.conj().T @ s @ r.psi
    s_val = r.psi.conj() @ s @ r.psi
    return float(abs(sdag_s - s_val))


def boundary_residual(p: ProtocolParams, psi: np.ndarray | None = None) -> float:
    """Norm of ``|psi> - X_A Bx |psi> - Z_A Bz |psi>``.

    ``psi`` defaults to the ideal state; passing another 8-dim ket measures
    how far it is from satisfying the maximal-violation condition.
    """
    r = dilated_realization(p)
    psi = r.psi if psi is None else np.asarray(psi, dtype=complex)
    c = coefficients(p.theta, p.delta)
    xa, za = xa_za(p, r.A0, r.A1)
    bx, bz = _bob_combinations(r, c)
    out = psi - kron(xa, bx) @ psi - kron(za, bz) @ psi
    return float(np.linalg.norm(out))


def xa_za_state_residuals(p: ProtocolParams) -> dict[str, float]:
    """Unitarity and anticommutation of ``X_A``, ``Z_A`` on the ideal state."""
    r = dilated_realization(p)
    xa, za = xa_za(p, r.A0, r.A1)
    eye4 = np.eye(4)
    xa8, za8 = kron(xa, eye4), kron(za, eye4)
    psi = r.psi
    return {
        "xa_unitary": float(np.linalg.norm(xa8.conj().T @ xa8 @ psi - psi)),
        "za_unitary": float(np.linalg.norm(za8.conj().T @ za8 @ psi - psi)),
        "anticommutator": float(np.linalg.norm((xa8 @ za8 + za8 @ xa8) @ psi)),
    }


def self_testing_correlators(table: CorrelationTable) -> dict[tuple[int, int], float]:
    """``<A_x B_y>`` from the self-testing branches.

    ``y=0`` uses the Alice-Bob2 marginal at inputs (0, 0); ``y=1`` uses
    the Alice-Bob1 marginal at input 1.
    """
    return {
        (x, 0): table.alice_bob2_correlator(x, 0) for x in (0, 1)
    } | {
        (x, 1): table.alice_bob1_correlator(x, 1) for x in (0, 1)
    }


def i_omega(table: CorrelationTable, omega: float) -> float:
    check_omega(omega)
    e = self_testing_correlators(table)
    return (
        e[0, 0]
        + (e[0, 1] + e[1, 0]) / math.sin(omega)
        - e[1, 1] / math.cos(2 * omega)
    )


def tsirelson_bound_omega(omega: float) -> float:
    check_omega(omega)
    return 2 * math.cos(omega) ** 3 / (math.cos(2 * omega) * math.sin(omega))


def best_chsh(table: CorrelationTable) -> float:
    """Largest CHSH value over the eight relabelings of the inputs' signs."""
    e = self_testing_correlators(table)
    best = -math.inf
    for s1, s2, s3 in itertools.product((1, -1), repeat=3):
        val = abs(s1 * e[0, 0] + s2 * e[0, 1] + s3 * e[1, 0] - s1 * s2 * s3 * e[1, 1])
        best = max(best, val)
    return best

