"""Protocol parameters, presets and the concrete operators of one protocol.

A protocol is fixed by five angles. Alice measures
``cos(alpha_x) X + sin(alpha_x) Z``; Bob1 either weakly measures ``X``
through a Kraus pair of strength ``theta`` (input 0) or projectively
measures ``cos(beta1) X + sin(beta1) Z`` (input 1); after Bob1's weak
measurement Bob2 measures ``X`` (input 0) or ``cos(delta) X + sin(delta) Z``
(input 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .linalg import (
    HADAMARD,
    I2,
    KET_MINUS,
    KET_PLUS,
    PHI_PLUS,
    SX,
    SZ,
    dm,
    kron,
)

THETA_MAX = math.pi / 4
ENDPOINT_EPS = 1e-12
DEGENERACY_TOL = 1e-9
OMEGA_MAX = math.pi / 6
# Lets decimal-rounded inputs such as 0.5236 stand for pi/6.
OMEGA_SLACK = 1e-4

BobRole = Literal["B0prime", "B1", "Bob2_y0", "Bob2_y1"]


class InvalidParameters(ValueError):
    """Protocol angles outside the admissible domain."""


def xz_observable(angle: float) -> np.ndarray:
    """``cos(angle) X + sin(angle) Z``."""
    return math.cos(angle) * SX + math.sin(angle) * SZ


@dataclass(frozen=True)
class ProtocolParams:
    alpha0: float
    alpha1: float
    beta1: float
    theta: float
    delta: float

    def __post_init__(self):
        for name in ("alpha0", "alpha1", "beta1", "theta", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
        check_theta(self.theta)
        if abs(math.sin(self.alpha1 - self.alpha0)) <= DEGENERACY_TOL:
            raise InvalidParameters(
                f"degenerate Alice angles: sin(alpha1 - alpha0) = "
                f"{math.sin(self.alpha1 - self.alpha0):.3g}"
            )

    @property
    def security_valid(self) -> bool:
        """Whether the extremality certificate covers these parameters.

        The Kraus strength must lie strictly inside ``(0, pi/4)`` and Bob2's
        second observable must differ from ``X``.
        """
        return (
            ENDPOINT_EPS < self.theta < THETA_MAX - ENDPOINT_EPS
            and abs(math.sin(self.delta)) > DEGENERACY_TOL
        )

    def alpha(self, x: int) -> float:
        if x == 0:
            return self.alpha0
        if x == 1:
            return self.alpha1
        raise ValueError(f"Alice input must be 0 or 1, got {x!r}")

    def with_(self, **changes) -> "ProtocolParams":
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {
            "alpha0": self.alpha0,
            "alpha1": self.alpha1,
            "beta1": self.beta1,
            "theta": self.theta,
            "delta": self.delta,
        }


def check_omega(omega: float | None) -> None:
    if omega is None or not (0.0 < omega <= OMEGA_MAX + OMEGA_SLACK):
        raise InvalidParameters(f"omega must lie in (0, pi/6], got {omega!r}")


def check_theta(theta: float) -> None:
    if not (0.0 <= theta <= THETA_MAX + ENDPOINT_EPS):
        raise InvalidParameters(f"theta must lie in [0, pi/4], got {theta!r}")


@dataclass(frozen=True)
class Preset:
    """Named angle family; ``expand`` fills in the strength parameter."""

    name: Literal["chsh", "wooltorton"]
    omega: float | None = field(default=None)

    def __post_init__(self):
        if self.name == "chsh":
            if self.omega is not None:
                raise InvalidParameters("the chsh preset takes no omega")
        elif self.name == "wooltorton":
            check_omega(self.omega)
        else:
            raise InvalidParameters(f"unknown preset {self.name!r}")

    def angles(self) -> dict[str, float]:
        if self.name == "chsh":
            return {
                "alpha0": math.pi / 4,
                "alpha1": 3 * math.pi / 4,
                "beta1": math.pi / 2,
                "delta": math.pi / 2,
            }
        return {
            "alpha0": math.pi / 2,
            "alpha1": -self.omega,
            "beta1": self.omega + math.pi / 2,
            "delta": math.pi / 2,
        }

    def expand(self, theta: float, **overrides: float) -> ProtocolParams:
        angles = self.angles()
        angles.update(overrides)
        return ProtocolParams(theta=theta, **angles)


def chsh(theta: float, **overrides: float) -> ProtocolParams:
    return Preset("chsh").expand(theta, **overrides)


def wooltorton(omega: float, theta: float, **overrides: float) -> ProtocolParams:
    return Preset("wooltorton", omega).expand(theta, **overrides)


def alice_observable(p: ProtocolParams, x: int) -> np.ndarray:
    return xz_observable(p.alpha(x))


def kraus_pair(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Kraus operators ``(K+, K-)`` of Bob1's weak ``X`` measurement."""
    check_theta(theta)
    p_plus = (I2 + SX) / 2
    p_minus = (I2 - SX) / 2
    c, s = math.cos(theta), math.sin(theta)
    return c * p_plus + s * p_minus, s * p_plus + c * p_minus


def bob_observable(p: ProtocolParams, which: BobRole) -> np.ndarray:
    if which in ("B0prime", "Bob2_y0"):
        return SX.copy()
    if which == "B1":
        return xz_observable(p.beta1)
    if which == "Bob2_y1":
        return xz_observable(p.delta)
    raise ValueError(f"unknown Bob observable {which!r}")


def bob2_observable(p: ProtocolParams, y2: int) -> np.ndarray:
    if y2 not in (0, 1):
        raise ValueError(f"Bob2 input must be 0 or 1, got {y2!r}")
    return bob_observable(p, "Bob2_y0" if y2 == 0 else "Bob2_y1")


def ancilla_ket(theta: float) -> np.ndarray:
    """Bob ancilla ``cos(theta)|+> + sin(theta)|->``."""
    return math.cos(theta) * KET_PLUS + math.sin(theta) * KET_MINUS


def cnot_dilation_unitary() -> np.ndarray:
    """``|+><+| (x) 1 + |-><-| (x) Z`` on Bob (x) ancilla."""
    return kron(dm(KET_PLUS), I2) + kron(dm(KET_MINUS), SZ)


@dataclass(frozen=True)
class DilatedRealization:
    """Pure three-qubit state with projective observables.

    ``A0``/``A1`` act on Alice's qubit; the ``B*`` observables act on Bob's
    qubit and his ancilla. ``B0`` is Bob1's input-0 observable, ``B1`` his
    input-1 observable, ``B00``/``B01`` Bob2's observables after input 0.
    """

    psi: np.ndarray
    A0: np.ndarray
    A1: np.ndarray
    B0: np.ndarray
    B1: np.ndarray
    B00: np.ndarray
    B01: np.ndarray
    U: np.ndarray

    def alice(self, x: int) -> np.ndarray:
        return (self.A0, self.A1)[x]

    def bob2(self, y2: int) -> np.ndarray:
        return (self.B00, self.B01)[y2]

    def bob_observables(self) -> dict[str, np.ndarray]:
        return {"B0": self.B0, "B1": self.B1, "B00": self.B00, "B01": self.B01}

    def observables(self) -> dict[str, np.ndarray]:
        return {"A0": self.A0, "A1": self.A1, **self.bob_observables()}

    def with_bob_unitary(self, v: np.ndarray) -> "DilatedRealization":
        """Apply a local unitary on Bob's four-dimensional space.

        The state is rotated by ``1 (x) v`` and every Bob observable is
        conjugated by ``v``, so all correlations are unchanged.
        """
        def conj(o):
            return v @ o @ v.conj().T

        return replace(
            self,
            psi=kron(I2, v) @ self.psi,
            B0=conj(self.B0),
            B1=conj(self.B1),
            B00=conj(self.B00),
            B01=conj(self.B01),
            U=conj(self.U),
        )


def hadamard_hook(r: DilatedRealization) -> DilatedRealization:
    """Hadamard on Bob's qubit, applied to his observables and his share of the state."""
    return r.with_bob_unitary(kron(HADAMARD, I2))


def dilated_realization(p: ProtocolParams) -> DilatedRealization:
    psi = kron(PHI_PLUS, ancilla_ket(p.theta))
    return DilatedRealization(
        psi=psi / np.linalg.norm(psi),
        A0=alice_observable(p, 0),
        A1=alice_observable(p, 1),
        B0=kron(SX, SX),
        B1=kron(xz_observable(p.beta1), I2),
        B00=kron(SX, I2),
        B01=math.cos(p.delta) * kron(SX, I2) + math.sin(p.delta) * kron(SZ, SZ),
        U=cnot_dilation_unitary(),
    )
