"""Ledger of the twenty expectation values that fix every correlation.

Two independent routes fill the ledger: closed forms that use only the
maximal-violation condition, the Bob-side commutation relations and the
self-tested values (``ledger_closed_form``), and direct Born-rule
evaluation on the dilated realization (``ledger_born``). Agreement of the
two at an interior point is the uniqueness statement: nothing other than the
ideal correlations saturates the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .bell import COEFF_TOL, Coefficients, coefficients, xa_za
from .correlations import OUTCOMES, CorrelationTable, outcome_index
from .linalg import I2
from .protocol import DilatedRealization, ProtocolParams, dilated_realization

UNIQUENESS_TOL = 1e-10
IMAG_TOL = 1e-12

# Alice factor, then Bob factors (multiplied left to right).
LEDGER_LABELS: tuple[tuple[str, str | None, tuple[str, ...]], ...] = (
    ("Z_A", "Z", ()),
    ("X_A", "X", ()),
    ("B1", None, ("B1",)),
    ("B00", None, ("B00",)),
    ("Z_A B1", "Z", ("B1",)),
    ("X_A B1", "X", ("B1",)),
    ("Z_A B00", "Z", ("B00",)),
    ("X_A B00", "X", ("B00",)),
    ("B0", None, ("B0",)),
    ("B01", None, ("B01",)),
    ("B0 B00", None, ("B0", "B00")),
    ("B0 B01", None, ("B0", "B01")),
    ("Z_A B0", "Z", ("B0",)),
    ("X_A B0", "X", ("B0",)),
    ("Z_A B01", "Z", ("B01",)),
    ("X_A B01", "X", ("B01",)),
    ("Z_A B0 B00", "Z", ("B0", "B00")),
    ("Z_A B0 B01", "Z", ("B0", "B01")),
    ("X_A B0 B00", "X", ("B0", "B00")),
    ("X_A B0 B01", "X", ("B0", "B01")),
)
LABELS = tuple(label for label, _, _ in LEDGER_LABELS)


class OutsideSecureDomain(ValueError):
    """The closed forms divide by a quantity that vanishes at these parameters."""


@dataclass(frozen=True)
class SecurityLedger:
    values: Mapping[str, float]

    def __post_init__(self):
        missing = set(LABELS) - set(self.values)
        extra = set(self.values) - set(LABELS)
        if missing or extra:
            raise ValueError(f"ledger labels mismatch: missing={sorted(missing)}, extra={sorted(extra)}")
        object.__setattr__(self, "values", MappingProxyType({k: float(self.values[k]) for k in LABELS}))

    def __getitem__(self, label: str) -> float:
        return self.values[label]

    def max_gap(self, other: "SecurityLedger") -> float:
        return max(abs(self[k] - other[k]) for k in LABELS)

    def alice(self, p: ProtocolParams, x: int, bob: str = "") -> float:
        """``<A_x O>`` for a Bob label ``O`` (empty for Alice alone), via A_x = cos X_A + sin Z_A."""
        suffix = f" {bob}" if bob else ""
        alpha = p.alpha(x)
        return math.cos(alpha) * self[f"X_A{suffix}"] + math.sin(alpha) * self[f"Z_A{suffix}"]

    def to_table(self, p: ProtocolParams) -> CorrelationTable:
        """Rebuild every probability from the ledger by expanding the projector products."""
        long_b = np.empty((2, 2, 2, 2, 2))
        short_b = np.empty((2, 2, 2))
        for x in (0, 1):
            for y2, b2_label in ((0, "B00"), (1, "B01")):
                pair = f"B0 {b2_label}"
                for a in OUTCOMES:
                    for b1 in OUTCOMES:
                        for b2 in OUTCOMES:
                            bob_part = 1 + b1 * self["B0"] + b2 * self[b2_label] + b1 * b2 * self[pair]
                            alice_part = (
                                self.alice(p, x)
                                + b1 * self.alice(p, x, "B0")
                                + b2 * self.alice(p, x, b2_label)
                                + b1 * b2 * self.alice(p, x, pair)
                            )
                            idx = (outcome_index(a), outcome_index(b1), outcome_index(b2), x, y2)
                            long_b[idx] = (bob_part + a * alice_part) / 8
            for a in OUTCOMES:
                for b1 in OUTCOMES:
                    val = 1 + b1 * self["B1"] + a * (self.alice(p, x) + b1 * self.alice(p, x, "B1"))
                    short_b[outcome_index(a), outcome_index(b1), x] = val / 4
        return CorrelationTable(long_b, short_b)


def check_secure_domain(p: ProtocolParams) -> Coefficients:
    if not p.security_valid:
        raise OutsideSecureDomain(
            f"theta={p.theta!r}, delta={p.delta!r} outside the certified domain "
            "(theta strictly inside (0, pi/4), sin(delta) != 0)"
        )
    c = coefficients(p.theta, p.delta)
    if abs(c.c3) <= COEFF_TOL:
        raise OutsideSecureDomain(f"c3 = {c.c3:.3g} vanishes")
    if abs(c.determinant) <= COEFF_TOL:
        raise OutsideSecureDomain(f"c2 c3 - c1 c4 = {c.determinant:.3g} vanishes")
    return c


def ledger_closed_form(p: ProtocolParams) -> SecurityLedger:
    """Ledger derived from the maximal-violation condition, with Eve's operator set to 1."""
    c = check_secure_domain(p)
    b0_b01 = -c.c4 / c.c3
    values = {
        "Z_A": 0.0,
        "X_A": 0.0,
        "B1": 0.0,
        "B00": 0.0,
        "Z_A B1": math.sin(p.beta1),
        "X_A B1": math.cos(p.beta1),
        "Z_A B00": 0.0,
        "X_A B00": 1.0,
        "B0": 0.0,
        "B01": 0.0,
        "B0 B01": b0_b01,
        "Z_A B0 B01": 0.0,
        "X_A B0 B01": 0.0,
        "X_A B0 B00": 0.0,
        "Z_A B0 B00": 0.0,
        "Z_A B01": c.c3 + c.c4 * b0_b01,
        "Z_A B0": c.c4 + c.c3 * b0_b01,
        "X_A B01": c.c1 + c.c2 * b0_b01,
        "X_A B0": c.c2 + c.c1 * b0_b01,
        "B0 B00": c.c2 + c.c1 * b0_b01,
    }
    return SecurityLedger(values)


def ledger_operator(r: DilatedRealization, p: ProtocolParams, label: str) -> np.ndarray:
    """8x8 operator for one ledger label on a dilated realization."""
    xa, za = xa_za(p, r.A0, r.A1)
    alice_ops = {None: I2, "X": xa, "Z": za}
    bob_ops = r.bob_observables()
    for name, alice_key, bob_keys in LEDGER_LABELS:
        if name == label:
            bob = np.eye(4, dtype=complex)
            for key in bob_keys:
                bob = bob @ bob_ops[key]
            return np.kron(alice_ops[alice_key], bob)
    raise KeyError(label)


def ledger_born(p: ProtocolParams) -> SecurityLedger:
    """Ledger by direct evaluation of each operator on the ideal state."""
    r = dilated_realization(p)
    values = {}
    for label in LABELS:
        v = complex(r.psi.conj() @ ledger_operator(r, p, label) @ r.psi)
        if abs(v.imag) >= IMAG_TOL:
            raise ArithmeticError(f"<{label}> has imaginary part {v.imag:.3g}")
        values[label] = v.real
    return SecurityLedger(values)


@dataclass(frozen=True)
class UniquenessReport:
    max_abs_gap: float
    passed: bool
    applicable: bool = True
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "max_abs_gap": self.max_abs_gap,
            "pass": self.passed,
            "applicable": self.applicable,
            "reason": self.reason,
        }


def uniqueness_check(p: ProtocolParams, tol: float = UNIQUENESS_TOL) -> UniquenessReport:
    """Compare the closed-form and Born-rule ledgers.

    Outside the certified domain the closed forms are undefined; the report
    is then marked not applicable rather than failed.
    """
    try:
        closed = ledger_closed_form(p)
    except OutsideSecureDomain as exc:
        return UniquenessReport(math.nan, False, applicable=False, reason=str(exc))
    gap = closed.max_gap(ledger_born(p))
    return UniquenessReport(gap, gap < tol)


def reconstruction_gap(p: ProtocolParams, table: CorrelationTable) -> float:
    """Largest difference between ``table`` and its rebuild from the closed-form ledger."""
    return ledger_closed_form(p).to_table(p).max_gap(table)


def xz_products_real_parts(p: ProtocolParams) -> dict[str, float]:
    """``|Re <X_A Z_A B>|`` for B in {B0, B01, B0 B00}; each should vanish."""
    r = dilated_realization(p)
    xa, za = xa_za(p, r.A0, r.A1)
    bobs = {"B0": r.B0, "B01": r.B01, "B0 B00": r.B0 @ r.B00}
    out = {}
    for name, b in bobs.items():
        v = r.psi.conj() @ np.kron(xa @ za, b) @ r.psi
        out[name] = float(abs(v.real))
    return out

