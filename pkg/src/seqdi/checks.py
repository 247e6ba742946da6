"""Invariant suites bundled for the ``verify`` command."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bell, correlations, entropy, security
from .linalg import HADAMARD, I2, SZ, commutator, hermiticity_residual, kron, max_abs, unitarity_residual
from .protocol import Preset, ProtocolParams, dilated_realization, kraus_pair

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": None if math.isnan(self.residual) else self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def below(name: str, residual: float, tol: float, detail: str = "") -> Check:
    status = PASS if residual < tol else FAIL
    return Check(name, status, float(residual), tol, detail)


def above(name: str, value: float, floor: float, detail: str = "") -> Check:
    status = PASS if value > floor else FAIL
    return Check(name, status, float(value), floor, detail or "negative control: must exceed tolerance")


def grid_values(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def picture_grid(p: ProtocolParams, n: int) -> list[ProtocolParams]:
    """(theta, delta, beta1) grid with Alice's angles taken from ``p``."""
    thetas = grid_values(0.0, math.pi / 4, n)
    deltas = grid_values(math.pi / (2 * n), math.pi - math.pi / (2 * n), n)
    betas = grid_values(0.0, math.pi, n)
    return [p.with_(theta=float(t), delta=float(d), beta1=float(b))
            for t, d, b in itertools.product(thetas, deltas, betas)]


def kraus_checks(theta: float) -> list[Check]:
    kp, km = kraus_pair(theta)
    completeness = max_abs(kp.conj().T @ kp + km.conj().T @ km - I2)
    return [
        below("kraus_completeness", completeness, 1e-14),
        below("kraus_invariance", correlations.kraus_invariance_residual(theta), 1e-14),
    ]


def picture_equivalence(params: list[ProtocolParams]) -> float:
    return max(correlations.joint_povm(q).max_gap(correlations.joint_dilated(q)) for q in params)


def table_checks(params: list[ProtocolParams]) -> list[Check]:
    norm = nosig = 0.0
    for q in params:
        for t in (correlations.joint_povm(q), correlations.joint_dilated(q)):
            norm = max(norm, t.normalization_residual())
            nosig = max(nosig, t.no_signaling_residual())
    return [below("normalization", norm, 1e-12), below("no_signaling", nosig, 1e-12)]


def operator_checks(p: ProtocolParams) -> list[Check]:
    r = dilated_realization(p)
    comm = max(max_abs(commutator(r.B0, r.B00)), max_abs(commutator(r.B0, r.B01)))
    herm = max(hermiticity_residual(o) for o in r.observables().values())
    unit = max(unitarity_residual(o) for o in [*r.observables().values(), r.U])
    norm = abs(np.linalg.norm(r.psi) - 1)
    return [
        below("commutation", comm, 1e-12),
        below("hermitian", herm, 1e-12),
        below("unitary", unit, 1e-12),
        below("state_normalized", norm, 1e-14),
    ]


def hadamard_invariance(params: list[ProtocolParams]) -> float:
    v = kron(HADAMARD, I2)
    return max(
        correlations.joint_dilated(q).max_gap(correlations.joint_dilated(q, bob_unitary=v))
        for q in params
    )


def bell_checks(p: ProtocolParams) -> list[Check]:
    try:
        c = bell.coefficients(p.theta, p.delta)
    except bell.DegenerateCoefficients as exc:
        return [Check("bell_operator", SKIPPED, math.nan, 0.0, str(exc))]
    xz = bell.xa_za_state_residuals(p)
    return [
        below("c_identities", max(c.norm_residual(), c.orthogonality_residual()), 1e-12),
        below("saturation", bell.saturation_residual(p), 1e-10),
        below("boundary", bell.boundary_residual(p), 1e-12),
        below("sdag_s", bell.sdag_s_residual(p), 1e-12),
        below("xa_za_on_state", max(xz.values()), 1e-13),
    ]


def ledger_check(p: ProtocolParams) -> list[Check]:
    rep = security.uniqueness_check(p)
    if not rep.applicable:
        return [Check("ledger_uniqueness", SKIPPED, math.nan, security.UNIQUENESS_TOL,
                      f"excluded domain: {rep.reason}")]
    table = correlations.joint_dilated(p)
    return [
        Check("ledger_uniqueness", PASS if rep.passed else FAIL, rep.max_abs_gap,
              security.UNIQUENESS_TOL),
        below("ledger_reconstruction", security.reconstruction_gap(p, table), 1e-10),
        below("xz_products_imaginary", max(security.xz_products_real_parts(p).values()), 1e-12),
    ]


def entropy_check(p: ProtocolParams) -> Check:
    table = correlations.joint_povm(p)
    gap = 0.0
    for x_star in (0, 1):
        a = entropy.entropies(p, x_star)
        b = entropy.entropies_from_table(table, x_star, p)
        gap = max(gap, abs(a.h_min - b.h_min), abs(a.h_vn - b.h_vn))
    return below("entropy_formula_vs_table", gap, 1e-10)


def preset_checks(p: ProtocolParams, preset: Preset | None) -> list[Check]:
    if preset is None:
        return []
    table = correlations.joint_dilated(p)
    if preset.name == "chsh":
        return [below("chsh_2sqrt2", abs(bell.best_chsh(table) - 2 * math.sqrt(2)), 1e-9)]
    value = bell.i_omega(table, preset.omega)
    bound = bell.tsirelson_bound_omega(preset.omega)
    return [below("i_omega_saturation", abs(value - bound), 1e-9,
                   f"I={value:.12g}, bound={bound:.12g}")]


def _guard(name: str, fn: Callable[[], list[Check]]) -> list[Check]:
    try:
        return fn()
    except Exception as exc:  # a crashing check is a failed check
        return [Check(name, FAIL, math.nan, 0.0, f"{type(exc).__name__}: {exc}")]


def run_checks(p: ProtocolParams, preset: Preset | None = None, grid: int = 5) -> list[Check]:
    """Every invariant suite at ``p`` plus grid-wide ones around it."""
    grid_params = picture_grid(p, grid)
    local = [p, *grid_params]
    out: list[Check] = []
    out += _guard("kraus", lambda: kraus_checks(p.theta))
    out += _guard("kraus_negative_control", lambda: [
        above("kraus_negative_control",
               correlations.kraus_invariance_residual(0.1, observable=SZ),
               0.1)
    ])
    out += _guard("picture_equivalence", lambda: [
        below("picture_equivalence", picture_equivalence(local), 1e-12, f"{len(local)} parameter points")
    ])
    out += _guard("tables", lambda: table_checks(local))
    out += _guard("operators", lambda: operator_checks(p))
    out += _guard("bell", lambda: bell_checks(p))
    out += _guard("ledger", lambda: ledger_check(p))
    out += _guard("entropy", lambda: [entropy_check(p)])
    out += _guard("hadamard_invariance", lambda: [
        below("hadamard_invariance", hadamard_invariance(local), 1e-12)
    ])
    out += _guard("preset", lambda: preset_checks(p, preset))
    return out
