"""Exact sequential correlation tables in the POVM and dilated pictures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import I2, PHI_PLUS, SX, check_density, dm, expval, kron, max_abs, projector
from .protocol import (
    DilatedRealization,
    ProtocolParams,
    alice_observable,
    bob2_observable,
    bob_observable,
    dilated_realization,
    kraus_pair,
)

OUTCOMES = (1, -1)
PROB_TOL = 1e-12


def outcome_index(o: int) -> int:
    """Array index of a +/-1 outcome: +1 -> 0, -1 -> 1."""
    if o == 1:
        return 0
    if o == -1:
        return 1
    raise ValueError(f"outcome must be +1 or -1, got {o!r}")


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Joint outcome probabilities of one protocol.

    ``long_branch[ia, ib1, ib2, x, y2]`` is P(a, b1, b2 | x, y1=0, y2) and
    ``short_branch[ia, ib1, x]`` is P(a, b1 | x, y1=1), where ``ia`` etc. are
    outcome indices (see :func:`outcome_index`). When Bob1 picks input 1 the
    protocol ends, so no Bob2 outcome is stored for that branch.
    """

    long_branch: np.ndarray
    short_branch: np.ndarray

    def __post_init__(self):
        long_b = np.asarray(self.long_branch, dtype=float)
        short_b = np.asarray(self.short_branch, dtype=float)
        if long_b.shape != (2, 2, 2, 2, 2) or short_b.shape != (2, 2, 2):
            raise ValueError("bad table shapes")
        for arr in (long_b, short_b):
            if arr.min() < -PROB_TOL or arr.max() > 1 + PROB_TOL:
                raise ValueError(f"probability outside [0, 1]: [{arr.min()}, {arr.max()}]")
        long_b = np.clip(long_b, 0.0, 1.0)
        short_b = np.clip(short_b, 0.0, 1.0)
        long_b.setflags(write=False)
        short_b.setflags(write=False)
        object.__setattr__(self, "long_branch", long_b)
        object.__setattr__(self, "short_branch", short_b)

    def prob(self, a: int, b1: int, b2: int | None, x: int, y1: int, y2: int | None = None) -> float:
        """P(a, b1, b2 | x, y1, y2) with +/-1 outcomes; ``b2``/``y2`` unused when ``y1 == 1``."""
        ia, ib1 = outcome_index(a), outcome_index(b1)
        if y1 == 1:
            return float(self.short_branch[ia, ib1, x])
        if y1 != 0 or b2 is None or y2 is None:
            raise ValueError("the y1=0 branch needs b2 and y2")
        return float(self.long_branch[ia, ib1, outcome_index(b2), x, y2])

    def distribution(self, x: int, y2: int) -> np.ndarray:
        """P(a, b1, b2 | x, 0, y2) as a (2, 2, 2) array."""
        return self.long_branch[:, :, :, x, y2]

    def alice_bob2_correlator(self, x: int, y2: int) -> float:
        """<A_x B_{0 y2}> from the Alice-Bob2 marginal of the y1=0 branch."""
        signs = np.array(OUTCOMES, dtype=float)
        marg = self.long_branch[:, :, :, x, y2].sum(axis=1)
        return float(signs @ marg @ signs)

    def alice_bob1_correlator(self, x: int, y1: int, y2: int = 0) -> float:
        """<A_x B_{y1}> from the Alice-Bob1 marginal."""
        signs = np.array(OUTCOMES, dtype=float)
        if y1 == 1:
            marg = self.short_branch[:, :, x]
        else:
            marg = self.long_branch[:, :, :, x, y2].sum(axis=2)
        return float(signs @ marg @ signs)

    def normalization_residual(self) -> float:
        long_sums = self.long_branch.sum(axis=(0, 1, 2))
        short_sums = self.short_branch.sum(axis=(0, 1))
        return max(max_abs(long_sums - 1), max_abs(short_sums - 1))

    def no_signaling_residual(self) -> float:
        """Largest violation of marginal independence from the remote inputs.

        Alice's marginal must not depend on (y1, y2); the marginal of the
        Bobs must not depend on x.
        """
        alice_long = self.long_branch.sum(axis=(1, 2))  # [ia, x, y2]
        alice_short = self.short_branch.sum(axis=1)  # [ia, x]
        res = max_abs(alice_long[:, :, 0] - alice_long[:, :, 1])
        res = max(res, max_abs(alice_long[:, :, 0] - alice_short))
        bobs_long = self.long_branch.sum(axis=0)  # [ib1, ib2, x, y2]
        bobs_short = self.short_branch.sum(axis=0)  # [ib1, x]
        res = max(res, max_abs(bobs_long[:, :, 0, :] - bobs_long[:, :, 1, :]))
        res = max(res, max_abs(bobs_short[:, 0] - bobs_short[:, 1]))
        # Bob1's outcome cannot depend on Bob2's later input.
        bob1_long = bobs_long.sum(axis=1)  # [ib1, x, y2]
        res = max(res, max_abs(bob1_long[:, :, 0] - bob1_long[:, :, 1]))
        return res

    def max_gap(self, other: "CorrelationTable") -> float:
        return max(
            max_abs(self.long_branch - other.long_branch),
            max_abs(self.short_branch - other.short_branch),
        )

    def to_dict(self) -> dict:
        rows = []
        for x in (0, 1):
            for y2 in (0, 1):
                for a in OUTCOMES:
                    for b1 in OUTCOMES:
                        for b2 in OUTCOMES:
                            rows.append({"x": x, "y1": 0, "y2": y2, "a": a, "b1": b1, "b2": b2,
                                         "p": self.prob(a, b1, b2, x, 0, y2)})
            for a in OUTCOMES:
                for b1 in OUTCOMES:
                    rows.append({"x": x, "y1": 1, "a": a, "b1": b1,
                                 "p": self.prob(a, b1, None, x, 1)})
        return {"entries": rows}


def joint_povm(p: ProtocolParams) -> CorrelationTable:
    """Born-rule table with Bob1's weak measurement given by its Kraus pair."""
    rho = dm(PHI_PLUS)
    kraus = dict(zip(OUTCOMES, kraus_pair(p.theta)))
    b1_obs = bob_observable(p, "B1")
    long_b = np.empty((2, 2, 2, 2, 2))
    short_b = np.empty((2, 2, 2))
    for x in (0, 1):
        a_obs = alice_observable(p, x)
        for a in OUTCOMES:
            m = projector(a_obs, a)
            for b1 in OUTCOMES:
                k = kraus[b1]
                for y2 in (0, 1):
                    for b2 in OUTCOMES:
                        n = projector(bob2_observable(p, y2), b2)
                        effect = k.conj().T @ n @ k
                        long_b[outcome_index(a), outcome_index(b1), outcome_index(b2), x, y2] = (
                            expval(rho, kron(m, effect)).real
                        )
                short_b[outcome_index(a), outcome_index(b1), x] = expval(
                    rho, kron(m, projector(b1_obs, b1))
                ).real
    return CorrelationTable(long_b, short_b)


def table_from_realization(r: DilatedRealization) -> CorrelationTable:
    """Table from a pure state with commuting projective Bob observables."""
    eye4 = np.eye(4)
    long_b = np.empty((2, 2, 2, 2, 2))
    short_b = np.empty((2, 2, 2))
    for x in (0, 1):
        for a in OUTCOMES:
            pa = projector(r.alice(x), a)
            for b1 in OUTCOMES:
                pb1 = projector(r.B0, b1)
                for y2 in (0, 1):
                    for b2 in OUTCOMES:
                        pb2 = projector(r.bob2(y2), b2)
                        long_b[outcome_index(a), outcome_index(b1), outcome_index(b2), x, y2] = (
                            expval(r.psi, kron(pa, pb1 @ pb2)).real
                        )
                short_b[outcome_index(a), outcome_index(b1), x] = expval(
                    r.psi, kron(pa, (eye4 + b1 * r.B1) / 2)
                ).real
    return CorrelationTable(long_b, short_b)


def joint_dilated(p: ProtocolParams, bob_unitary: np.ndarray | None = None) -> CorrelationTable:
    """Table from the three-qubit projective dilation.

    ``bob_unitary`` optionally applies a local unitary on Bob's side
    (see :meth:`DilatedRealization.with_bob_unitary`).
    """
    r = dilated_realization(p)
    if bob_unitary is not None:
        r = r.with_bob_unitary(bob_unitary)
    return table_from_realization(r)


def post_measurement_state(rho: np.ndarray, theta: float) -> np.ndarray:
    """State handed to Bob2 after Bob1's weak measurement, outcomes forgotten."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit state, got shape {rho.shape}")
    check_density(rho)
    out = np.zeros((4, 4), dtype=complex)
    for k in kraus_pair(theta):
        kk = kron(I2, k)
        out += kk @ rho @ kk.conj().T
    return out


def kraus_invariance_residual(theta: float, observable: np.ndarray = SX) -> float:
    """Deviation of ``sum_b K_b P K_b`` from ``P`` for the projectors of ``observable``.

    Zero for ``X``, whose eigenbasis the Kraus pair shares.
    """
    ks = kraus_pair(theta)
    res = 0.0
    for b2 in OUTCOMES:
        p = projector(observable, b2)
        res = max(res, max_abs(sum(k @ p @ k for k in ks) - p))
    return res
