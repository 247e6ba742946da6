"""Global randomness of the outcomes (a, b1, b2) at inputs (x*, 0, 1).

When the correlations are extremal, Eve's side information factorizes out.
The min-entropy and worst-case conditional von Neumann entropy then reduce
to the classical min-entropy and Shannon entropy of P(a, b1, b2 | x*, 0, 1).
Writing that distribution as ``f / 8`` gives closed forms in the angles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .correlations import OUTCOMES, CorrelationTable
from .protocol import ProtocolParams

F_NEG_TOL = 1e-12

# Certified endpoint values quoted in the literature for the sequential CHSH
# preset at theta in {0, pi/4}. They are carried as metadata only; the formulas
# here do not produce them.
CHSH_ENDPOINT_ANNOTATION = {
    "h_min_bits": 1.2284,
    "h_vn_bits": 1.6009,
    "computed": False,
    "note": "reported endpoint values for the sequential CHSH preset; not derived by this toolkit",
}


@dataclass(frozen=True)
class EntropyReport:
    x_star: int
    theta: float
    delta: float
    h_min: float
    h_vn: float
    security_valid: bool

    def as_dict(self) -> dict:
        return {
            "x_star": self.x_star,
            "theta": self.theta,
            "delta": self.delta,
            "h_min": self.h_min,
            "h_vn": self.h_vn,
            "security_valid": self.security_valid,
        }


def f_value(a, b1, b2, alpha_x, theta, delta):
    """Eight times P(a, b1, b2 | x, 0, 1). Broadcasts over numpy arrays."""
    c2t, s2t = np.cos(2 * theta), np.sin(2 * theta)
    cd, sd = np.cos(delta), np.sin(delta)
    return (
        1
        + b1 * b2 * cd * c2t
        + a * np.cos(alpha_x) * (b1 * c2t + b2 * cd)
        + a * b2 * np.sin(alpha_x) * s2t * sd
    )


def _f_all(alpha_x: float, theta: float, delta: float) -> np.ndarray:
    vals = np.array([
        f_value(a, b1, b2, alpha_x, theta, delta)
        for a, b1, b2 in itertools.product(OUTCOMES, repeat=3)
    ], dtype=float)
    if vals.min() < -F_NEG_TOL:
        raise ArithmeticError(f"negative f value {vals.min():.3g}")
    return np.clip(vals, 0.0, None)


def min_entropy(probs) -> float:
    return float(-math.log2(np.max(probs)))


def shannon_entropy(probs) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _entropies_from_f(f: np.ndarray) -> tuple[float, float]:
    h_min = 3.0 - math.log2(f.max())
    nz = f[f > 0]
    h_vn = 3.0 - float((nz * np.log2(nz)).sum()) / 8.0
    return h_min, h_vn


def entropies(p: ProtocolParams, x_star: int) -> EntropyReport:
    """Closed-form min- and von Neumann entropy at inputs (x*, 0, 1).

    Values are returned for any parameters; ``security_valid`` says whether
    the device-independent certificate covers them.
    """
    h_min, h_vn = _entropies_from_f(_f_all(p.alpha(x_star), p.theta, p.delta))
    return EntropyReport(x_star, p.theta, p.delta, h_min, h_vn, p.security_valid)


def entropies_from_table(
    table: CorrelationTable, x_star: int, p: ProtocolParams | None = None
) -> EntropyReport:
    """Classical min- and Shannon entropy of P(a, b1, b2 | x*, 0, 1) read off a table.

    ``p`` only supplies the angles and the validity flag for the report.
    """
    dist = table.distribution(x_star, 1)
    return EntropyReport(
        x_star,
        p.theta if p is not None else math.nan,
        p.delta if p is not None else math.nan,
        min_entropy(dist),
        shannon_entropy(dist),
        p.security_valid if p is not None else False,
    )


GRID_POINTS = 721
GOLDEN_TOL = 1e-9
# Keeps the optimum inside the certified region |sin(delta)| > 1e-9.
DELTA_MARGIN = 1e-8
_INV_PHI = (math.sqrt(5) - 1) / 2


def _golden_max(fun, lo: float, hi: float, tol: float) -> float:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > tol:
        # >= keeps the left point on ties so the search drifts to smaller delta.
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fun(d)
    return (lo + hi) / 2


def optimize_delta(p: ProtocolParams, x_star: int) -> float:
    """Bob2's angle in (0, pi) maximizing the von Neumann entropy at (x*, 0, 1).

    A 721-point grid on [0, pi], endpoints excluded, locates the best cell;
    golden-section search then narrows the bracket around it to ``GOLDEN_TOL``. Ties resolve to the
    smaller angle. For some angles the supremum sits at delta -> 0, where the
    certificate fails; refinement then stops at ``DELTA_MARGIN``.
    """
    alpha = p.alpha(x_star)

    def h_vn(delta: float) -> float:
        return _entropies_from_f(_f_all(alpha, p.theta, delta))[1]

    grid = np.linspace(0.0, math.pi, GRID_POINTS)[1:-1]
    vals = np.array([h_vn(d) for d in grid])
    i = int(np.argmax(vals))
    step = grid[1] - grid[0]
    lo = max(grid[i] - step, DELTA_MARGIN)
    hi = min(grid[i] + step, math.pi - DELTA_MARGIN)
    best = _golden_max(h_vn, lo, hi, GOLDEN_TOL)
    if h_vn(best) < vals[i]:
        return float(grid[i])
    return float(best)
