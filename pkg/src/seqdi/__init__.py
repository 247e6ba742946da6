"""Sequential device-independent protocols: exact correlations, Tsirelson-bound
certification and randomness curves."""

from .bell import (
    Coefficients,
    bell_operator,
    best_chsh,
    boundary_residual,
    coefficients,
    i_omega,
    saturation_residual,
    tsirelson_bound_omega,
    xa_za,
)
from .correlations import (
    CorrelationTable,
    joint_dilated,
    joint_povm,
    kraus_invariance_residual,
    post_measurement_state,
)
from .entropy import EntropyReport, entropies, entropies_from_table, f_value, optimize_delta
from .protocol import (
    InvalidParameters,
    Preset,
    ProtocolParams,
    alice_observable,
    bob_observable,
    chsh,
    dilated_realization,
    kraus_pair,
    wooltorton,
)
from .security import SecurityLedger, ledger_born, ledger_closed_form, uniqueness_check

__version__ = "0.1.0"
