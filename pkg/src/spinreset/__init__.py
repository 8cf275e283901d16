"""Entanglement in periodically driven spin chains under stochastic resetting.

Closed-form free-fermion machinery for the driven XY chain, exact
diagonalization for the constrained PXP ring, renewal averaging over
cycle-boundary resets, and extraction of the critical and optimal reset
rates from steady-state concurrence curves.
"""

__version__ = "1.0.0"

from .analysis import (
    ConcurrenceCurve,
    CriticalRates,
    PXPSteadyContext,
    XYSteadyContext,
    critical_rates,
    find_rc,
    find_rm,
    frequency_map,
    steady_concurrence_curve,
)
from .config import (
    DriveProtocol,
    PXPParams,
    ResetSpec,
    ValidatedConfig,
    XYParams,
    default_r_grid,
    load_config,
    validate_config,
)
from .entanglement import (
    XState,
    concurrence_general,
    concurrence_xstate,
    pxp_two_spin_rdm,
    single_spin_entropy,
    vn_entropy,
    xstate_to_matrix,
    xy_two_spin_rdm,
)
from .errors import ConfigError, NumericalError
from .fpt import pxp_fpt_coefficients, special_frequencies, xy_hf1, xy_hf3
from .pxp import (
    build_pxp_hamiltonian,
    build_symmetry_sector,
    enumerate_constrained_basis,
    floquet_operator,
    prethermal_average,
    stroboscopic_state,
)
from .reset import (
    reset_average_correlators,
    reset_average_rho,
    reset_steady_state_correlators,
    reset_weights,
)
from .xycorr import TransformSet, XYTransformContext, correlator_decomposition
from .xyfloquet import FloquetMode, ModeState, MomentumMode, floquet_mode
