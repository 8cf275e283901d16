"""Stochastic resetting of the stroboscopic dynamics (renewal averaging).

Resets are attempted at the end of every drive cycle and succeed with
probability p_r = 1 - e^{-rT}.  The observable at cycle m is then the
renewal average over the age q (cycles since the last successful reset):

    w(q = m) = e^{-r m T}                    (never reset)
    w(q < m) = (1 - e^{-rT}) e^{-r q T}

For correlators of the GGE/odd/even form the average has a closed form via
the geometric sum of z^q with z = e^{-rT} e^{2i|eps|T}; when |1 - z| is
tiny (r -> 0 at a stroboscopic resonance) the explicit sum is used instead.
"""

from __future__ import annotations

import numpy as np

from .errors import LengthMismatch, NegativeRate
from .xycorr import CorrelatorDecomposition

DENOM_GUARD = 1e-8


def reset_weights(r: float, T: float, m: int) -> np.ndarray:
    """Probabilities w[q], q = 0..m, of the state having age q at cycle m."""
    if r < 0:
        raise NegativeRate(f"reset rate must be >= 0, got {r}")
    q = np.arange(m + 1)
    w = -np.expm1(-r * T) * np.exp(-r * T * q)
    w[m] = np.exp(-r * T * m)
    return w


def _geometric_sums(z: np.ndarray, m: int):
    """(sum_{q=0}^{m-1} z^q) elementwise, guarded near z = 1."""
    Z = 1.0 - z
    out = np.empty_like(z)
    safe = np.abs(Z) >= DENOM_GUARD
    out[safe] = (1.0 - z[safe] ** m) / Z[safe]
    if not np.all(safe):
        zb = z[~safe]
        acc = np.zeros_like(zb)
        pw = np.ones_like(zb)
        for _ in range(m):
            acc += pw
            pw *= zb
        out[~safe] = acc
    return out


def _averaged(decomp: CorrelatorDecomposition, gge, odd, even, r: float, m: int, T: float):
    """Renewal average of G + O sin(2 q eps T) + E cos(2 q eps T)."""
    epsT = decomp.eps_T
    z = np.exp(-r * T) * np.exp(2j * epsT)
    pr = -np.expm1(-r * T)
    surv = np.exp(-r * T * m)
    geo = _geometric_sums(z.astype(complex), m)
    phase_m = np.exp(2j * epsT * m)
    osc = surv * phase_m + pr * geo  # averaged e^{2 i q eps T}
    return gge + odd * osc.imag + even * osc.real


def reset_average_correlators(decomp: CorrelatorDecomposition, r: float, m: int, T: float):
    """Renewal-averaged (C_d, C_o) at cycle m for reset rate r."""
    if r < 0:
        raise NegativeRate(f"reset rate must be >= 0, got {r}")
    if r == 0.0:
        from .xycorr import correlators_at_cycle

        return correlators_at_cycle(decomp, m)
    Cd = _averaged(decomp, decomp.d_gge, decomp.d_odd, decomp.d_even, r, m, T)
    Co = _averaged(decomp, decomp.o_gge, decomp.o_odd, decomp.o_even, r, m, T)
    return Cd, Co


def reset_steady_state_correlators(decomp: CorrelatorDecomposition, r: float, T: float):
    """m -> infinity limit of the renewal average; at r = 0 this is the GGE."""
    if r < 0:
        raise NegativeRate(f"reset rate must be >= 0, got {r}")
    if r == 0.0:
        return decomp.d_gge.copy(), decomp.o_gge.copy()
    epsT = decomp.eps_T
    z = np.exp(-r * T) * np.exp(2j * epsT)
    inv = 1.0 / (1.0 - z)  # |z| < 1 strictly, so this is finite
    pr = -np.expm1(-r * T)
    Cd = decomp.d_gge + pr * (decomp.d_odd * inv.imag + decomp.d_even * inv.real)
    Co = decomp.o_gge + pr * (decomp.o_odd * inv.imag + decomp.o_even * inv.real)
    return Cd, Co


def reset_average_rho(history: np.ndarray, r: float, T: float) -> np.ndarray:
    """Renewal average of a density-matrix history rho(qT), q = 0..m.

    history has shape (m+1, d, d); the result is the convex combination
    with the age weights at observation cycle m = len(history) - 1.
    """
    history = np.asarray(history)
    if history.ndim != 3 or history.shape[0] < 1:
        raise LengthMismatch(f"expected a (m+1, d, d) history, got shape {history.shape}")
    m = history.shape[0] - 1
    # a state of age q was reset q cycles before observation, so it has
    # evolved for q cycles from the reset state: it is history[q]
    return np.tensordot(reset_weights(r, T, m), history, axes=(0, 0))


def sample_reset_ages(rng: np.random.Generator, r: float, T: float, m: int, n: int) -> np.ndarray:
    """Monte-Carlo oracle: n sampled ages at cycle m under per-cycle resets."""
    pr = -np.expm1(-r * T)
    # one reset attempt at the end of each of cycles 1..m; a success at
    # cycle c rewinds the state, leaving age m - c when observed at cycle m
    hits = rng.random((n, m)) < pr
    any_hit = hits.any(axis=1)
    last = m - 1 - np.argmax(hits[:, ::-1], axis=1)  # index of latest success
    ages = np.where(any_hit, m - (last + 1), m)
    return ages
