"""Floquet perturbation theory for the square-pulse drive (hbar = 1).

First-order Floquet Hamiltonians for both models, the vanishing second
order, the closed-form third-order XY coefficients and PXP scalar A_0, and
the special drive frequencies at which the first-order term loses its
off-diagonal (pair-creating) part:

    XY / PXP:   omega_n* = lambda0 / n          (alpha, gamma = n pi)
    XY shifted: omega_n' = sqrt(lambda0^2 + (kappa J)^2) / n
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DriveProtocol, PXPParams, XYParams
from .xyfloquet import TAU_X, TAU_Y, TAU_Z, MomentumMode, one_cycle_unitary

_PI_SNAP = 1e-12


def _sinc_pi_exact(x: float) -> float:
    """sin(x)/x with the zeros at x = n pi (n != 0) made exact."""
    if x == 0.0:
        return 1.0
    n = round(x / np.pi)
    if n != 0 and abs(x - n * np.pi) < _PI_SNAP:
        return 0.0
    return float(np.sin(x) / x)


@dataclass(frozen=True)
class XYFPTCoefficients:
    b: float  # diagonal coefficient is -b
    offdiag_amp: float  # Delta sin(alpha)/alpha
    alpha: float  # off-diagonal phase
    lam1: float
    lam2: float
    lam3: float


@dataclass(frozen=True)
class PXPFPTCoefficients:
    amp: float  # w sin(gamma)/gamma
    gamma: float
    A0: complex


def xy_fpt_coefficients(mode: MomentumMode, drive: DriveProtocol) -> XYFPTCoefficients:
    b, D = mode.b, mode.Delta
    T = drive.T
    lam0 = drive.lambda0
    alpha = drive.alpha
    amp = D * _sinc_pi_exact(alpha)
    x = lam0 * T
    sx, cx = np.sin(x), np.cos(x)
    s2x, c2x = np.sin(2 * x), np.cos(2 * x)
    pref = D / (6.0 * lam0**3 * T)
    lam3 = -(b**3) * T**2 / 6.0 + (b * D**2 / (3.0 * lam0**3 * T)) * (x - 3.0 * sx + 2.0 * x * cx)
    lam2 = pref * ((D**2 + 2.0 * b**2 * (3.0 + x**2)) * sx + 3.0 * D**2 * x * cx - 2.0 * D**2 * s2x - 6.0 * b**2 * x)
    lam1 = pref * (
        2.0 * (3.0 * b**2 + b**2 * x**2 + D**2) * cx - 3.0 * D**2 * x * sx - 2.0 * D**2 * c2x - (6.0 * b**2 - b**2 * x**2)
    )
    return XYFPTCoefficients(b=b, offdiag_amp=amp, alpha=alpha, lam1=lam1, lam2=lam2, lam3=lam3)


def xy_hf1(mode: MomentumMode, drive: DriveProtocol) -> np.ndarray:
    """First-order Floquet Hamiltonian of one XY mode:
    -b tau^z + Delta (sin a / a)(e^{i a} tau^+ + h.c.), a = lambda0 T / 2."""
    co = xy_fpt_coefficients(mode, drive)
    c = co.offdiag_amp * np.exp(1j * co.alpha)
    return np.array([[-co.b, c], [np.conj(c), co.b]], dtype=complex)


def xy_hf3(mode: MomentumMode, drive: DriveProtocol) -> np.ndarray:
    """Third-order Floquet Hamiltonian lam1 tau^x - lam2 tau^y + lam3 tau^z
    (the second order vanishes identically)."""
    co = xy_fpt_coefficients(mode, drive)
    return co.lam1 * TAU_X - co.lam2 * TAU_Y + co.lam3 * TAU_Z


def xy_hf_exact(mode: MomentumMode, drive: DriveProtocol, params: XYParams) -> np.ndarray:
    """Oracle: exact H_F = (i/T) log U from the principal matrix logarithm;
    eigenvalues land in (-pi/T, pi/T] by the principal branch."""
    U = one_cycle_unitary(mode, drive, params)
    HF = 1j * scipy.linalg.logm(U) / drive.T
    return 0.5 * (HF + HF.conj().T)


def pxp_fpt_coefficients(drive: DriveProtocol, params: PXPParams) -> PXPFPTCoefficients:
    """First-order amplitude/phase and the third-order scalar A_0."""
    w = params.w
    gamma = drive.alpha
    amp = w * _sinc_pi_exact(gamma)
    x = drive.lambda0 * drive.T
    A0 = (
        w**3
        * np.exp(-2j * x)
        / (12j * drive.lambda0**3 * drive.T)
        * (np.exp(6j * x) + 3.0 * np.exp(1j * x) * (1.0 + 2j * x) + 2.0 * (1.0 - 3.0 * np.exp(2j * x)))
    )
    return PXPFPTCoefficients(amp=amp, gamma=gamma, A0=complex(A0))


def special_frequencies(lambda0: float, params, n_max: int) -> list[tuple[float, float]]:
    """[(omega_n*, omega_n')] for n = 1..n_max.  The shifted value uses the
    dressed amplitude sqrt(lambda0^2 + (kappa J)^2) for XY parameters; for
    PXP the first-order shift vanishes and omega' = omega*."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if isinstance(params, XYParams):
        Omega = np.hypot(lambda0, params.kappa * params.J)
    else:
        Omega = lambda0
    return [(lambda0 / n, float(Omega) / n) for n in range(1, n_max + 1)]
