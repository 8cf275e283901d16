"""Tests for the Floquet perturbation theory coefficients and special frequencies."""

import numpy as np
import pytest

from spinreset.config import DriveProtocol, PXPParams, XYParams
from spinreset.fpt import (
    pxp_fpt_coefficients,
    special_frequencies,
    xy_fpt_coefficients,
    xy_hf1,
    xy_hf3,
    xy_hf_exact,
)
from spinreset.xyfloquet import MomentumMode

PARAMS = XYParams(J=1.0, kappa=0.7)


def _drive_at_alpha(lambda0, alpha):
    # alpha = lambda0 T / 2 and T = 2 pi / omega_D.
    T = 2.0 * alpha / lambda0
    return DriveProtocol(lambda0=lambda0, omega_D=2.0 * np.pi / T)


def test_hf1_hf3_hermitian_traceless():
    drive = DriveProtocol(lambda0=10.0, omega_D=8.0)
    mode = MomentumMode.from_params(1.1, PARAMS)
    for H in (xy_hf1(mode, drive), xy_hf3(mode, drive)):
        assert np.max(np.abs(H - H.conj().T)) < 1e-14
        assert abs(np.trace(H)) < 1e-14


def test_offdiagonal_vanishes_exactly_at_special_frequencies():
    for n in (1, 2, 3):
        drive = _drive_at_alpha(10.0, n * np.pi)
        mode = MomentumMode.from_params(1.3, PARAMS)
        co = xy_fpt_coefficients(mode, drive)
        assert co.offdiag_amp == 0.0
        H1 = xy_hf1(mode, drive)
        # diagonal first-order Hamiltonian commutes with tau^z
        assert abs(H1[0, 1]) == 0.0
        pxp = pxp_fpt_coefficients(drive, PXPParams(w=1.0))
        assert pxp.amp == 0.0


def test_hf1_short_period_limit_is_time_average():
    # As T -> 0 the field average cancels and H_F^(1) -> -b tau^z + Delta tau^x.
    drive = DriveProtocol(lambda0=10.0, omega_D=1e5)
    mode = MomentumMode.from_params(0.8, PARAMS)
    H1 = xy_hf1(mode, drive)
    target = np.array([[-mode.b, mode.Delta], [mode.Delta, mode.b]], dtype=complex)
    assert np.max(np.abs(H1 - target)) < 1e-3
    co = xy_fpt_coefficients(mode, drive)
    # third-order coefficients scale as T^2
    assert max(abs(co.lam1), abs(co.lam2), abs(co.lam3)) < 1e-6


def test_hf1_error_scaling_in_inverse_amplitude():
    # At fixed omega_D / lambda0 the first-order error must fall at least
    # ~4x per doubling of lambda0 (next correction is third order in 1/lambda0).
    ratio = 0.8
    mode_k = 1.3
    errs = []
    for lam0 in (10.0, 20.0, 40.0):
        drive = DriveProtocol(lambda0=lam0, omega_D=ratio * lam0)
        params = PARAMS
        mode = MomentumMode.from_params(mode_k, params)
        exact = xy_hf_exact(mode, drive, params)
        errs.append(np.max(np.abs(exact - xy_hf1(mode, drive))))
    assert errs[0] / errs[1] > 3.5
    assert errs[1] / errs[2] > 3.5


def test_pxp_A0_closed_value_at_gamma_pi():
    w = 1.0
    for lam0 in (5.0, 10.0, 20.0):
        drive = _drive_at_alpha(lam0, np.pi)
        co = pxp_fpt_coefficients(drive, PXPParams(w=w))
        assert co.gamma == pytest.approx(np.pi, abs=1e-12)
        assert co.A0 == pytest.approx(w**3 / (2.0 * lam0**2), abs=1e-12)


def test_special_frequencies_values():
    pairs = special_frequencies(10.0, PARAMS, 3)
    omega_shift = np.sqrt(10.0**2 + 0.7**2)
    assert pairs[0] == pytest.approx((10.0, omega_shift))
    assert pairs[0][1] == pytest.approx(np.sqrt(100.49), abs=1e-12)
    assert pairs[1] == pytest.approx((5.0, omega_shift / 2))
    assert pairs[2] == pytest.approx((10.0 / 3, omega_shift / 3))
    # for PXP the first-order value is unshifted
    pxp_pairs = special_frequencies(10.0, PXPParams(w=1.0), 2)
    assert pxp_pairs[0] == pytest.approx((10.0, 10.0))
    with pytest.raises(ValueError):
        special_frequencies(10.0, PARAMS, 0)


def test_kappa_zero_hf1_is_exact():
    # Without pairing both half-cycle Hamiltonians are diagonal and commute,
    # so first order is already exact (modulo Brillouin-zone folding).
    params = XYParams(J=1.0, kappa=0.0)
    drive = DriveProtocol(lambda0=10.0, omega_D=8.0)
    mode = MomentumMode.from_params(0.9, params)
    exact = xy_hf_exact(mode, drive, params)
    H1 = xy_hf1(mode, drive)
    # compare modulo the quasienergy folding: eigenvalues agree up to
    # multiples of omega_D
    e_exact = np.linalg.eigvalsh(exact)
    e_h1 = np.linalg.eigvalsh(H1)
    diff = (e_h1 - e_exact) / drive.omega_D
    assert np.max(np.abs(diff - np.round(diff))) < 1e-10
    assert abs(H1[0, 1]) < 1e-12 or abs(exact[0, 1]) < 1e-12


def test_pxp_A0_magnitude_decays_with_amplitude():
    drives = [_drive_at_alpha(lam0, 0.9 * np.pi) for lam0 in (10.0, 20.0, 40.0)]
    mags = [abs(pxp_fpt_coefficients(d, PXPParams(w=1.0)).A0) for d in drives]
    assert mags[0] > mags[1] > mags[2]
    assert mags[0] / mags[1] > 3.5
