"""Steady-state concurrence curves and the critical/optimal reset rates.

A model context maps a reset rate r to the steady-state concurrence of the
next-nearest spin pair.  From a sampled curve C(r) the analysis extracts

    r_c : smallest rate with C above threshold (0 if already positive at
          the smallest sampled rate, absent if C never exceeds threshold)
    r_m : the rate maximizing C, with C_max = C(r_m),

refining both between grid points (bisection for r_c, golden section for
r_m) down to a resolution of 1e-3 in r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DriveProtocol, PXPParams, XYParams, default_r_grid
from .entanglement import (
    concurrence_general,
    concurrence_xstate,
    pxp_two_spin_rdm,
    xy_two_spin_rdm,
)
from .pxp import (
    build_pxp_hamiltonian,
    build_symmetry_sector,
    enumerate_constrained_basis,
    floquet_operator,
    stroboscopic_states,
)
from .reset import reset_average_rho
from .xycorr import GGE, ResetSteady, XYTransformContext
from .xyfloquet import ModeState

C_THRESHOLD = 1e-6
RATE_RESOLUTION = 1e-3
PXP_M_SS = 300
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ConcurrenceCurve:
    r: np.ndarray
    C: np.ndarray
    model: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if len(r) == 0 or np.any(np.diff(r) <= 0):
            raise ValueError("reset-rate grid must be nonempty and strictly increasing")
        if np.any(np.asarray(self.C) < 0):
            raise ValueError("concurrence values must be >= 0")


@dataclass(frozen=True)
class CriticalRates:
    r_c: float | None
    r_m: float | None
    C_max: float | None


class XYSteadyContext:
    """Steady concurrence of the thermodynamic-limit (or finite-L) XY chain."""

    model = "xy"

    def __init__(
        self,
        drive: DriveProtocol,
        params: XYParams,
        l: int = 2,
        init: ModeState = ModeState.ALL_DOWN,
        tol: float = 1e-9,
    ):
        self.drive = drive
        self.params = params
        self.l = l
        self._ctx = XYTransformContext(drive, params, init, tol=tol)

    def concurrence(self, r: float) -> float:
        timespec = GGE() if r == 0.0 else ResetSteady(r)
        ts = self._ctx.transforms(timespec)
        return concurrence_xstate(xy_two_spin_rdm(self.l, ts))

    def describe(self) -> dict:
        return {
            "model": self.model,
            "l": self.l,
            "J": self.params.J,
            "kappa": self.params.kappa,
            "L": self.params.L,
            "lambda0": self.drive.lambda0,
            "omega_D": self.drive.omega_D,
        }


class PXPSteadyContext:
    """Reset steady state of the driven PXP ring via a finite-m renewal average.

    The per-cycle two-spin density matrices rho(qT), q = 0..m_ss, are built
    once (exact diagonalization of one symmetry sector) and reused for every
    reset rate.
    """

    model = "pxp"

    def __init__(
        self,
        drive: DriveProtocol,
        params: PXPParams,
        l: int = 2,
        m_ss: int = PXP_M_SS,
        sites: tuple[int, int] | None = None,
        dressing: str = "plain",
    ):
        self.drive = drive
        self.params = params
        self.l = l
        self.m_ss = m_ss
        i, j = sites if sites is not None else (0, l)
        basis = enumerate_constrained_basis(params.L)
        sector = build_symmetry_sector(basis)
        H_plus = build_pxp_hamiltonian(params, drive.lambda0, sector)
        H_minus = build_pxp_hamiltonian(params, -drive.lambda0, sector)
        flo = floquet_operator(H_plus, H_minus, drive.T)
        states = stroboscopic_states(flo, sector.all_down_state(), np.arange(m_ss + 1))
        self.rho_history = np.stack(
            [
                pxp_two_spin_rdm(sector.expand(psi), basis.configs, params.L, i, j, dressing)
                for psi in states
            ]
        )

    def concurrence(self, r: float) -> float:
        rho = reset_average_rho(self.rho_history, r, self.drive.T)
        return concurrence_general(rho)

    def converged(self, r: float, tol: float = 1e-5) -> bool:
        half = reset_average_rho(self.rho_history[: self.m_ss // 2 + 1], r, self.drive.T)
        c_half = concurrence_general(half)
        return abs(self.concurrence(r) - c_half) < tol

    def describe(self) -> dict:
        return {
            "model": self.model,
            "l": self.l,
            "w": self.params.w,
            "L": self.params.L,
            "lambda0": self.drive.lambda0,
            "omega_D": self.drive.omega_D,
            "m_ss": self.m_ss,
        }


def steady_concurrence_curve(ctx, r_grid: np.ndarray | None = None) -> ConcurrenceCurve:
    """Sample C^{r,st} on a reset-rate grid (default: 0 plus 60 log-spaced)."""
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    C = np.array([ctx.concurrence(float(r)) for r in r_grid])
    return ConcurrenceCurve(r=r_grid, C=C, model=ctx.model, meta=ctx.describe())


def find_rc(curve: ConcurrenceCurve, ctx=None, threshold: float = C_THRESHOLD) -> float | None:
    """Smallest reset rate with concurrence above threshold, or None."""
    above = curve.C > threshold
    if not above.any():
        return None
    i = int(np.argmax(above))
    if i == 0:
        return 0.0
    if ctx is None:
        return float(curve.r[i])
    lo, hi = float(curve.r[i - 1]), float(curve.r[i])
    while hi - lo > RATE_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if ctx.concurrence(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return hi


def find_rm(
    curve: ConcurrenceCurve, ctx=None, threshold: float = C_THRESHOLD
) -> tuple[float, float] | None:
    """(r_m, C_max) maximizing the curve, or None when C never exceeds threshold."""
    if not (curve.C > threshold).any():
        return None
    i = int(np.argmax(curve.C))
    if ctx is None or i == 0 or i == len(curve.r) - 1:
        return float(curve.r[i]), float(curve.C[i])
    lo, hi = float(curve.r[i - 1]), float(curve.r[i + 1])
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = ctx.concurrence(x1), ctx.concurrence(x2)
    while hi - lo > RATE_RESOLUTION:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = ctx.concurrence(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = ctx.concurrence(x1)
    r_m = 0.5 * (lo + hi)
    return r_m, ctx.concurrence(r_m)


def critical_rates(curve: ConcurrenceCurve, ctx=None) -> CriticalRates:
    rc = find_rc(curve, ctx)
    rm = find_rm(curve, ctx)
    if rm is None:
        return CriticalRates(r_c=rc, r_m=None, C_max=None)
    return CriticalRates(r_c=rc, r_m=rm[0], C_max=rm[1])


def frequency_map(ctx_factory, omega_grid: np.ndarray, r_grid: np.ndarray | None = None):
    """Rows (omega_D, r_c, r_m, C_max) over a drive-frequency grid.

    ctx_factory maps omega_D to a model context.
    """
    rows = []
    for omega in np.asarray(omega_grid, dtype=float):
        ctx = ctx_factory(float(omega))
        curve = steady_concurrence_curve(ctx, r_grid)
        rates = critical_rates(curve, ctx)
        rows.append((float(omega), rates.r_c, rates.r_m, rates.C_max))
    return rows


def amplitude_frequency_map(
    ctx_factory, lambda0_grid: np.ndarray, omega_grid: np.ndarray, r: float
):
    """Rows (lambda0, omega_D, C^{r,st}) over an amplitude-frequency grid.

    ctx_factory maps (lambda0, omega_D) to a model context.
    """
    rows = []
    for lam in np.asarray(lambda0_grid, dtype=float):
        for omega in np.asarray(omega_grid, dtype=float):
            ctx = ctx_factory(float(lam), float(omega))
            rows.append((float(lam), float(omega), ctx.concurrence(r)))
    return rows
