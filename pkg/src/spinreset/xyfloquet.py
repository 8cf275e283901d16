"""Single-mode Floquet solution of the driven XY chain.

After the Jordan-Wigner / Bogoliubov-de-Gennes reduction, each momentum
k in (0, pi) evolves independently in a two-dimensional space spanned by
|0> and c_k^dag c_{-k}^dag |0>.  The instantaneous mode Hamiltonian is

    H_k(lambda) = (lambda - J cos k) tau^z + (kappa J sin k) tau^x

and one drive cycle applies U_k = exp(-i H_k^- T/2) exp(-i H_k^+ T/2).
Everything here is closed-form: 2x2 exponentials are computed by exact
Pauli rotation, never by series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DriveProtocol, XYParams

DEGENERACY_TOL = 1e-9

TAU_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
TAU_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
TAU_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class MomentumMode:
    """One XY momentum mode with its derived couplings."""

    k: float
    b: float
    Delta: float

    @staticmethod
    def from_params(k: float, params: XYParams) -> "MomentumMode":
        if not 0.0 < k < np.pi:
            raise ValueError(f"momentum must lie in (0, pi), got {k}")
        return MomentumMode(k=k, b=params.J * np.cos(k), Delta=params.kappa * params.J * np.sin(k))


@dataclass(frozen=True)
class ModeState:
    """Paired-mode amplitudes u|0> + v c_k^dag c_{-k}^dag |0>."""

    u: complex
    v: complex

    def norm(self) -> float:
        return float(abs(self.u) ** 2 + abs(self.v) ** 2)

    ALL_DOWN: "ModeState" = None  # set below


ModeState.ALL_DOWN = ModeState(1.0 + 0.0j, 0.0 + 0.0j)


@dataclass(frozen=True)
class FloquetMode:
    """Quasienergy magnitude and rotation axis of one mode's Floquet operator."""

    eps_F: float  # |eps_k^F| in [0, pi/T]
    n_hat: tuple[float, float, float]
    degenerate: bool


def mode_hamiltonian(mode: MomentumMode, lam: float) -> np.ndarray:
    """2x2 mode Hamiltonian at instantaneous field lam."""
    return (lam - mode.b) * TAU_Z + mode.Delta * TAU_X


def _floquet_arrays(ks, drive: DriveProtocol, params: XYParams):
    """Vectorized Floquet data over an array of momenta.

    Returns (epsT, nx, ny, nz, degenerate) where epsT = |eps_k^F| * T and
    U_k = cos(epsT) I - i sin(epsT) (n . tau).  Composition of the two
    half-cycle rotations is exact:

        cos(epsT) = cos(p-).cos(p+) - (P- . P+) sin(p-) sin(p+)
        n sin(epsT) = sin(p+)cos(p-) P+ + sin(p-)cos(p+) P- + sin(p-)sin(p+) (P- x P+)

    with p_pm = E_pm T/2, E_pm = sqrt((pm lambda0 - b)^2 + Delta^2) and
    P_pm the unit axes of the half-cycle Hamiltonians.
    """
    ks = np.asarray(ks, dtype=float)
    lam0, T = drive.lambda0, drive.T
    b = params.J * np.cos(ks)
    D = params.kappa * params.J * np.sin(ks)

    Ep = np.sqrt((lam0 - b) ** 2 + D**2)
    Em = np.sqrt((lam0 + b) ** 2 + D**2)
    pp = 0.5 * Ep * T
    pm = 0.5 * Em * T
    Ppx, Ppz = D / Ep, (lam0 - b) / Ep
    Pmx, Pmz = D / Em, (-lam0 - b) / Em

    cos_eps = np.cos(pm) * np.cos(pp) - (Ppx * Pmx + Ppz * Pmz) * np.sin(pm) * np.sin(pp)
    epsT = np.arccos(np.clip(cos_eps, -1.0, 1.0))
    s = np.sin(epsT)

    nsx = np.sin(pp) * np.cos(pm) * Ppx + np.sin(pm) * np.cos(pp) * Pmx
    nsz = np.sin(pp) * np.cos(pm) * Ppz + np.sin(pm) * np.cos(pp) * Pmz
    # P- x P+ has only a y component since both axes lie in the x-z plane
    nsy = np.sin(pm) * np.sin(pp) * (Pmz * Ppx - Pmx * Ppz)

    degenerate = np.abs(s) < DEGENERACY_TOL
    safe = np.where(degenerate, 1.0, s)
    nx = np.where(degenerate, 0.0, nsx / safe)
    ny = np.where(degenerate, 0.0, nsy / safe)
    nz = np.where(degenerate, 1.0, nsz / safe)
    return epsT, nx, ny, nz, degenerate


def floquet_mode(mode: MomentumMode, drive: DriveProtocol, params: XYParams) -> FloquetMode:
    """Closed-form quasienergy and Floquet axis of one mode."""
    epsT, nx, ny, nz, deg = _floquet_arrays(np.array([mode.k]), drive, params)
    return FloquetMode(
        eps_F=float(epsT[0]) / drive.T,
        n_hat=(float(nx[0]), float(ny[0]), float(nz[0])),
        degenerate=bool(deg[0]),
    )


def _apply_rotation(chi: float, n_hat, init: ModeState) -> ModeState:
    """Apply cos(chi) I - i sin(chi) (n . tau) to a mode state."""
    nx, ny, nz = n_hat
    c, s = np.cos(chi), np.sin(chi)
    u = (c - 1j * s * nz) * init.u + (-1j * s * (nx - 1j * ny)) * init.v
    v = (-1j * s * (nx + 1j * ny)) * init.u + (c + 1j * s * nz) * init.v
    return ModeState(u, v)


def evolve_mode_exact(
    mode: MomentumMode, drive: DriveProtocol, params: XYParams, m: int, init: ModeState
) -> ModeState:
    """State after m cycles via U_k^m = cos(m epsT) I - i sin(m epsT) (n.tau)."""
    if m < 0:
        raise ValueError("cycle count must be >= 0")
    fm = floquet_mode(mode, drive, params)
    if fm.degenerate:
        # U = +/- I; the sign is cos(epsT) at the degeneracy
        sign = 1.0 if np.cos(fm.eps_F * drive.T) > 0 else -1.0
        return ModeState(init.u * sign**m, init.v * sign**m)
    return _apply_rotation(m * fm.eps_F * drive.T, fm.n_hat, init)


def _half_cycle_unitary(mode: MomentumMode, lam: float, t: float) -> np.ndarray:
    """exp(-i H_k(lam) t) by exact 2x2 Pauli rotation."""
    hz = lam - mode.b
    hx = mode.Delta
    E = np.hypot(hz, hx)
    if E == 0.0:
        return np.eye(2, dtype=complex)
    n_dot_tau = (hx * TAU_X + hz * TAU_Z) / E
    return np.cos(E * t) * np.eye(2) - 1j * np.sin(E * t) * n_dot_tau


def one_cycle_unitary(mode: MomentumMode, drive: DriveProtocol, params: XYParams) -> np.ndarray:
    """Brute-force one-cycle unitary: product of the two half-cycle rotations."""
    Up = _half_cycle_unitary(mode, +drive.lambda0, 0.5 * drive.T)
    Um = _half_cycle_unitary(mode, -drive.lambda0, 0.5 * drive.T)
    return Um @ Up


def evolve_mode_oracle(
    mode: MomentumMode, drive: DriveProtocol, params: XYParams, m: int, init: ModeState
) -> ModeState:
    """Repeated half-cycle multiplication; independent of floquet_mode."""
    if m < 0:
        raise ValueError("cycle count must be >= 0")
    U = one_cycle_unitary(mode, drive, params)
    # one Newton polar step: removes the ~1e-16 scale error of the product,
    # which otherwise grows linearly over 10^4 repeated multiplications
    U = 1.5 * U - 0.5 * (U @ U.conj().T @ U)
    vec = np.array([init.u, init.v], dtype=complex)
    for _ in range(m):
        vec = U @ vec
    return ModeState(vec[0], vec[1])
