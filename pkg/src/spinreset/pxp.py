"""Exact diagonalization of the driven PXP ring.

The Hilbert space is the Rydberg-constrained space (no two adjacent up
spins on a periodic chain); its dimension is the Lucas number of L.  The
drive square-pulses the longitudinal field, alternating between

    H_pm = sum_j ( w sigma~_j^x  -/+  lambda0 sigma_j^z ),

where sigma~ = P sigma^x P is the neighbor-projected flip.  Dynamics are
computed in the zero-momentum, reflection-even symmetry sector reachable
from the all-down initial state; observables are evaluated after expanding
back to the full constrained basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .config import PXPParams
from .errors import EmptyWindow, SizeOutOfRange

UNITARITY_TOL = 1e-10


# ---------------------------------------------------------------------------
# constrained basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstrainedBasis:
    """All L-bit ring configurations without adjacent up spins, ascending."""

    L: int
    configs: np.ndarray  # int64 bitmasks, site s <-> bit (1 << s)

    @cached_property
    def index(self) -> dict:
        return {int(c): i for i, c in enumerate(self.configs)}

    @property
    def dim(self) -> int:
        return len(self.configs)


def enumerate_constrained_basis(L: int) -> ConstrainedBasis:
    """Generate the constrained ring basis by appending one site at a time."""
    if L < 2 or L > 28 or L % 2 != 0:
        raise SizeOutOfRange(f"chain length must be even and in [2, 28], got {L}")
    configs = np.array([0, 1], dtype=np.int64)  # one-site open chain
    for _ in range(L - 1):
        shifted = configs << 1
        extendable = shifted[configs & 1 == 0] | 1
        configs = np.concatenate([shifted, extendable])
    # close the ring: forbid simultaneous occupation of the two ends
    ends = (configs & 1).astype(bool) & ((configs >> (L - 1)) & 1).astype(bool)
    configs = np.sort(configs[~ends])
    return ConstrainedBasis(L=L, configs=configs)


def _rotate_left(x: int, L: int) -> int:
    return ((x << 1) | (x >> (L - 1))) & ((1 << L) - 1)


def _reflect(x: int, L: int) -> int:
    y = 0
    for i in range(L):
        if (x >> i) & 1:
            y |= 1 << (L - 1 - i)
    return y


# ---------------------------------------------------------------------------
# symmetry sector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetrySector:
    """Zero-momentum, reflection-even sector of the constrained ring basis.

    Sector basis state r is the equal-weight sum over the dihedral orbit of
    its representative: |r> = N_r^{-1/2} sum_{x in orbit} |x>.
    """

    basis: ConstrainedBasis
    reps: np.ndarray  # orbit representatives (minimal bitmask), int64
    orbit_sizes: np.ndarray  # number of distinct configurations per orbit
    sector_of_config: np.ndarray  # sector index for every basis config

    @cached_property
    def rep_index(self) -> dict:
        return {int(r): i for i, r in enumerate(self.reps)}

    @property
    def dim(self) -> int:
        return len(self.reps)

    def expansion_matrix(self) -> np.ndarray:
        """Dense (basis.dim x dim) isometry from sector to constrained basis."""
        E = np.zeros((self.basis.dim, self.dim))
        norms = 1.0 / np.sqrt(self.orbit_sizes)
        E[np.arange(self.basis.dim), self.sector_of_config] = norms[self.sector_of_config]
        return E

    def expand(self, psi_sector: np.ndarray) -> np.ndarray:
        """Lift a sector state to amplitudes over the full constrained basis."""
        return psi_sector[self.sector_of_config] / np.sqrt(self.orbit_sizes[self.sector_of_config])

    def all_down_state(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.rep_index[0]] = 1.0
        return psi


def build_symmetry_sector(basis: ConstrainedBasis, K: int = 0, P: int = +1) -> SymmetrySector:
    """Dihedral-orbit sector; only (K=0, P=+1) is implemented."""
    if (K, P) != (0, 1):
        raise NotImplementedError("only the K=0, P=+1 sector is supported")
    L = basis.L
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    sizes: list[int] = []
    for c in map(int, basis.configs):
        if c in rep_of:
            continue
        orbit = set()
        x = c
        for _ in range(L):
            orbit.add(x)
            orbit.add(_reflect(x, L))
            x = _rotate_left(x, L)
        r = min(orbit)
        idx = len(reps)
        reps.append(r)
        sizes.append(len(orbit))
        for x in orbit:
            rep_of[x] = idx
    sector_of = np.array([rep_of[int(c)] for c in basis.configs], dtype=np.int64)
    return SymmetrySector(
        basis=basis,
        reps=np.array(reps, dtype=np.int64),
        orbit_sizes=np.array(sizes, dtype=np.int64),
        sector_of_config=sector_of,
    )


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def build_pxp_hamiltonian(params: PXPParams, lam: float, sector: SymmetrySector) -> np.ndarray:
    """Sector matrix of sum_j (w sigma~_j^x - lam sigma_j^z); pass -lam for the
    other half cycle."""
    L = sector.basis.L
    w = params.w
    n = sector.dim
    H = np.zeros((n, n))
    sizes = sector.orbit_sizes.astype(float)
    rep_index = sector.rep_index
    sector_of = {int(c): rep_of for c, rep_of in zip(sector.basis.configs, sector.sector_of_config)}
    for a, r in enumerate(map(int, sector.reps)):
        pop = bin(r).count("1")
        H[a, a] += -lam * (2 * pop - L)
        for j in range(L):
            jm, jp = (j - 1) % L, (j + 1) % L
            if (r >> jm) & 1 == 0 and (r >> jp) & 1 == 0:
                b = sector_of[r ^ (1 << j)]
                H[b, a] += w * np.sqrt(sizes[a] / sizes[b])
    return H


def build_pxp_hamiltonian_full(basis: ConstrainedBasis, w: float, lam: float) -> np.ndarray:
    """Oracle: the same Hamiltonian over the full constrained basis."""
    L = basis.L
    n = basis.dim
    H = np.zeros((n, n))
    index = basis.index
    for a, c in enumerate(map(int, basis.configs)):
        pop = bin(c).count("1")
        H[a, a] += -lam * (2 * pop - L)
        for j in range(L):
            jm, jp = (j - 1) % L, (j + 1) % L
            if (c >> jm) & 1 == 0 and (c >> jp) & 1 == 0:
                H[index[c ^ (1 << j)], a] += w
    return H


# ---------------------------------------------------------------------------
# Floquet operator and stroboscopic evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FloquetOperator:
    """One-cycle unitary with a unitary eigendecomposition U = Z diag(e^{i theta}) Z^dag."""

    U: np.ndarray
    Z: np.ndarray  # unitary eigenvector matrix (Schur vectors)
    theta: np.ndarray  # eigenphases in (-pi, pi]
    T: float

    @property
    def quasienergies(self) -> np.ndarray:
        """eps^F with U = exp(-i H_F T): eps = -theta / T, folded to the FBZ."""
        return -self.theta / self.T

    @property
    def quasienergies_arccos(self) -> np.ndarray:
        """|eps^F| via arccos of the real part of the eigenvalue (branch-free)."""
        return np.arccos(np.clip(np.cos(self.theta), -1.0, 1.0)) / self.T


def half_cycle_unitary(H: np.ndarray, half_T: float) -> np.ndarray:
    evals, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(-1j * evals * half_T)) @ vecs.conj().T


def floquet_operator(H_plus: np.ndarray, H_minus: np.ndarray, T: float) -> FloquetOperator:
    """U = exp(-i H_- T/2) exp(-i H_+ T/2), eigendecomposed via a Schur form.

    U is normal, so its complex Schur form is diagonal and the Schur vectors
    are a genuinely unitary eigenbasis (np.linalg.eig does not guarantee
    orthogonal eigenvectors at near-degeneracies).
    """
    U = half_cycle_unitary(H_minus, T / 2) @ half_cycle_unitary(H_plus, T / 2)
    dev = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if dev > UNITARITY_TOL:
        raise np.linalg.LinAlgError(f"Floquet operator not unitary, deviation {dev:.2e}")
    Tschur, Z = scipy.linalg.schur(U, output="complex")
    theta = np.angle(np.diag(Tschur))
    return FloquetOperator(U=U, Z=Z, theta=theta, T=T)


def stroboscopic_state(flo: FloquetOperator, init: np.ndarray, m: int) -> np.ndarray:
    """|psi(mT)> via phases applied in the Floquet eigenbasis."""
    alpha = flo.Z.conj().T @ init
    return flo.Z @ (np.exp(1j * flo.theta * m) * alpha)


def stroboscopic_states(flo: FloquetOperator, init: np.ndarray, ms: np.ndarray) -> np.ndarray:
    """Stack of |psi(mT)> for many cycle counts, shape (len(ms), dim)."""
    alpha = flo.Z.conj().T @ init
    phases = np.exp(1j * np.outer(np.asarray(ms), flo.theta))
    return (phases * alpha) @ flo.Z.T


def stroboscopic_state_oracle(flo: FloquetOperator, init: np.ndarray, m: int) -> np.ndarray:
    """Repeated matrix multiplication; independent of the eigendecomposition."""
    psi = init.astype(complex)
    for _ in range(m):
        psi = flo.U @ psi
    return psi


def prethermal_average(series: np.ndarray, window: tuple[int, int] = (1001, 1100)) -> float:
    """Arithmetic mean of series[m] over the inclusive cycle window."""
    m_lo, m_hi = window
    if m_lo < 1 or m_hi < m_lo:
        raise EmptyWindow(f"invalid window [{m_lo}, {m_hi}]")
    series = np.asarray(series)
    if m_hi >= len(series):
        raise EmptyWindow(f"window [{m_lo}, {m_hi}] exceeds series of length {len(series)}")
    return float(np.mean(series[m_lo : m_hi + 1]))
