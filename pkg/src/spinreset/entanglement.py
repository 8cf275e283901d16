"""Entropy and concurrence from one- and two-spin reduced density matrices.

The two-spin reduced density matrix of the driven XY chain in the basis
|up up>, |up down>, |down up>, |down down> has an X shape with equal middle
diagonal entries,

    [[a_plus, 0,     0,      b_1 ],
     [0,      a_0,   b_2,    0   ],
     [0,      b_2*,  a_0,    0   ],
     [b_1*,   0,     0,      a_minus]],

assembled from the momentum transforms alpha_p, F_p.  Concurrence is
Wootters' entanglement monotone, with a closed form on X states:
C = 2 max{0, |b_1| - a_0, |b_2| - sqrt(a_plus a_minus)}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotADensityMatrix, UnsupportedSeparation
from .xycorr import TransformSet

EIG_CLIP = 1e-9
SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=float,
)


@dataclass(frozen=True)
class XState:
    """Two-spin X-shaped density matrix with equal middle diagonal entries."""

    a_plus: float
    a_0: float
    a_minus: float
    b_1: complex
    b_2: complex

    def validate(self, tol: float = 1e-9) -> "XState":
        tr = self.a_plus + 2 * self.a_0 + self.a_minus
        if abs(tr - 1.0) > tol:
            raise NotADensityMatrix(f"X-state trace {tr} deviates from 1")
        if self.a_0 < abs(self.b_2) - tol:
            raise NotADensityMatrix("inner X block not positive semidefinite")
        if self.a_plus * self.a_minus < abs(self.b_1) ** 2 - tol:
            raise NotADensityMatrix("outer X block not positive semidefinite")
        return self


def xstate_to_matrix(x: XState) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = x.a_plus
    rho[1, 1] = rho[2, 2] = x.a_0
    rho[3, 3] = x.a_minus
    rho[0, 3] = x.b_1
    rho[3, 0] = np.conj(x.b_1)
    rho[1, 2] = x.b_2
    rho[2, 1] = np.conj(x.b_2)
    return rho


def single_spin_entropy(alpha_0: float) -> float:
    """Von Neumann entropy (nats) of one spin with up-occupation alpha_0."""
    if alpha_0 < -EIG_CLIP or alpha_0 > 1.0 + EIG_CLIP:
        raise DomainError(f"occupation {alpha_0} outside [0, 1]")
    p = min(max(alpha_0, 0.0), 1.0)
    terms = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            terms -= q * np.log(q)
    return float(terms)


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy (nats) of a density matrix, small negatives clipped."""
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -EIG_CLIP:
        raise NotADensityMatrix(f"negative eigenvalue {evals[0]}")
    evals = np.clip(evals, 0.0, None)
    nz = evals[evals > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def xy_two_spin_rdm(l: int, transforms: TransformSet) -> XState:
    """Two-spin X state at separation l in {1, 2} from momentum transforms."""
    if l not in (1, 2):
        raise UnsupportedSeparation(f"separation must be 1 or 2, got {l}")
    a0 = transforms.alpha_0
    al = transforms.alpha(l)
    Fl = transforms.F(l)
    a_plus = a0 * a0 - al * al + abs(Fl) ** 2
    a_minus = 1.0 - 2.0 * a0 + a_plus
    a_mid = a0 - a_plus
    if l == 1:
        b_1 = transforms.F_1
        b_2 = complex(transforms.alpha_1)
    else:
        a1, a2 = transforms.alpha_1, transforms.alpha_2
        F1, F2 = transforms.F_1, transforms.F_2
        b_1 = 2.0 * (F2 * a0 - 2.0 * F1 * a1) - F2
        b_2 = 2.0 * (a1 * a1 - a2 * a0 + abs(F1) ** 2) + a2
    return XState(a_plus=a_plus, a_0=a_mid, a_minus=a_minus, b_1=complex(b_1), b_2=complex(b_2))


def _check_density_matrix(rho: np.ndarray, tol_herm=1e-10, tol_tr=1e-9):
    if rho.shape != (4, 4):
        raise NotADensityMatrix(f"expected 4x4 matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol_herm:
        raise NotADensityMatrix("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol_tr:
        raise NotADensityMatrix(f"trace {np.trace(rho)} deviates from 1")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -EIG_CLIP:
        raise NotADensityMatrix(f"negative eigenvalue {evals[0]}")


def concurrence_general(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix."""
    _check_density_matrix(rho)
    rho_tilde = SIGMA_YY @ rho.conj() @ SIGMA_YY
    lam = np.linalg.eigvals(rho @ rho_tilde).real
    lam = np.sort(np.clip(lam, 0.0, None))[::-1]
    roots = np.sqrt(lam)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def concurrence_xstate(x: XState) -> float:
    """Closed-form Wootters concurrence of an X state."""
    x.validate()
    ap = max(x.a_plus, 0.0)
    am = max(x.a_minus, 0.0)
    c = 2.0 * max(0.0, abs(x.b_1) - x.a_0, abs(x.b_2) - np.sqrt(ap * am))
    return float(c)


def pxp_two_spin_rdm(
    psi: np.ndarray,
    configs: np.ndarray,
    L: int,
    i: int,
    j: int,
    dressing: str = "plain",
) -> np.ndarray:
    """Two-site reduced density matrix of a constrained-basis state.

    psi: amplitudes over configs (bitmask integers, site s <-> bit (1 << s),
    periodic chain of length L).  Basis order of the returned 4x4 matrix is
    |up up>, |up down>, |down up>, |down down> with site i in the first slot.

    dressing="plain" is the straight partial trace (trace exactly 1);
    dressing="projected" dresses every local operator with projectors onto
    down neighbors, dropping contributions from configurations where any
    neighbor of i or j (outside the pair) is up.
    """
    if dressing not in ("plain", "projected"):
        raise ValueError(f"dressing must be 'plain' or 'projected', got {dressing!r}")
    if (i - j) % L == 0:
        raise ValueError("sites must be distinct")
    amps = np.asarray(psi, dtype=complex)
    conf = np.asarray(configs, dtype=np.int64)
    if dressing == "projected":
        nbrs = {(i - 1) % L, (i + 1) % L, (j - 1) % L, (j + 1) % L} - {i % L, j % L}
        keep = np.ones(conf.shape, dtype=bool)
        for s in nbrs:
            keep &= (conf >> s) & 1 == 0
        amps = np.where(keep, amps, 0.0)
    n_i = (conf >> (i % L)) & 1
    n_j = (conf >> (j % L)) & 1
    local = (1 - n_i) * 2 + (1 - n_j)
    rest = conf & ~np.int64((1 << (i % L)) | (1 << (j % L)))
    _, group = np.unique(rest, return_inverse=True)
    A = np.zeros((group.max() + 1, 4), dtype=complex)
    np.add.at(A, (group, local), amps)
    return A.T @ A.conj()


def concurrence_batch(rhos: np.ndarray) -> np.ndarray:
    """Wootters concurrence for a stack of 4x4 density matrices, shape (n,4,4)."""
    rho_tilde = SIGMA_YY @ rhos.conj() @ SIGMA_YY
    lam = np.linalg.eigvals(rhos @ rho_tilde).real
    lam = np.sort(np.clip(lam, 0.0, None), axis=1)[:, ::-1]
    roots = np.sqrt(lam)
    out = roots[:, 0] - roots[:, 1:].sum(axis=1)
    return np.maximum(out, 0.0)
