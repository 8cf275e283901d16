"""Tests for entropies, X states, concurrence, and constrained partial traces."""

import numpy as np
import pytest

from spinreset.entanglement import (
    XState,
    concurrence_batch,
    concurrence_general,
    concurrence_xstate,
    pxp_two_spin_rdm,
    single_spin_entropy,
    vn_entropy,
    xstate_to_matrix,
    xy_two_spin_rdm,
)
from spinreset.errors import DomainError, NotADensityMatrix, UnsupportedSeparation
from spinreset.pxp import enumerate_constrained_basis
from spinreset.xycorr import TransformSet


def _random_density_matrix(rng, rank=4):
    G = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def _random_xstate(rng):
    # Draw diagonals on the simplex and coherences inside the PSD bounds.
    d = rng.dirichlet(np.ones(4))
    a_plus, a_0a, a_0b, a_minus = d
    a_0 = 0.5 * (a_0a + a_0b)
    b1_mag = rng.uniform(0, np.sqrt(a_plus * a_minus))
    b2_mag = rng.uniform(0, a_0)
    b_1 = b1_mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
    b_2 = b2_mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return XState(a_plus=a_plus, a_0=a_0, a_minus=a_minus, b_1=b_1, b_2=b_2)


# ---------------------------------------------------------------------------
# entropies
# ---------------------------------------------------------------------------


def test_single_spin_entropy_values():
    assert single_spin_entropy(0.0) == 0.0
    assert single_spin_entropy(1.0) == 0.0
    assert single_spin_entropy(0.5) == pytest.approx(np.log(2.0), abs=1e-14)
    assert single_spin_entropy(0.1) == pytest.approx(0.3250829733914482, abs=1e-12)
    with pytest.raises(DomainError):
        single_spin_entropy(1.2)
    with pytest.raises(DomainError):
        single_spin_entropy(-0.2)


def test_vn_entropy_matches_binary_entropy():
    for p in (0.0, 0.1, 0.37, 0.5):
        rho = np.diag([p, 1.0 - p]).astype(complex)
        assert vn_entropy(rho) == pytest.approx(single_spin_entropy(p), abs=1e-13)
    with pytest.raises(NotADensityMatrix):
        vn_entropy(np.diag([1.5, -0.5]))


def test_vn_entropy_basis_invariance():
    rng = np.random.default_rng(0)
    rho = _random_density_matrix(rng)
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    U, _ = np.linalg.qr(G)
    assert vn_entropy(U @ rho @ U.conj().T) == pytest.approx(vn_entropy(rho), abs=1e-11)


# ---------------------------------------------------------------------------
# X states and concurrence
# ---------------------------------------------------------------------------


def test_xstate_matrix_layout():
    x = XState(a_plus=0.4, a_0=0.2, a_minus=0.2, b_1=0.1 + 0.05j, b_2=0.03j)
    rho = xstate_to_matrix(x)
    assert rho[0, 0] == 0.4 and rho[3, 3] == 0.2
    assert rho[1, 1] == rho[2, 2] == 0.2
    assert rho[0, 3] == 0.1 + 0.05j and rho[3, 0] == 0.1 - 0.05j
    assert rho[1, 2] == 0.03j and rho[2, 1] == -0.03j
    assert np.trace(rho) == pytest.approx(1.0)


def test_xstate_validate_rejects_bad_states():
    with pytest.raises(NotADensityMatrix):
        XState(0.5, 0.2, 0.3, 0.0, 0.0).validate()  # trace 1.2
    with pytest.raises(NotADensityMatrix):
        XState(0.25, 0.25, 0.25, 0.0, 0.5).validate()  # |b_2| > a_0
    with pytest.raises(NotADensityMatrix):
        XState(0.25, 0.25, 0.25, 0.4, 0.0).validate()  # |b_1|^2 > a_+ a_-


def test_bell_and_werner_concurrence():
    # Bell state |Phi+> has C = 1.
    bell = np.zeros((4, 4), dtype=complex)
    bell[0, 0] = bell[3, 3] = bell[0, 3] = bell[3, 0] = 0.5
    assert concurrence_general(bell) == pytest.approx(1.0, abs=1e-12)
    # Werner mixture p|Phi+><Phi+| + (1-p) I/4 has C = max(0, (3p-1)/2).
    for p, expect in ((0.6, 0.4), (0.2, 0.0), (1.0 / 3.0, 0.0)):
        rho = p * bell + (1.0 - p) * np.eye(4) / 4.0
        assert concurrence_general(rho) == pytest.approx(expect, abs=1e-12)


def test_xstate_fast_path_matches_general():
    rng = np.random.default_rng(42)
    for _ in range(300):
        x = _random_xstate(rng)
        c_fast = concurrence_xstate(x)
        c_gen = concurrence_general(xstate_to_matrix(x))
        assert c_fast == pytest.approx(c_gen, abs=1e-11)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(9)
    for _ in range(20):
        rho = _random_density_matrix(rng, rank=2)
        c0 = concurrence_general(rho)
        us = []
        for _ in range(2):
            g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, _ = np.linalg.qr(g)
            us.append(q)
        U = np.kron(us[0], us[1])
        assert concurrence_general(U @ rho @ U.conj().T) == pytest.approx(c0, abs=1e-7)


def test_concurrence_agrees_with_ppt():
    # For two qubits, zero concurrence <=> positive partial transpose.
    rng = np.random.default_rng(17)
    for _ in range(200):
        rho = _random_density_matrix(rng, rank=int(rng.integers(1, 5)))
        c = concurrence_general(rho)
        pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        min_eig = np.linalg.eigvalsh(pt)[0]
        if c > 1e-8:
            assert min_eig < 1e-10
        if min_eig > 1e-8:
            assert c < 1e-10


def test_concurrence_batch_matches_scalar():
    rng = np.random.default_rng(33)
    rhos = np.stack([_random_density_matrix(rng) for _ in range(50)])
    batch = concurrence_batch(rhos)
    for i in range(50):
        assert batch[i] == pytest.approx(concurrence_general(rhos[i]), abs=1e-11)


def test_concurrence_general_input_validation():
    with pytest.raises(NotADensityMatrix):
        concurrence_general(np.eye(3) / 3.0)
    with pytest.raises(NotADensityMatrix):
        concurrence_general(np.eye(4))  # trace 4
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 0.3  # not Hermitian
    with pytest.raises(NotADensityMatrix):
        concurrence_general(bad)


# ---------------------------------------------------------------------------
# XY two-spin reduced density matrix
# ---------------------------------------------------------------------------


def _transforms(a0, a1, a2, F1, F2):
    return TransformSet(alpha_0=a0, alpha_1=a1, alpha_2=a2, F_1=F1, F_2=F2, mode="integral")


def test_xy_rdm_vacuum_is_all_down():
    ts = _transforms(0.0, 0.0, 0.0, 0j, 0j)
    x = xy_two_spin_rdm(1, ts).validate()
    rho = xstate_to_matrix(x)
    assert np.allclose(rho, np.diag([0, 0, 0, 1.0]))
    x2 = xy_two_spin_rdm(2, ts).validate()
    assert np.allclose(xstate_to_matrix(x2), np.diag([0, 0, 0, 1.0]))


def test_xy_rdm_full_band_is_all_up():
    ts = _transforms(1.0, 0.0, 0.0, 0j, 0j)
    for l in (1, 2):
        rho = xstate_to_matrix(xy_two_spin_rdm(l, ts).validate())
        assert np.allclose(rho, np.diag([1.0, 0, 0, 0]))


def test_xy_rdm_rejects_bad_separation():
    ts = _transforms(0.3, 0.1, 0.05, 0.01j, 0.02j)
    for l in (0, 3, -1):
        with pytest.raises(UnsupportedSeparation):
            xy_two_spin_rdm(l, ts)


def test_xy_rdm_single_spin_marginal():
    # Tracing out the second spin must leave diag(alpha_0, 1 - alpha_0).
    ts = _transforms(0.31, 0.12, -0.04, 0.05 + 0.02j, -0.01 + 0.03j)
    for l in (1, 2):
        rho = xstate_to_matrix(xy_two_spin_rdm(l, ts))
        rho1 = rho.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
        assert rho1[0, 0] == pytest.approx(ts.alpha_0, abs=1e-13)
        assert rho1[1, 1] == pytest.approx(1.0 - ts.alpha_0, abs=1e-13)
        assert abs(rho1[0, 1]) < 1e-13


# ---------------------------------------------------------------------------
# PXP constrained partial trace
# ---------------------------------------------------------------------------


def _embed_full(psi, configs, L):
    full = np.zeros(1 << L, dtype=complex)
    full[configs] = psi
    return full


def _exact_rdm(full, L, i, j):
    # Reorder axes so sites i, j come first (site s <-> bit (1 << s), so axis
    # order in reshape is site L-1 ... site 0).
    t = full.reshape((2,) * L)
    axes_sites = [L - 1 - s for s in range(L)]  # axis index of each site
    order = [axes_sites[i], axes_sites[j]] + [a for s, a in enumerate(axes_sites) if s not in (i, j)]
    t = np.transpose(t, order).reshape(4, -1)
    # bit value 1 = up; local basis here is (up,up),(up,down),(down,up),(down,down)
    # while bit-major reshape gives (0,0),(0,1),(1,0),(1,1) with 0 = down bit
    t = t[::-1]
    # reversing maps (n_i n_j) = (1,1),(1,0),(0,1),(0,0) -> |uu>,|ud>,|du>,|dd>
    return t @ t.conj().T


def test_pxp_rdm_trivials():
    L = 8
    basis = enumerate_constrained_basis(L)
    rng = np.random.default_rng(4)
    psi = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    psi /= np.linalg.norm(psi)
    rho = pxp_two_spin_rdm(psi, basis.configs, L, 0, 1)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-13
    assert np.linalg.eigvalsh(rho)[0] > -1e-13
    # adjacent sites can never both be up in the constrained space
    assert abs(rho[0, 0]) < 1e-14
    assert np.max(np.abs(rho[0])) < 1e-14 and np.max(np.abs(rho[:, 0])) < 1e-14


def test_pxp_rdm_matches_full_space_partial_trace():
    L = 12
    basis = enumerate_constrained_basis(L)
    rng = np.random.default_rng(8)
    psi = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    psi /= np.linalg.norm(psi)
    full = _embed_full(psi, basis.configs, L)
    for (i, j) in ((0, 1), (0, 2), (3, 5), (10, 0)):
        rho = pxp_two_spin_rdm(psi, basis.configs, L, i, j)
        exact = _exact_rdm(full, L, i, j)
        assert np.max(np.abs(rho - exact)) < 1e-12, (i, j)


def test_pxp_rdm_projected_dressing():
    L = 10
    basis = enumerate_constrained_basis(L)
    rng = np.random.default_rng(13)
    psi = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    psi /= np.linalg.norm(psi)
    i, j = 2, 4
    nbrs = [1, 3, 5]
    keep = np.ones(basis.dim, dtype=bool)
    for s in nbrs:
        keep &= (basis.configs >> s) & 1 == 0
    expected = pxp_two_spin_rdm(np.where(keep, psi, 0.0), basis.configs, L, i, j)
    got = pxp_two_spin_rdm(psi, basis.configs, L, i, j, dressing="projected")
    assert np.max(np.abs(got - expected)) < 1e-14
    # trace <= 1 (contributions dropped) with equality iff nothing is dropped
    assert np.trace(got).real <= 1.0 + 1e-12
    with pytest.raises(ValueError):
        pxp_two_spin_rdm(psi, basis.configs, L, i, j, dressing="bogus")
    with pytest.raises(ValueError):
        pxp_two_spin_rdm(psi, basis.configs, L, 3, 3)


def test_pxp_rdm_all_down_product_state():
    L = 8
    basis = enumerate_constrained_basis(L)
    psi = np.zeros(basis.dim)
    psi[np.searchsorted(basis.configs, 0)] = 1.0
    rho = pxp_two_spin_rdm(psi, basis.configs, L, 1, 3)
    assert np.allclose(rho, np.diag([0, 0, 0, 1.0]), atol=1e-14)
