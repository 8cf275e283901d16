"""Mode correlators of the driven XY chain and their momentum transforms.

The two independent correlators of a paired mode,

    C_d(mT) = <c_k^dag c_k> = |v_k(mT)|^2,      C_o(mT) = <c_k c_{-k}> = u*_k v_k,

are exact trigonometric polynomials of the stroboscopic phase
chi = m |eps_k^F| T:

    C(mT) = C^GGE + C^odd sin(2 chi) + C^even cos(2 chi).

The three coefficients are extracted exactly by evaluating the analytic
rotation U(chi) = cos(chi) I - i sin(chi) (n.tau) at chi = 0, pi/4, pi/2;
since the functional form above is exact, this is a closed form, not a fit.

Momentum transforms feeding the reduced density matrices:

    alpha_p = (1/pi) int_0^pi cos(p k) C_d dk
    F_p     = -(1/pi) int_0^pi sin(p k) C_o dk

(the full-Brillouin-zone sums over +/-k reduce to these on (0, pi)).
In finite-size mode the integral becomes (2/L) sum over the APBC grid
k = (2n-1) pi / L, n = 1..L/2, normalized so that alpha_0 is the mean
occupation in both modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DriveProtocol, XYParams
from .errors import QuadratureNotConverged
from .xyfloquet import MomentumMode, ModeState, _floquet_arrays

GL_NODES_PER_PANEL = 32
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES_PER_PANEL)


@dataclass(frozen=True)
class CorrelatorDecomposition:
    """GGE / odd / even pieces of C_d and C_o for one mode (or arrays of modes)."""

    eps_T: np.ndarray  # |eps_k^F| * T
    d_gge: np.ndarray
    d_odd: np.ndarray
    d_even: np.ndarray
    o_gge: np.ndarray
    o_odd: np.ndarray
    o_even: np.ndarray


def _mode_correlators(chi, nx, ny, nz, u0, v0):
    """C_d, C_o after rotation by angle chi about n, from initial (u0, v0)."""
    c, s = np.cos(chi), np.sin(chi)
    u = (c - 1j * s * nz) * u0 + (-1j * s * (nx - 1j * ny)) * v0
    v = (-1j * s * (nx + 1j * ny)) * u0 + (c + 1j * s * nz) * v0
    return np.abs(v) ** 2, np.conj(u) * v


def _decomposition_arrays(ks, drive: DriveProtocol, params: XYParams, init: ModeState):
    epsT, nx, ny, nz, _ = _floquet_arrays(ks, drive, params)
    u0, v0 = complex(init.u), complex(init.v)
    shape = np.shape(epsT)
    samples = {}
    for chi in (0.0, np.pi / 4, np.pi / 2):
        samples[chi] = _mode_correlators(np.full(shape, chi), nx, ny, nz, u0, v0)
    out = []
    for ch in (0, 1):  # d then o
        f0 = samples[0.0][ch]
        fq = samples[np.pi / 4][ch]
        fh = samples[np.pi / 2][ch]
        gge = 0.5 * (f0 + fh)
        even = 0.5 * (f0 - fh)
        odd = fq - gge
        out.append((gge, odd, even))
    (dg, do, de), (og, oo, oe) = out
    return CorrelatorDecomposition(
        eps_T=epsT,
        d_gge=dg.real,
        d_odd=do.real,
        d_even=de.real,
        o_gge=og,
        o_odd=oo,
        o_even=oe,
    )


def correlator_decomposition(
    mode: MomentumMode, drive: DriveProtocol, params: XYParams, init: ModeState = ModeState.ALL_DOWN
) -> CorrelatorDecomposition:
    """Exact GGE/odd/even decomposition of one mode's correlators."""
    return _decomposition_arrays(np.array([mode.k]), drive, params, init)


def correlators_at_cycle(decomp: CorrelatorDecomposition, m: int):
    """Reconstruct (C_d, C_o) at cycle m from the decomposition."""
    if m < 0:
        raise ValueError("cycle count must be >= 0")
    chi2 = 2.0 * m * decomp.eps_T
    s, c = np.sin(chi2), np.cos(chi2)
    Cd = decomp.d_gge + decomp.d_odd * s + decomp.d_even * c
    Co = decomp.o_gge + decomp.o_odd * s + decomp.o_even * c
    return Cd, Co


# ---------------------------------------------------------------------------
# time specifications for transform evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtCycle:
    m: int


@dataclass(frozen=True)
class GGE:
    pass


@dataclass(frozen=True)
class ResetAtCycle:
    r: float
    m: int


@dataclass(frozen=True)
class ResetSteady:
    r: float


def correlators_at(decomp: CorrelatorDecomposition, timespec, T: float):
    """Resolve (C_d, C_o) arrays at a plain, GGE, or reset-averaged time."""
    from . import reset as _reset  # local import; reset depends on this module's types

    if isinstance(timespec, AtCycle):
        return correlators_at_cycle(decomp, timespec.m)
    if isinstance(timespec, GGE):
        return decomp.d_gge, decomp.o_gge
    if isinstance(timespec, ResetAtCycle):
        return _reset.reset_average_correlators(decomp, timespec.r, timespec.m, T)
    if isinstance(timespec, ResetSteady):
        return _reset.reset_steady_state_correlators(decomp, timespec.r, T)
    raise TypeError(f"unknown time spec {timespec!r}")


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformSet:
    """The transforms needed by the two-spin density matrices."""

    alpha_0: float
    alpha_1: float
    alpha_2: float
    F_1: complex
    F_2: complex
    mode: str  # "integral" | "discrete"

    def alpha(self, p: int) -> float:
        return (self.alpha_0, self.alpha_1, self.alpha_2)[abs(p)]

    def F(self, p: int) -> complex:
        if p == 0:
            return 0.0 + 0.0j
        val = (self.F_1, self.F_2)[abs(p) - 1]
        return val if p > 0 else -val


def _kernel_values(ks, Cd, Co):
    """Stack the seven integrands: alpha_0..2 (cos kernels) and Re/Im F_1..2."""
    rows = [Cd, np.cos(ks) * Cd, np.cos(2 * ks) * Cd]
    for p in (1, 2):
        f = -np.sin(p * ks) * Co
        rows.extend([f.real, f.imag])
    return np.vstack(rows)


def _pack(values, mode: str) -> TransformSet:
    a0, a1, a2, f1r, f1i, f2r, f2i = values
    return TransformSet(
        alpha_0=float(a0),
        alpha_1=float(a1),
        alpha_2=float(a2),
        F_1=complex(f1r, f1i),
        F_2=complex(f2r, f2i),
        mode=mode,
    )


class XYTransformContext:
    """Evaluates transform sets for one (drive, params, init) combination.

    Thermodynamic limit: adaptive composite Gauss-Legendre quadrature on
    (0, pi), panels bisected where the local two-level difference exceeds
    the tolerance (the correlators sharpen around k = pi/2 at special
    frequencies).  Finite L: exact discrete sum on the APBC grid.
    """

    def __init__(
        self,
        drive: DriveProtocol,
        params: XYParams,
        init: ModeState = ModeState.ALL_DOWN,
        tol: float = 1e-9,
        max_nodes: int = 1 << 16,
        initial_panels: int = 16,
    ):
        self.drive = drive
        self.params = params
        self.init = init
        self.tol = tol
        self.max_nodes = max_nodes
        self.initial_panels = initial_panels
        self._decomp_cache: dict[tuple, CorrelatorDecomposition] = {}

    @property
    def discrete(self) -> bool:
        return self.params.L is not None

    def _decomposition(self, ks_key, ks) -> CorrelatorDecomposition:
        if ks_key not in self._decomp_cache:
            self._decomp_cache[ks_key] = _decomposition_arrays(ks, self.drive, self.params, self.init)
        return self._decomp_cache[ks_key]

    def _panel_value(self, a: float, b: float, timespec) -> np.ndarray:
        ks = 0.5 * (b - a) * _GL_X + 0.5 * (a + b)
        decomp = self._decomposition((a, b), ks)
        Cd, Co = correlators_at(decomp, timespec, self.drive.T)
        vals = _kernel_values(ks, Cd, Co)
        return vals @ _GL_W * (0.5 * (b - a) / np.pi)

    def transforms(self, timespec) -> TransformSet:
        if self.discrete:
            L = self.params.L
            ks = (2 * np.arange(1, L // 2 + 1) - 1) * np.pi / L
            decomp = self._decomposition(("discrete", L), ks)
            Cd, Co = correlators_at(decomp, timespec, self.drive.T)
            vals = _kernel_values(ks, Cd, Co).sum(axis=1) * (2.0 / L)
            return _pack(vals, "discrete")

        edges = np.linspace(0.0, np.pi, self.initial_panels + 1)
        panels = list(zip(edges[:-1], edges[1:]))
        coarse = {p: self._panel_value(*p, timespec) for p in panels}
        nodes = len(panels) * GL_NODES_PER_PANEL
        while True:
            refined = {}
            errors = {}
            for a, b in panels:
                mid = 0.5 * (a + b)
                lo = self._panel_value(a, mid, timespec)
                hi = self._panel_value(mid, b, timespec)
                refined[(a, b)] = (lo, hi)
                errors[(a, b)] = float(np.max(np.abs(lo + hi - coarse[(a, b)])))
            total_err = sum(errors.values())
            if total_err < self.tol:
                total = sum(v[0] + v[1] for v in refined.values())
                return _pack(total, "integral")
            if nodes >= self.max_nodes:
                raise QuadratureNotConverged(
                    f"transform quadrature stalled at {nodes} nodes, err={total_err:.2e}"
                )
            per_panel = self.tol / len(panels)
            new_panels = []
            for a, b in panels:
                if errors[(a, b)] > per_panel:
                    mid = 0.5 * (a + b)
                    new_panels.extend([(a, mid), (mid, b)])
                    coarse[(a, mid)], coarse[(mid, b)] = refined[(a, b)]
                    nodes += GL_NODES_PER_PANEL
                else:
                    new_panels.append((a, b))
            panels = new_panels

    def with_tol(self, tol: float) -> "XYTransformContext":
        return XYTransformContext(
            self.drive, self.params, self.init, tol, self.max_nodes, self.initial_panels
        )


def transform(channel: str, p: int, timespec, ctx: XYTransformContext) -> complex:
    """Single transform value: alpha_p for channel 'd', F_p for channel 'o'."""
    if channel not in ("d", "o"):
        raise ValueError("channel must be 'd' or 'o'")
    if abs(p) > 2:
        raise ValueError("only |p| <= 2 transforms are implemented")
    ts = ctx.transforms(timespec)
    return ts.alpha(p) if channel == "d" else ts.F(p)
