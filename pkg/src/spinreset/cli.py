"""Batch command-line front end.

Every subcommand reads a config file, writes one CSV of results plus a JSON
manifest with the same basename (full resolved config, seed, timing, and
derived quantities such as r_c / r_m), and exits with

    0   success
    2   configuration error
    3   numerical-convergence failure

Partial outputs are deleted on failure.  Grid points are independent jobs;
with --jobs N they are distributed over a process pool and reassembled in
grid order, so outputs are byte-identical regardless of N.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .analysis import (
    C_THRESHOLD,
    PXPSteadyContext,
    XYSteadyContext,
    critical_rates,
    steady_concurrence_curve,
)
from .config import ValidatedConfig, default_r_grid, load_config
from .entanglement import (
    concurrence_general,
    concurrence_xstate,
    pxp_two_spin_rdm,
    single_spin_entropy,
    vn_entropy,
    xy_two_spin_rdm,
)
from .errors import ConfigError, MissingKey, NumericalError
from .fpt import pxp_fpt_coefficients, special_frequencies, xy_fpt_coefficients
from .pxp import (
    build_pxp_hamiltonian,
    build_pxp_hamiltonian_full,
    build_symmetry_sector,
    enumerate_constrained_basis,
    floquet_operator,
    stroboscopic_states,
)
from .xycorr import AtCycle, ResetAtCycle, XYTransformContext
from .xyfloquet import MomentumMode

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _require_model(cfg: ValidatedConfig, model: str) -> None:
    if cfg.model != model:
        raise MissingKey(f"this subcommand requires model={model.upper()}, config has {cfg.model.upper()}")


def _parse_grid(spec: str, name: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        grid = np.linspace(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise MissingKey(f"--{name} must be LO:HI:N, got {spec!r}") from exc
    if len(grid) == 0 or (len(grid) > 1 and grid[1] <= grid[0]):
        raise MissingKey(f"--{name} must be a nonempty ascending grid")
    return grid


def _r_grid(cfg: ValidatedConfig) -> np.ndarray:
    return np.asarray(cfg.r_grid, dtype=float) if cfg.r_grid else default_r_grid()


def _chunks(values, n):
    n = max(1, min(n, len(values)))
    bounds = np.linspace(0, len(values), n + 1).astype(int)
    return [values[a:b] for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _pool_map(fn, arg_list, jobs: int):
    """Deterministic parallel map: results in argument order."""
    if jobs <= 1 or len(arg_list) <= 1:
        return [fn(a) for a in arg_list]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, arg_list))


# ---------------------------------------------------------------------------
# XY subcommands
# ---------------------------------------------------------------------------


def _xy_evolve(cfg: ValidatedConfig, args) -> tuple[list[str], list[tuple], dict]:
    _require_model(cfg, "xy")
    ctx = XYTransformContext(cfg.drive, cfg.xy, tol=cfg.tolerance)
    r = cfg.reset.r
    rows = []
    for m in range(cfg.m_max + 1):
        spec = AtCycle(m) if r == 0.0 else ResetAtCycle(r, m)
        ts = ctx.transforms(spec)
        c1 = concurrence_xstate(xy_two_spin_rdm(1, ts))
        c2 = concurrence_xstate(xy_two_spin_rdm(2, ts))
        rows.append((m, m * cfg.T, ts.alpha_0, single_spin_entropy(ts.alpha_0), c1, c2))
    if args.check_oracle:
        fine = ctx.with_tol(cfg.tolerance / 100.0).transforms(
            AtCycle(cfg.m_max) if r == 0.0 else ResetAtCycle(r, cfg.m_max)
        )
        drift = abs(fine.alpha_0 - rows[-1][2])
        if drift > 1e-6:
            raise NumericalError(f"quadrature cross-check failed: alpha_0 drift {drift:.2e}")
    header = ["m", "t[hbar/J]", "alpha_0", "entropy[nats]", "concurrence_l1", "concurrence_l2"]
    return header, rows, {"r": r}


def _xy_curve_chunk(payload) -> list[float]:
    cfg, rs = payload
    ctx = XYSteadyContext(cfg.drive, cfg.xy, tol=cfg.tolerance)
    return [ctx.concurrence(float(r)) for r in rs]


def _xy_reset_curve(cfg: ValidatedConfig, args):
    _require_model(cfg, "xy")
    r_grid = _r_grid(cfg)
    C = np.concatenate(_pool_map(_xy_curve_chunk, [(cfg, c) for c in _chunks(r_grid, args.jobs)], args.jobs))
    ctx = XYSteadyContext(cfg.drive, cfg.xy, tol=cfg.tolerance)
    from .analysis import ConcurrenceCurve

    curve = ConcurrenceCurve(r=r_grid, C=C, model="xy", meta=ctx.describe())
    rates = critical_rates(curve, ctx)
    header = ["r[J/hbar]", "C_r_st"]
    rows = list(zip(r_grid, C))
    return header, rows, {
        "r_c": rates.r_c,
        "r_m": rates.r_m,
        "C_max": rates.C_max,
        "C_threshold": C_THRESHOLD,
    }


def _xy_freq_point(payload):
    cfg, omega = payload
    drive = cfg.drive.__class__(lambda0=cfg.drive.lambda0, omega_D=float(omega))
    ctx = XYSteadyContext(drive, cfg.xy, tol=cfg.tolerance)
    curve = steady_concurrence_curve(ctx, _r_grid(cfg))
    rates = critical_rates(curve, ctx)
    return (float(omega), rates.r_c, rates.r_m, rates.C_max)


def _xy_freq_map(cfg: ValidatedConfig, args):
    _require_model(cfg, "xy")
    ratios = _parse_grid(args.omega_ratio_grid, "omega-ratio-grid")
    omegas = ratios * cfg.drive.lambda0
    rows = _pool_map(_xy_freq_point, [(cfg, w) for w in omegas], args.jobs)
    rows = [(o / cfg.drive.lambda0, o, rc, rm, cm) for (o, rc, rm, cm) in rows]
    header = ["omega_ratio", "omega_D[J/hbar]", "r_c[J/hbar]", "r_m[J/hbar]", "C_max"]
    return header, rows, {"C_threshold": C_THRESHOLD}


def _xy_amp_point(payload):
    cfg, lam, ratio = payload
    drive = cfg.drive.__class__(lambda0=float(lam), omega_D=float(ratio * lam))
    ctx = XYSteadyContext(drive, cfg.xy, tol=cfg.tolerance)
    return (float(lam), float(ratio), ctx.concurrence(cfg.reset.r), drive.omega_D)


def _xy_amp_map(cfg: ValidatedConfig, args):
    _require_model(cfg, "xy")
    lams = _parse_grid(args.lambda0_grid, "lambda0-grid")
    ratios = _parse_grid(args.omega_ratio_grid, "omega-ratio-grid")
    payloads = [(cfg, lam, ratio) for lam in lams for ratio in ratios]
    rows = _pool_map(_xy_amp_point, payloads, args.jobs)
    # the first two columns form a rectangular (lambda0, ratio) grid; the
    # absolute frequency is appended for reference
    header = ["lambda0[J]", "omega_ratio", "C_r_st", "omega_D[J/hbar]"]
    return header, rows, {"r": cfg.reset.r}


# ---------------------------------------------------------------------------
# PXP subcommands
# ---------------------------------------------------------------------------


def _pxp_series(cfg: ValidatedConfig):
    basis = enumerate_constrained_basis(cfg.pxp.L)
    sector = build_symmetry_sector(basis)
    H_plus = build_pxp_hamiltonian(cfg.pxp, cfg.drive.lambda0, sector)
    H_minus = build_pxp_hamiltonian(cfg.pxp, -cfg.drive.lambda0, sector)
    flo = floquet_operator(H_plus, H_minus, cfg.T)
    ms = np.arange(cfg.m_max + 1)
    states = stroboscopic_states(flo, sector.all_down_state(), ms)
    rows = []
    for m, psi in zip(ms, states):
        full = sector.expand(psi)
        rho2 = pxp_two_spin_rdm(full, basis.configs, cfg.pxp.L, 0, 2)
        rho1 = rho2.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
        rows.append(
            (int(m), m * cfg.T, vn_entropy(rho1), concurrence_general(rho2))
        )
    return rows, basis, sector, flo


def _pxp_evolve(cfg: ValidatedConfig, args):
    _require_model(cfg, "pxp")
    rows, basis, sector, flo = _pxp_series(cfg)
    if args.check_oracle:
        if cfg.pxp.L > 12:
            raise MissingKey("--check-oracle for pxp-evolve needs L <= 12 (full-space ED)")
        H_plus = build_pxp_hamiltonian_full(basis, cfg.pxp.w, cfg.drive.lambda0)
        H_minus = build_pxp_hamiltonian_full(basis, cfg.pxp.w, -cfg.drive.lambda0)
        flo_full = floquet_operator(H_plus, H_minus, cfg.T)
        init = np.zeros(basis.dim, dtype=complex)
        init[basis.index[0]] = 1.0
        states = stroboscopic_states(flo_full, init, np.arange(cfg.m_max + 1))
        for m, psi in enumerate(states):
            rho2 = pxp_two_spin_rdm(psi, basis.configs, cfg.pxp.L, 0, 2)
            rho1 = rho2.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
            dev = max(
                abs(vn_entropy(rho1) - rows[m][2]),
                abs(concurrence_general(rho2) - rows[m][3]),
            )
            if dev > 1e-9:
                raise NumericalError(f"full-space oracle mismatch {dev:.2e} at m={m}")
    header = ["m", "t[hbar/w]", "entropy_site[nats]", "concurrence_l2"]
    return header, rows, {}


def _pxp_reset_curve(cfg: ValidatedConfig, args):
    _require_model(cfg, "pxp")
    r_grid = _r_grid(cfg)
    ctx = PXPSteadyContext(cfg.drive, cfg.pxp)
    C = np.array([ctx.concurrence(float(r)) for r in r_grid])
    from .analysis import ConcurrenceCurve

    curve = ConcurrenceCurve(r=r_grid, C=C, model="pxp", meta=ctx.describe())
    rates = critical_rates(curve, ctx)
    header = ["r[w/hbar]", "C_r_st"]
    rows = list(zip(r_grid, C))
    return header, rows, {
        "r_c": rates.r_c,
        "r_m": rates.r_m,
        "C_max": rates.C_max,
        "C_threshold": C_THRESHOLD,
        "m_ss": ctx.m_ss,
    }


def _pxp_freq_point(payload):
    cfg, omega = payload
    drive = cfg.drive.__class__(lambda0=cfg.drive.lambda0, omega_D=float(omega))
    ctx = PXPSteadyContext(drive, cfg.pxp)
    curve = steady_concurrence_curve(ctx, _r_grid(cfg))
    rates = critical_rates(curve, ctx)
    return (float(omega), rates.r_c, rates.r_m, rates.C_max)


def _pxp_freq_map(cfg: ValidatedConfig, args):
    _require_model(cfg, "pxp")
    ratios = _parse_grid(args.omega_ratio_grid, "omega-ratio-grid")
    omegas = ratios * cfg.drive.lambda0
    rows = _pool_map(_pxp_freq_point, [(cfg, w) for w in omegas], args.jobs)
    rows = [(o / cfg.drive.lambda0, o, rc, rm, cm) for (o, rc, rm, cm) in rows]
    header = ["omega_ratio", "omega_D[w/hbar]", "r_c[w/hbar]", "r_m[w/hbar]", "C_max"]
    return header, rows, {"C_threshold": C_THRESHOLD}


# ---------------------------------------------------------------------------
# FPT evaluation and selftest
# ---------------------------------------------------------------------------


def _fpt_eval(cfg: ValidatedConfig, args):
    extras = {
        "special_frequencies": [
            {"n": n + 1, "omega_star": ws, "omega_shifted": wsh}
            for n, (ws, wsh) in enumerate(
                special_frequencies(cfg.drive.lambda0, cfg.xy if cfg.model == "xy" else cfg.pxp, 3)
            )
        ]
    }
    if cfg.model == "xy":
        ks = np.linspace(np.pi / 64, np.pi * 63 / 64, 63)
        rows = []
        for k in ks:
            mode = MomentumMode.from_params(float(k), cfg.xy)
            co = xy_fpt_coefficients(mode, cfg.drive)
            rows.append((k, mode.b, mode.Delta, co.offdiag_amp, co.alpha, co.lam1, co.lam2, co.lam3))
        header = ["k", "b_k[J]", "Delta_k[J]", "hf1_offdiag[J]", "alpha", "lam1[J]", "lam2[J]", "lam3[J]"]
        if args.check_oracle:
            from .fpt import xy_hf1, xy_hf3, xy_hf_exact

            worst = 0.0
            for k in ks:
                mode = MomentumMode.from_params(float(k), cfg.xy)
                err = np.max(np.abs(xy_hf_exact(mode, cfg.drive, cfg.xy) - xy_hf1(mode, cfg.drive) - xy_hf3(mode, cfg.drive)))
                worst = max(worst, float(err))
            extras["hf13_vs_exact_max_error"] = worst
    else:
        co = pxp_fpt_coefficients(cfg.drive, cfg.pxp)
        header = ["gamma", "hf1_amp[w]", "A0_real[w]", "A0_imag[w]"]
        rows = [(co.gamma, co.amp, co.A0.real, co.A0.imag)]
    return header, rows, extras


def _selftest(cfg, args):
    """Fast invariant suite; raises on the first violation."""
    rng = np.random.default_rng(args.seed if args.seed is not None else 7)
    # concurrence fast path vs general on random PSD X states
    from .entanglement import XState, xstate_to_matrix

    for _ in range(200):
        a0, b2m = rng.random(), 0.0
        inner = rng.random() * a0
        outer = rng.random(2)
        ap, am = outer
        b1m = rng.random() * np.sqrt(ap * am)
        norm = ap + 2 * a0 + am
        x = XState(ap / norm, a0 / norm, am / norm, b1m / norm * np.exp(2j * np.pi * rng.random()), inner / norm)
        dev = abs(concurrence_xstate(x) - concurrence_general(xstate_to_matrix(x)))
        if dev > 1e-12:
            raise NumericalError(f"X-state concurrence mismatch {dev:.2e}")
    # reset weights normalize
    from .reset import reset_weights

    for _ in range(20):
        w = reset_weights(float(rng.random() * 3), float(rng.random() * 2 + 0.1), int(rng.integers(1, 60)))
        if abs(w.sum() - 1.0) > 1e-14 or (w < 0).any():
            raise NumericalError("reset weights are not a probability distribution")
    # PXP basis counts at small L
    for L, count in ((2, 3), (4, 7), (6, 18), (8, 47)):
        if enumerate_constrained_basis(L).dim != count:
            raise NumericalError(f"constrained basis count wrong at L={L}")
    header = ["check", "status"]
    rows = [("xstate_concurrence", "ok"), ("reset_weights", "ok"), ("pxp_basis_counts", "ok")]
    return header, rows, {}


HANDLERS = {
    "xy-evolve": (_xy_evolve, True),
    "xy-reset-curve": (_xy_reset_curve, True),
    "xy-freq-map": (_xy_freq_map, True),
    "xy-amp-map": (_xy_amp_map, True),
    "pxp-evolve": (_pxp_evolve, True),
    "pxp-reset-curve": (_pxp_reset_curve, True),
    "pxp-freq-map": (_pxp_freq_map, True),
    "fpt-eval": (_fpt_eval, True),
    "selftest": (_selftest, False),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinreset",
        description="Entanglement in driven spin chains under stochastic resetting.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, (_, needs_config) in HANDLERS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs_config, help="config file (JSON or key=value lines)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for grid points")
        p.add_argument("--seed", type=int, default=None, help="seed for stochastic oracles")
        p.add_argument("--check-oracle", action="store_true", help="enable brute-force cross-checks")
        if name in ("xy-freq-map", "pxp-freq-map", "xy-amp-map"):
            p.add_argument(
                "--omega-ratio-grid",
                default="0.3:1.2:25",
                help="drive-frequency grid LO:HI:N in units of lambda0",
            )
        if name == "xy-amp-map":
            p.add_argument("--lambda0-grid", default="5:15:20", help="amplitude grid LO:HI:N in J")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler, needs_config = HANDLERS[args.subcommand]
    outputs: list[str] = []
    t0 = time.monotonic()
    try:
        cfg = load_config(args.config) if needs_config else None
        os.makedirs(args.out, exist_ok=True)
        base = os.path.join(args.out, args.subcommand.replace("-", "_"))
        csv_path, manifest_path = base + ".csv", base + ".json"
        header, rows, extras = handler(cfg, args)
        _write_csv(csv_path, header, rows)
        outputs.append(csv_path)
        manifest = {
            "subcommand": args.subcommand,
            "version": __version__,
            "config": cfg.describe() if cfg is not None else None,
            "seed": args.seed,
            "check_oracle": bool(args.check_oracle),
            "jobs": args.jobs,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "wall_clock_s": round(time.monotonic() - t0, 3),
            "outputs": [os.path.basename(csv_path)],
            "results": extras,
        }
        with open(manifest_path, "w") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        outputs.append(manifest_path)
    except ConfigError as exc:
        for path in outputs:
            if os.path.exists(path):
                os.unlink(path)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        for path in outputs:
            if os.path.exists(path):
                os.unlink(path)
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
