"""Run parameters, unit conventions and config validation.

Units: hbar = 1 and the hopping scale is 1 (J = 1 for the XY chain, w = 1
for the PXP chain).  Times are measured in hbar/J (resp. hbar/w) and reset
rates in J/hbar (resp. w/hbar).  All reported quantities are dimensionless.

Drive convention: the square pulse applies the +lambda0 half-cycle first,
i.e. the one-cycle operator is U = exp(-i H_- T/2) exp(-i H_+ T/2) with
H_+ the Hamiltonian at field +lambda0.  All closed-form expressions in the
package derive from this ordering; the config records it explicitly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    MissingKey,
    NegativeRate,
    NonPositiveAmplitude,
    OddChainLength,
    UnknownKey,
)

HALF_CYCLE_CONVENTION = "plus_lambda0_first"

KNOWN_KEYS = {
    "model",
    "J",
    "kappa",
    "w",
    "L",
    "lambda0",
    "omega_ratio",
    "omega_D",
    "r",
    "r_grid",
    "m_max",
    "quadrature_n",
    "tolerance",
}


@dataclass(frozen=True)
class DriveProtocol:
    """Square-pulse drive: field +lambda0 on [0, T/2], -lambda0 on (T/2, T]."""

    lambda0: float
    omega_D: float
    convention: str = HALF_CYCLE_CONVENTION

    def __post_init__(self):
        if self.lambda0 <= 0 or self.omega_D <= 0:
            raise NonPositiveAmplitude(
                f"lambda0 and omega_D must be > 0, got {self.lambda0}, {self.omega_D}"
            )

    @property
    def T(self) -> float:
        return 2.0 * math.pi / self.omega_D

    @property
    def alpha(self) -> float:
        """Half-cycle phase lambda0*T/2 (hbar = 1)."""
        return 0.5 * self.lambda0 * self.T


@dataclass(frozen=True)
class XYParams:
    """XY chain couplings; L=None selects the thermodynamic limit."""

    J: float = 1.0
    kappa: float = 0.0
    L: int | None = None

    def __post_init__(self):
        if self.J <= 0:
            raise NonPositiveAmplitude(f"J must be > 0, got {self.J}")
        if self.L is not None and (self.L < 2 or self.L % 2):
            raise OddChainLength(f"finite XY chain needs even L >= 2, got {self.L}")


@dataclass(frozen=True)
class PXPParams:
    """PXP chain in the K=0, P=+1 symmetry sector."""

    w: float = 1.0
    L: int = 20
    sector: tuple[int, int] = (0, +1)

    def __post_init__(self):
        if self.w <= 0:
            raise NonPositiveAmplitude(f"w must be > 0, got {self.w}")
        if self.L < 2 or self.L % 2:
            raise OddChainLength(f"PXP chain needs even L >= 2, got {self.L}")
        if self.sector != (0, +1):
            raise ValueError("only the (K=0, P=+1) sector is supported")


@dataclass(frozen=True)
class ResetSpec:
    """Per-cycle reset with probability p_r = 1 - exp(-r T)."""

    r: float
    p_r: float

    def __post_init__(self):
        if self.r < 0:
            raise NegativeRate(f"reset rate must be >= 0, got {self.r}")

    @staticmethod
    def from_rate(r: float, T: float) -> "ResetSpec":
        if r < 0:
            raise NegativeRate(f"reset rate must be >= 0, got {r}")
        return ResetSpec(r=r, p_r=-math.expm1(-r * T))


@dataclass(frozen=True)
class ValidatedConfig:
    model: str  # "xy" | "pxp"
    drive: DriveProtocol
    reset: ResetSpec
    xy: XYParams | None = None
    pxp: PXPParams | None = None
    r_grid: tuple[float, ...] = ()
    m_max: int = 200
    quadrature_n: int = 512
    tolerance: float = 1e-9

    @property
    def T(self) -> float:
        return self.drive.T

    def to_dict(self) -> dict:
        d = {
            "model": self.model.upper(),
            "lambda0": self.drive.lambda0,
            "omega_D": self.drive.omega_D,
            "r": self.reset.r,
            "m_max": self.m_max,
            "quadrature_n": self.quadrature_n,
            "tolerance": self.tolerance,
        }
        if self.r_grid:
            d["r_grid"] = list(self.r_grid)
        if self.model == "xy":
            d["J"] = self.xy.J
            d["kappa"] = self.xy.kappa
            if self.xy.L is not None:
                d["L"] = self.xy.L
        else:
            d["w"] = self.pxp.w
            d["L"] = self.pxp.L
        return d

    def describe(self) -> dict:
        """Full resolved snapshot, including derived fields, for manifests."""
        d = self.to_dict()
        d.update(
            T=self.T,
            alpha=self.drive.alpha,
            p_r=self.reset.p_r,
            half_cycle_convention=self.drive.convention,
            units="hbar=1; energies in J (XY) or w (PXP); rates in J/hbar or w/hbar",
        )
        return d


def _require(raw: dict, key: str):
    if key not in raw:
        raise MissingKey(f"config key '{key}' is required")
    return raw[key]


def validate_config(raw: dict) -> ValidatedConfig:
    """Validate a flat key/value map and derive all dependent quantities."""
    unknown = set(raw) - KNOWN_KEYS
    if unknown:
        raise UnknownKey(f"unknown config keys: {sorted(unknown)}")

    model = str(_require(raw, "model")).lower()
    if model not in ("xy", "pxp"):
        raise MissingKey(f"model must be XY or PXP, got {raw['model']}")

    lambda0 = float(_require(raw, "lambda0"))
    if "omega_D" in raw:
        omega_D = float(raw["omega_D"])
    elif "omega_ratio" in raw:
        if lambda0 <= 0:
            raise NonPositiveAmplitude("lambda0 must be > 0")
        omega_D = float(raw["omega_ratio"]) * lambda0
    else:
        raise MissingKey("one of omega_D or omega_ratio is required")
    drive = DriveProtocol(lambda0=lambda0, omega_D=omega_D)

    r = float(raw.get("r", 0.0))
    reset = ResetSpec.from_rate(r, drive.T)

    r_grid: tuple[float, ...] = ()
    if "r_grid" in raw:
        g = raw["r_grid"]
        if isinstance(g, str):
            g = [float(x) for x in g.split(",")]
        r_grid = tuple(float(x) for x in g)
        if any(x < 0 for x in r_grid):
            raise NegativeRate("r_grid entries must be >= 0")
        if list(r_grid) != sorted(r_grid):
            raise NegativeRate("r_grid must be ascending")

    xy = pxp = None
    if model == "xy":
        L = raw.get("L")
        xy = XYParams(
            J=float(raw.get("J", 1.0)),
            kappa=float(raw.get("kappa", 0.0)),
            L=None if L is None else int(L),
        )
    else:
        xy_only = {"J", "kappa"} & set(raw)
        if xy_only:
            raise UnknownKey(f"keys {sorted(xy_only)} are not valid for model PXP")
        pxp = PXPParams(w=float(raw.get("w", 1.0)), L=int(_require(raw, "L")))

    return ValidatedConfig(
        model=model,
        drive=drive,
        reset=reset,
        xy=xy,
        pxp=pxp,
        r_grid=r_grid,
        m_max=int(raw.get("m_max", 200)),
        quadrature_n=int(raw.get("quadrature_n", 512)),
        tolerance=float(raw.get("tolerance", 1e-9)),
    )


def load_config(path: str) -> ValidatedConfig:
    """Read a config file (JSON object or flat key=value lines)."""
    with open(path) as f:
        text = f.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise MissingKey(f"malformed config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            raw[key] = val
    return validate_config(raw)


def default_r_grid(n: int = 60, r_min: float = 1e-3, r_max: float = 10.0) -> np.ndarray:
    """r = 0 plus n log-spaced points in [r_min, r_max]."""
    return np.concatenate([[0.0], np.geomspace(r_min, r_max, n)])
