import json
import math

import numpy as np
import pytest

from spinreset.config import (
    DriveProtocol,
    PXPParams,
    ResetSpec,
    XYParams,
    default_r_grid,
    load_config,
    validate_config,
)
from spinreset.errors import (
    MissingKey,
    NegativeRate,
    NonPositiveAmplitude,
    OddChainLength,
    UnknownKey,
)


def test_paper_point_derives_T_and_pr():
    cfg = validate_config(
        {"model": "XY", "J": 1, "kappa": 0.7, "lambda0": 10, "omega_ratio": 0.8, "r": 0.4}
    )
    assert cfg.drive.omega_D == pytest.approx(8.0)
    assert cfg.T == pytest.approx(2 * math.pi / 8.0)
    assert cfg.reset.p_r == pytest.approx(1 - math.exp(-0.4 * cfg.T))
    assert cfg.T * cfg.drive.omega_D == pytest.approx(2 * math.pi, abs=1e-15)


def test_boundary_rejections():
    with pytest.raises(NonPositiveAmplitude):
        DriveProtocol(lambda0=0.0, omega_D=1.0)
    with pytest.raises(NonPositiveAmplitude):
        DriveProtocol(lambda0=1.0, omega_D=-2.0)
    with pytest.raises(NegativeRate):
        ResetSpec.from_rate(-0.1, 1.0)
    with pytest.raises(OddChainLength):
        PXPParams(w=1.0, L=7)
    with pytest.raises(OddChainLength):
        XYParams(J=1.0, kappa=0.5, L=9)
    with pytest.raises(MissingKey):
        validate_config({"model": "XY", "lambda0": 10})


def test_unknown_keys_rejected():
    with pytest.raises(UnknownKey):
        validate_config({"model": "XY", "lambda0": 10, "omega_D": 8, "typo": 1})
    with pytest.raises(UnknownKey):
        validate_config({"model": "PXP", "lambda0": 10, "omega_D": 5, "L": 8, "kappa": 0.7})


def test_roundtrip_idempotent():
    raw = {"model": "XY", "J": 1, "kappa": 0.7, "lambda0": 10, "omega_ratio": 0.8, "r": 0.4}
    cfg = validate_config(raw)
    cfg2 = validate_config(cfg.to_dict())
    assert cfg2.T == cfg.T
    assert cfg2.reset.p_r == cfg.reset.p_r
    assert cfg2.drive.alpha == cfg.drive.alpha
    assert cfg2.to_dict() == cfg.to_dict()


def test_pr_monotone_and_zero_at_r0():
    T = 0.7
    assert ResetSpec.from_rate(0.0, T).p_r == 0.0
    rates = np.linspace(0.0, 5.0, 40)
    prs = [ResetSpec.from_rate(float(r), T).p_r for r in rates]
    assert all(b > a for a, b in zip(prs, prs[1:]))
    assert prs[-1] < 1.0


def test_load_config_json_and_kv(tmp_path):
    p1 = tmp_path / "a.json"
    p1.write_text(json.dumps({"model": "XY", "lambda0": 10, "omega_D": 8.0}))
    p2 = tmp_path / "b.cfg"
    p2.write_text("model = xy\nlambda0 = 10  # amplitude\nomega_D = 8.0\n")
    assert load_config(str(p1)).T == load_config(str(p2)).T


def test_default_r_grid_shape():
    g = default_r_grid()
    assert g[0] == 0.0
    assert len(g) == 61
    assert np.all(np.diff(g) > 0)
    assert g[1] == pytest.approx(1e-3)
    assert g[-1] == pytest.approx(10.0)
