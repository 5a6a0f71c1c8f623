import math
import os
from pathlib import Path

import numpy as np
import pytest

import sps

PRESETS = Path(os.environ.get("SPS_PRESET_DIR", Path(__file__).resolve().parents[2] / "presets"))


def test_rates_and_squeezing():
    r = sps.reservoir_rates(1.0, 4.0, 0.0)
    d = sps.map_to_squeezing(r)
    assert d.gamma_eff == pytest.approx(6.0)
    assert d.N == pytest.approx(1.0 / 3.0)
    assert d.M_abs == pytest.approx(2.0 / 3.0)


def test_driven_steady_state_matches_oracle():
    r = sps.reservoir_rates(2.0, 1.0, 0.0)
    s = sps.driven_steady_state(r, 2.0, sps.BlochVector(0.0, 0.0, -0.5))
    n = sps.numeric_steady_state(r, 2.0, sps.BlochVector(0.0, 0.0, -0.5))
    assert s.sy == pytest.approx(-0.39765880355588928, abs=1e-12)
    assert s.sz == pytest.approx(0.034113732148036903, abs=1e-12)
    assert n.sy == pytest.approx(s.sy, abs=1e-9)
    assert n.sz == pytest.approx(s.sz, abs=1e-9)


def test_surviving_sideband_peak():
    r = sps.reservoir_rates(1.0, 1.0, 0.5, math.pi / 2)
    grid = np.linspace(-40.0, 40.0, 801)
    spec = sps.exact_incoherent_spectrum(r, 20.0, 0.5, grid)
    assert spec.omega_grid.shape == grid.shape
    assert spec.incoherent.min() >= 0.0
    assert spec.peak() == pytest.approx(1.0 / 16.0, rel=1e-10)


def test_fig5_preset_and_cli(tmp_path):
    text = (PRESETS / "fig5.cfg").read_text()
    config = sps.parse_config(text)
    assert config.mode == "direct"
    assert config.laser_rabi() == pytest.approx(20.0)
    status, files, _ = sps.run_subcommand("steady", text, str(tmp_path))
    assert status == 0
    assert files and all(Path(f).exists() for f in files)


def test_errors_become_value_errors():
    with pytest.raises(ValueError):
        sps.parse_config("[rates]\ngamma1 = x\n")
    with pytest.raises(ValueError):
        sps.reservoir_rates(-1.0, 1.0, 0.0)
