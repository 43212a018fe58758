import math

import numpy as np
import pytest

import awf
from awf import _core as core


def test_calderon_orthonormal():
    a = core.Dilation.scalar(2.0)
    for psi in (core.Wavelet.haar(), core.Wavelet.meyer(), core.Wavelet.shannon()):
        s = core.calderon_sum(psi, a, np.array([0.37]), 40)
        assert s.value == pytest.approx(1.0, abs=1e-6)
    r = core.calderon_report(core.Wavelet.shannon(), a, core.Dilation.scalar(1.0), core.Grid(1, 8.0, 4096), 30)
    assert r.ess_inf == 1.0 and r.ess_sup == 1.0 and r.passed


def test_group_law():
    a = core.Dilation(np.array([[1.0, -1.0], [1.0, 1.0]]))
    g = core.GroupElement(np.array([0.3, -1.2]), 3)
    e = core.multiply(g, core.inverse(g, a), a)
    assert e.j == 0
    assert np.abs(e.x).max() < 1e-12
    lam, k, t = core.decompose(g, a, core.Dilation(np.eye(2)))
    back = core.multiply(lam, core.GroupElement(t, 0), a)
    assert np.allclose(back.x, g.x) and back.j == g.j
    assert all(0.0 <= ti < 1.0 for ti in t)


def test_homogeneity_and_bounds():
    grid = core.Grid(1, 16.0, 4096)
    a, p = core.Dilation.scalar(2.0), core.Dilation.scalar(1.0)
    f = core.random_band_limited(grid, 1, 0.25, 4.0, 5)[0]
    assert f.norm_sq == pytest.approx(1.0)
    psi = core.Wavelet.haar()
    base = core.continuous_transform_norm(psi, a, f, (-12, 12))
    assert base == pytest.approx(1.0, abs=0.05)
    assert core.continuous_transform_norm(psi, a, f.scaled(3.0), (-12, 12)) == pytest.approx(9 * base, rel=1e-10)
    assert core.plancherel_ratio(psi, a, f, (-12, 12)) == pytest.approx(1.0, abs=0.02)

    scales = core.resolved_scales(a, p, grid, (-12, 12))
    assert scales == (-5, 4)
    b = core.frame_bounds(core.Wavelet.shannon(), a, p, grid, scales)
    assert 0.97 <= b.c1 <= b.c2 <= 1.03
    assert b.parseval_defect <= 0.03


def test_run_reports():
    assert "calderon" in awf.subcommands()
    rep = awf.run("calderon", {"wavelet": "shannon_1d", "grid": {"L": 8, "N": 1024}})
    assert rep["pass"] is True
    assert rep["results"]["target"] == 1.0
    rep = awf.run("calderon", {"wavelet": "shannon_1d", "translation": 2, "grid": {"L": 8, "N": 1024}})
    assert rep["pass"] is False
    assert awf.resolve_config({})["grid"]["N"] == 4096


def test_errors_map_to_python():
    with pytest.raises(core.ConfigError, match="grid.N"):
        awf.run("calderon", {"grid": {"N": 100}})
    with pytest.raises(awf.Error):
        core.Dilation(np.zeros((2, 2)))
    grid = core.Grid(1, 16.0, 4096)
    with pytest.raises(core.ScaleRangeError):
        core.resolved_scales(core.Dilation.scalar(2.0), core.Dilation.scalar(1.0), core.Grid(1, 0.01, 8), (0, 0))
    assert math.isfinite(grid.spacing)
