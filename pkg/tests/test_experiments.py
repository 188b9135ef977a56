import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tfplunge import analytic, netpbm, svg
from tfplunge import experiments as ex
from tfplunge.masks import DegenerateSymbolWarning, save_mask

SMALL = dict(a=4, M=16)


def test_config_validation():
    with pytest.raises(ValueError):
        ex.ExperimentConfig(a=50, M=100)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(delta=0.5)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(window="hann")
    with pytest.raises(ValueError):
        ex.ExperimentConfig(a=20, M=10).lattice
    assert ex.ExperimentConfig().label == "disk_a10_M100_gauss"


def test_analytic_disk_table(tmp_path):
    rows, err = ex.analytic_experiment("disk", out=str(tmp_path), radius=15.0)
    assert err < 1 / 15
    header, body = ex.read_csv(tmp_path / "analytic_disk.csv")
    assert header == ex.ANALYTIC_HEADER
    table = np.array(body, dtype=float)
    assert np.all(np.diff(table[:, 2]) <= 0)
    np.testing.assert_allclose(table[:, 1], analytic.disk_eigenvalues(15.0, len(table) - 1), rtol=0, atol=0)
    assert (tmp_path / "analytic_disk.svg").exists()


def test_radial_single_annulus_matches_annulus(tmp_path):
    ex.analytic_experiment("annulus", out=str(tmp_path / "a"), radius=15.0, ratio=0.6)
    ex.analytic_experiment("radial", out=str(tmp_path / "r"), annuli=[(9.0, 15.0)])
    a = (tmp_path / "a" / "analytic_annulus.csv").read_text()
    r = (tmp_path / "r" / "analytic_radial.csv").read_text()
    assert a == r


def test_eig_full_symbol_is_identity(tmp_path):
    path = tmp_path / "ones.pbm"
    save_mask(np.ones((16, 16), dtype=bool), path)
    cfg = ex.ExperimentConfig(shape=None, mask_path=str(path), **SMALL)
    report, spec, _ = ex.eigen_experiment(cfg)
    np.testing.assert_allclose(spec.eigenvalues, 1.0, atol=1e-10)
    assert report.plunge.count == 0
    assert math.isnan(report.ratio)
    # The traced border of a full grid is its frame, so the profile reaches 1/2 at k = L.
    assert report.measure.raw_chain == 4 * 15
    assert report.linf_error == pytest.approx(0.5, abs=1e-10)


def test_eig_artifacts_agree(tmp_path):
    cfg = ex.ExperimentConfig(shape="disk", out=str(tmp_path), **SMALL)
    report, spec, _ = ex.eigen_experiment(cfg)
    header, body = ex.read_csv(report.eigenvalues)
    assert header == ["k", "eigenvalue", "erfc_profile", "abs_error"]
    table = np.array(body, dtype=float)
    np.testing.assert_array_equal(table[:, 1], spec.eigenvalues)
    assert table[:, 3].max() == report.linf_error

    root = ET.fromstring(open(report.plot).read())
    pts = svg.parse_points(root.find("{http://www.w3.org/2000/svg}polyline[@id='series-0']").get("points"))
    lam = table[:, 1]
    ax = svg.Axes(1, len(lam), min(0.0, lam.min()), max(1.0, lam.max()))
    np.testing.assert_allclose(ax.data_y(pts[:, 1]), lam, atol=1e-5)

    saved = json.loads((tmp_path / f"{report.label}_report.json").read_text())
    assert saved["plunge"]["count"] == report.plunge.count


def test_runs_are_bit_identical(tmp_path):
    outputs = []
    for run in ("one", "two"):
        cfg = ex.ExperimentConfig(shape="blobs", seed=7, out=str(tmp_path / run), **SMALL)
        report, _, _ = ex.eigen_experiment(cfg)
        outputs.append(open(report.eigenvalues, "rb").read())
    assert outputs[0] == outputs[1]


def test_spectrogram_outputs(tmp_path):
    cfg = ex.ExperimentConfig(shape="disk", out=str(tmp_path), **SMALL)
    result = ex.spectrogram_experiment(cfg)
    magic, pixels, _ = netpbm.read(result["image"])
    assert magic == "P6" and pixels.shape == (16, 16, 3)
    assert 0 < result["overlap"] <= 1
    assert len(result["eigenvalues"]) == 3


def test_overlap_statistic_extremes():
    gray = np.repeat(np.linspace(0, 1, 25).reshape(5, 5, 1), 3, axis=2)
    assert ex.overlap_statistic(gray) == 1.0
    rgb = ex.to_uint8(gray)
    assert np.all(rgb[..., 0] == rgb[..., 1]) and np.all(rgb[..., 1] == rgb[..., 2])
    split = np.zeros((2, 2, 3))
    split[0, 0, 0] = split[1, 1, 1] = 1
    assert ex.overlap_statistic(split) == 0.0
    with pytest.raises(ValueError):
        ex.overlap_statistic(np.zeros((2, 2, 3)))


def test_sweep_flags_border(tmp_path):
    cfg = ex.ExperimentConfig(shape="disk", out=str(tmp_path), **SMALL)
    with pytest.warns(UserWarning):
        rows = ex.sweep_experiment(cfg, [0.8, 1.5])
    assert [r["flagged"] for r in rows] == [False, True]
    assert (tmp_path / "sweep_disk.csv").exists()


def test_sweep_dilation_reduces_error():
    cfg = ex.ExperimentConfig(shape="disk", a=10, M=100)
    rows = ex.sweep_experiment(cfg, [0.5, 1.0])
    assert rows[1]["linf_error"] < rows[0]["linf_error"]


def test_analytic_sweep(tmp_path):
    rows, slope = ex.analytic_sweep([5, 10, 20, 40], out=str(tmp_path))
    assert -1.5 <= slope <= -0.6
    assert ex.loglog_slope([1, 10], [1, 0.1]) == pytest.approx(-1)


def test_table1_reference_rows():
    ref = ex.table1_reference()
    assert ref["delta"] == 0.1
    assert len(ref["rows"]) == 9
    assert {r["shape"] for r in ref["rows"]} >= {"disk", "star", "blobs", "tiles"}


def test_mask_shape_mismatch(tmp_path):
    path = tmp_path / "m.pbm"
    save_mask(np.ones((8, 8), dtype=bool), path)
    with pytest.raises(ValueError):
        ex.build_mask(ex.ExperimentConfig(shape=None, mask_path=str(path), **SMALL))


@pytest.mark.slow
def test_table1_ratio_span(table1_run):
    results, _, out = table1_run
    ratios = [r["ratio"] for r in results if not r.get("exceeds_disk")]
    assert all(1.30 <= q <= 1.45 for q in ratios), ratios
    assert min(ratios) <= 1.3831 <= max(ratios)
    header, body = ex.read_csv(out / "table1.csv")
    assert header[0] == "symbol" and len(body) == 9
    assert "| Disk | 10 | 100 |" in (out / "table1.md").read_text()
