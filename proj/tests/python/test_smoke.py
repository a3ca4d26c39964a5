# SPDX-License-Identifier: Apache-2.0
import os
import pathlib

import numpy as np
import pytest

import thzrrf

SRC = pathlib.Path(os.environ.get("THZRRF_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
TILE = SRC / "scenes" / "single_facet.yaml"


@pytest.fixture(scope="module")
def scene():
    return thzrrf.load_scene(str(TILE))


@pytest.fixture(scope="module")
def data(scene):
    return thzrrf.generate_dataset(scene, 6, rows=8, cols=16, seed=3)


def test_free_space_los():
    s = thzrrf.parse_scene("tx: {position: [0, 0, 0], frequency: 3.0e11}\n")
    mpcs = thzrrf.trace(s, [1.0, 0.0, 0.0])
    assert len(mpcs) == 1 and mpcs[0].is_los()
    assert 10 * np.log10(mpcs[0].amplitude) == pytest.approx(-81.99, abs=0.01)


def test_dataset_shapes(data):
    assert len(data) == 6
    spec = data[0].spectrum
    assert spec.gain.shape == (8, 16)
    assert (spec.gain >= 0).all()
    assert spec.gain_db().min() >= thzrrf.DEFAULT_DB_FLOOR


def test_seed_train_render(scene, data, tmp_path):
    p = thzrrf.SeedParams()
    p.spacing = 0.5
    p.init_scale = 0.3
    field = thzrrf.seed_from_scene(scene, p)
    assert field.size > 0
    assert field.gain_sh.shape == (field.size, 16)
    cfg = thzrrf.TrainConfig()
    cfg.epochs = 15
    cfg.mode = "legacy"
    res = thzrrf.train(field, data, cfg)
    assert len(res.loss_trace) == 15
    assert res.calibration is not None
    out = thzrrf.render(res.field, data[0].rx_position, rows=8, cols=16, mode="legacy",
                        calibration=res.calibration)
    assert out.gain.shape == (8, 16)
    report = thzrrf.compare([out], [data[0].spectrum])
    assert 0 < report["psnr"] <= 100

    ck = tmp_path / "f.ckpt"
    res.field.save(str(ck), res.calibration)
    loaded, cal = thzrrf.load_checkpoint(str(ck))
    assert loaded.size == res.field.size
    assert cal is not None and len(cal.depth) == loaded.size


def test_metrics():
    rng = np.random.default_rng(0)
    a = rng.uniform(-160, -60, (16, 32))
    b = rng.uniform(-160, -60, (16, 32))
    assert thzrrf.psnr(a, a) == 100.0
    assert thzrrf.psnr(a, a + 1) - thzrrf.psnr(a, a + 2) == pytest.approx(6.0206, abs=1e-4)
    assert thzrrf.ssim(a, a) == pytest.approx(1.0, abs=1e-12)
    assert thzrrf.ssim(a, b) == pytest.approx(thzrrf.ssim(b, a), abs=1e-12)


def test_channel(data):
    assert thzrrf.sampling_interval(1) == pytest.approx(462.96e-12, rel=1e-5)
    t0, ts, taps = thzrrf.cir(data[0].mpcs, 32)
    assert ts == pytest.approx(1 / (32 * 2.16e9))
    assert taps.dtype == np.complex128 and taps.size >= 1
    with pytest.raises(ValueError):
        thzrrf.sampling_interval(3)


def test_errors(tmp_path):
    with pytest.raises(OSError):
        thzrrf.load_scene(str(tmp_path / "missing.yaml"))
    with pytest.raises(ValueError):
        thzrrf.parse_scene("tx: {position: [0, 0, 0]}\nbogus: 1\n")
