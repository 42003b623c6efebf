# Copyright 2026 The pixground Authors.
# SPDX-License-Identifier: Apache-2.0

import os
import subprocess

import numpy as np
import pytest

import pixground as pg


def test_rle_round_trip():
    rng = np.random.default_rng(3)
    for shape in [(1, 1), (7, 5), (32, 48)]:
        m = rng.random(shape) < 0.4
        rle = pg.encode(m)
        assert (rle.height, rle.width) == shape
        assert sum(rle.counts) == m.size
        assert rle.area == int(m.sum())
        assert np.array_equal(pg.decode(rle), m)
        assert pg.MaskRLE.from_json(rle.to_json()) == rle


def test_rle_rejects_bad_counts():
    with pytest.raises(pg.Error):
        pg.MaskRLE(2, 2, [1, 1])


def test_iou_matches_numpy():
    rng = np.random.default_rng(4)
    a = rng.random((20, 30)) < 0.5
    b = rng.random((20, 30)) < 0.5
    want = (a & b).sum() / (a | b).sum()
    assert pg.iou(pg.encode(a), pg.encode(b)) == pytest.approx(want, abs=1e-12)
    with pytest.raises(pg.InvalidArgument):
        pg.iou(pg.encode(a), pg.encode(a[:10]))


def test_harmonic_score():
    assert pg.harmonic_score(60.0, None, 40.0, None) == pytest.approx(48.0)
    assert pg.harmonic_score(None, 50.0, None, None) == 0.0
    assert pg.harmonic_score(None, None, None, None) is None


def test_normalize_sums_to_zero():
    g = np.random.default_rng(5).random((4, 3, 5))
    n = pg.normalize_across_outputs(g)
    assert n.shape == g.shape
    assert np.allclose(n, g - g.mean(axis=0))
    assert np.allclose(n.sum(axis=0), 0.0)


def test_option_letter_and_location():
    assert pg.parse_option_letter("(b)", ["cat", "dog"]) == 1
    assert pg.parse_option_letter("dunno", ["cat", "dog"]) is None
    assert pg.phrase_location_pct("abcdefghij", 5) == 50.0
    assert pg.categorize("orange wings") == "ColorAppearance"


def test_spelling_is_seeded():
    a = pg.spelling_perturb("What color is the car?", ["red", "blue"], "Answer.", 11)
    b = pg.spelling_perturb("What color is the car?", ["red", "blue"], "Answer.", 11)
    assert a == b
    assert a["applied"] + a["shortfall"] == 16


def test_evaluate_example(tmp_path):
    synth = os.environ.get("PIXGROUND_SYNTH")
    if not synth:
        pytest.skip("fixture generator not configured")
    root = tmp_path / "syn"
    subprocess.run([synth, str(root)], check=True)
    runs = [root / "runs" / p / "manifest.json" for p in ("p3", "p2")]
    rep = pg.evaluate(root / "benchmark.json", runs, jobs=2)
    assert rep["scores"]["A"] == 100.0
    assert rep["scores"]["M"] == 100.0
    assert rep["scores"]["S"] == 100.0
