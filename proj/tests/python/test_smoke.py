import math
import os

import pytest

import glspec


def test_presets_load():
    assert "classical_m1" in glspec.preset_names()
    src = os.environ.get("GLSPEC_SOURCE_DIR")
    if src:
        m = glspec.LevyModel.load(os.path.join(src, "presets", "gamma.json"))
        assert m.sigma2 == 1.0


def test_gamma_recovery():
    ctx = glspec.SpectralContext(glspec.LevyModel.from_dict({"sigma2": 1.0, "m": 0.0, "jumps": {"kind": "empty"}}))
    for x in (0.5, 2.0, 4.0):
        assert ctx.W(complex(x, 0)).real == pytest.approx(math.gamma(x), rel=1e-10)


def test_density_and_eigenfunctions():
    c1 = glspec.LevyModel.preset("classical_m1")
    assert glspec.nu(c1, 1.5) == pytest.approx(1.5 * math.exp(-1.5), rel=1e-10)
    assert glspec.eigen_coeffs(c1, 1) == pytest.approx([1.0, -0.5])
    g = glspec.gram(c1, 3)
    for i in range(4):
        for j in range(4):
            assert g[i][j] == pytest.approx(1.0 if i == j else 0.0, abs=1e-8)


def test_errors_are_typed():
    saw = glspec.LevyModel.preset("sawtooth")
    with pytest.raises(glspec.MembershipWarning):
        glspec.gram(saw, 3)
    with pytest.raises(glspec.Error):
        glspec.LevyModel.from_json("{")


def test_sampling_is_reproducible():
    c1 = glspec.LevyModel.preset("classical_m1")
    a = glspec.sample_gl(c1, 1.0, 0.5, paths=500, seed=3)
    b = glspec.sample_gl(c1, 1.0, 0.5, paths=500, seed=3)
    assert a == b
    assert len(a) == 500
