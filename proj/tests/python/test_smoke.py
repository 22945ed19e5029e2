import json
import math

import numpy as np
import pytest

import nsnudge


TWO_PI = 2.0 * math.pi


def test_grid_and_fields():
    g = nsnudge.GridSpec(TWO_PI, 32)
    assert g.lambda1 == pytest.approx(1.0)
    f = nsnudge.random_divfree_field(g, 42, 1, 5, 2.0)
    l2, h1, h2 = nsnudge.norms(f)
    assert l2 == pytest.approx(2.0, rel=1e-12)
    assert g.lambda1 * l2**2 <= h1**2 * (1 + 1e-12)
    assert nsnudge.max_divergence(f) < 1e-12 * l2

    u1, u2 = f.coefficients()
    assert u1.shape == (32, 32)
    rebuilt = nsnudge.VelocityField(g, u1, u2)
    r1, _ = rebuilt.coefficients()
    assert np.array_equal(r1, u1)


def test_taylor_green_decay():
    g = nsnudge.GridSpec(TWO_PI, 32)
    u0 = nsnudge.taylor_green(g, g.L / math.sqrt(2.0))
    zero = nsnudge.VelocityField(g, np.zeros((32, 32), complex), np.zeros((32, 32), complex))
    uT = nsnudge.integrate(u0, zero, 0.1, 1.0, 1e-3)
    l2_T = nsnudge.norms(uT)[0]
    l2_0 = nsnudge.norms(u0)[0]
    assert l2_T / l2_0 == pytest.approx(math.exp(-0.2), rel=1e-6)


def test_interpolants_and_certificates():
    g = nsnudge.GridSpec(TWO_PI, 32)
    f = nsnudge.random_divfree_field(g, 7, 1, 8, 1.0)
    spec = nsnudge.InterpolantSpec("low_modes", g.L / (TWO_PI * 5.0))
    p = nsnudge.interp_apply(spec, f)
    # projection shrinks the norm and is idempotent
    assert nsnudge.norms(p)[0] <= nsnudge.norms(f)[0]
    pp = nsnudge.interp_apply(spec, p)
    a, _ = p.coefficients()
    b, _ = pp.coefficients()
    assert np.array_equal(a, b)

    cert = nsnudge.certify_c0(g, spec, "h1", 120, 3)
    assert cert["c0_estimate"] <= 1.0 + 1e-9

    with pytest.raises(ValueError):
        nsnudge.certify_c0(g, spec, "h1", 10, 3)


def test_thresholds_hand_example():
    r = nsnudge.thresholds(10.0, 1.0, 1.0, 1.0, 1.0)
    assert r["J"] == pytest.approx(20.570, rel=5e-4)
    assert r["mu_periodic"] == pytest.approx(617.1, rel=5e-4)
    assert r["mu_dirichlet"] == 500.0
    assert nsnudge.minlog_lower_bound(math.e) == pytest.approx(-math.e)


def test_run_pair_smoke(tmp_path):
    cfg = json.loads(nsnudge.default_config_json())
    cfg["grid"] = {"N": 16, "L": TWO_PI}
    cfg["nu"] = 0.1
    cfg["forcing"]["grashof"] = 10.0
    cfg["interpolant"] = {"kind": "low_modes", "h": 1.0 / 4.0}
    cfg["mu"] = 1.0
    cfg["c"] = 0.01
    cfg["spinup"] = 1.0
    cfg["T"] = 1.0
    cfg["stepper"]["dt"] = 5e-3
    cfg["sample_stride"] = 10

    out = nsnudge.run_pair(json.dumps(cfg))
    series = out["series"]
    assert len(series["t"]) > 0
    assert np.all(np.diff(series["t"]) > 0)

    run_dir = tmp_path / "run"
    nsnudge.simulate_to_directory(json.dumps(cfg), str(run_dir))
    assert (run_dir / "series.csv").exists()
    assert (run_dir / "thresholds.json").exists()


def test_validation_error_maps_to_python():
    with pytest.raises(ValueError):
        nsnudge.thresholds(-1.0, 1.0, 1.0, 1.0, 1.0)
