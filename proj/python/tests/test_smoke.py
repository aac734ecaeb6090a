import cmath
import json
import math

import numpy as np
import pytest

import nhtransport as nht


def test_dispersion_matches_closed_form():
    p = nht.LatticeParams(kappa=0.3, rho=1.0, gamma=0.6, phi=math.pi / 4)
    q = 0.37
    e, de, d2e = nht.dispersion(q, p)
    dphi = p.delta_phi
    assert abs(e - (-0.6j - 0.6j * math.cos(2 * q) + 2 * math.cos(q + dphi))) < 1e-14
    assert abs(de - (-2 * math.sin(q + dphi) + 1.2j * math.sin(2 * q))) < 1e-14
    assert abs(d2e - (-2 * math.cos(q + dphi) + 2.4j * math.cos(2 * q))) < 1e-14


def test_params_default_and_validation():
    p = nht.LatticeParams(phi=0.5)
    assert p.phi_prime == -0.5
    assert p.delta_phi == 0.5
    with pytest.raises(nht.ConfigError):
        nht.LatticeParams(rho=-1.0)


def test_saddle_velocities():
    s = nht.saddle_constants(nht.LatticeParams(phi=math.pi / 4))
    assert abs(s["de1"] + math.sqrt(2)) < 1e-14
    assert abs(s["de2"] - math.sqrt(2)) < 1e-14


def test_evolve_against_bloch_integral():
    p = nht.LatticeParams(phi=math.pi / 4)
    run = nht.evolve(p, size=161, t_final=5.0, dt=0.002, sample_every=10**9)
    final = run["states"][-1]
    ref = np.array(nht.bloch_integral(-80, 80, 5.0, p))
    ref /= np.linalg.norm(ref)
    assert run["states"].shape == (2, 161)
    assert np.max(np.abs(final - ref)) < 1e-8
    assert not run["edge_touch"]


def test_hermitian_norm_and_spread():
    p = nht.LatticeParams(kappa=0.0, gamma=0.0)
    n = nht.min_lattice_size(p, 20.0, 32) | 1
    run = nht.evolve(p, size=n, t_final=20.0, dt=0.005, sample_every=200)
    assert max(abs(x) for x in run["log_norm"]) < 1e-8
    assert run["sigma"][-1] == pytest.approx(math.sqrt(2) * 20.0, rel=0.02)


def test_gaussian_start_and_potential():
    p = nht.LatticeParams(phi=math.pi / 4)
    v = nht.draw_disorder(3, 121, 1.0)
    assert len(v) == 121 and max(abs(x) for x in v) < 1.0
    run = nht.evolve(p, size=121, t_final=1.0, n0=-20, w0=5.0, q0=-math.pi / 2, potential=v)
    assert run["mean"][0] == pytest.approx(-20.0, abs=1e-9)
    with pytest.raises(nht.ConfigError):
        nht.evolve(p, size=121, t_final=1.0, potential=[0.0] * 3)


def test_ensemble_is_thread_independent():
    p = nht.LatticeParams(phi=0.7)
    a = nht.run_ensemble(p, realizations=4, size=81, t_final=5.0, threads=1, seed=9)
    b = nht.run_ensemble(p, realizations=4, size=81, t_final=5.0, threads=3, seed=9)
    assert a["sigma_mean"] == b["sigma_mean"]
    assert len(a["seeds"]) == 4


def test_checks_pass():
    results = nht.run_checks()
    assert results and all(r["passed"] for r in results), results


def test_run_command(tmp_path):
    files, ok = nht.run("band", {"phis": [0.0], "q_points": 9}, tmp_path)
    assert ok and files == ["band_0.csv", "manifest.json"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["resolved_config"]["q_points"] == 9
    with pytest.raises(nht.ConfigError):
        nht.run("band", {"bogus": 1}, tmp_path)
    assert "spread" in nht.command_names()
