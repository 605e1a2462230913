import json
import math
import os
import subprocess

import numpy as np
import pytest

import ldas


def test_config_defaults_and_overrides():
    c = ldas.config()
    assert c["num_das"] == 400 and c["num_ues"] == 20
    assert ldas.config(beta=0.2)["beta"] == 0.2
    assert ldas.config("lcas")["mode"] == "lcas"
    with pytest.raises(ValueError):
        ldas.config(no_such_key=1)
    with pytest.raises(ValueError):
        ldas.config(num_ues=500)


def test_lambert_w0():
    for x in [0.0, 1.0, 10.0, -0.3]:
        w = ldas.lambert_w0(x)
        assert math.isclose(w * math.exp(w), x, rel_tol=1e-12, abs_tol=1e-15)
    with pytest.raises(ValueError):
        ldas.lambert_w0(-1.0)


def test_channel_and_precoder():
    h = ldas.draw_channel(ldas.realization_seed(1, 0), num_das=25, num_ues=3)
    assert h.shape == (3, 25)
    w = ldas.zf_precoder(h, list(range(25)))
    assert np.allclose(h @ w, np.eye(3), atol=1e-9)


def test_cluster_power_methods_agree_for_one_user():
    h = ldas.draw_channel(5, num_das=25, num_ues=1)
    das = list(np.argsort(-np.abs(h[0]))[:2])
    heur = ldas.cluster_power(h[:, das], [0, 1])
    opt = ldas.cluster_power(h[:, das], [0, 1], method="optimal")
    assert heur["feasible"] and opt["feasible"]
    assert abs(heur["ee_bits_per_joule"] - opt["ee_bits_per_joule"]) <= 2e3


def test_solve_report():
    r = ldas.solve(0, num_das=100, num_ues=6)
    assert not r["outage"]
    assert r["ee_mbpj"] > 0
    assert len(r["per_ue_rates"]) == 6
    assert r["max_antenna_power_w"] <= 10 ** (ldas.config()["max_tx_power_dbm"] / 10) * 1e-3 * (1 + 1e-9)


def test_run_sweep_rows():
    rows = ldas.run_sweep("gamma=-inf,inf", realizations=4, num_das=100, num_ues=6)
    assert [r["swept_value"] for r in rows] == [-math.inf, math.inf]
    assert all(r["n"] == 4 for r in rows)
    assert list(rows[0]) == list(ldas._core.columns)
    with pytest.raises(ValueError):
        ldas.run_sweep("height=1")


@pytest.fixture
def cli():
    path = os.environ.get("LDAS_CLI")
    if not path:
        pytest.skip("LDAS_CLI not set")
    return path


def test_cli_run_and_exit_codes(cli, tmp_path):
    out = tmp_path / "rows.json"
    ok = subprocess.run([cli, "run", "--sweep", "gamma=22", "--realizations", "3", "--set", "num_das=100",
                         "--set", "num_ues=5", "--format", "json", "--out", str(out)], capture_output=True)
    assert ok.returncode == 0, ok.stderr
    doc = json.loads(out.read_text())
    assert doc["rows"][0]["n"] == 3
    assert "config" in doc["metadata"]

    bad = subprocess.run([cli, "run", "--sweep", "num_ues=1000"], capture_output=True)
    assert bad.returncode == 2
    io = subprocess.run([cli, "run", "--sweep", "gamma=22", "--realizations", "1", "--out",
                         str(tmp_path / "missing" / "x.csv")], capture_output=True)
    assert io.returncode == 3

    cfg = subprocess.run([cli, "config", "--mode", "lcas"], capture_output=True, text=True)
    assert json.loads(cfg.stdout)["mode"] == "lcas"
