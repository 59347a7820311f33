import json
import math
import subprocess
import sys

import numpy as np
import pytest

import schmidt_lab.cli as cli
from schmidt_lab.cli import FIG_PRESETS, main


def _write_matrix(path, m):
    m = np.asarray(m, dtype=complex)
    lines = []
    for row in m:
        cells = []
        for z in row:
            sign = "+" if z.imag >= 0 else "-"
            cells.append(f"{z.real:.17g}{sign}{abs(z.imag):.17g}j")
        lines.append(" ".join(cells))
    path.write_text("\n".join(lines) + "\n")


def _summary(out_dir):
    return json.loads((out_dir / "summary.json").read_text())


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_decompose_identity(tmp_path):
    f = tmp_path / "eye.txt"
    _write_matrix(f, np.eye(2))
    out = tmp_path / "out"
    assert main(["decompose", str(f), "--out", str(out)]) == 0
    s = _summary(out)
    assert s["schema"] == 1
    assert s["results"]["rank"] == 2
    assert s["results"]["K"] == pytest.approx(2.0, abs=1e-14)
    assert s["results"]["S"] == pytest.approx(1.0, abs=1e-14)
    assert s["results"]["lambdas"] == pytest.approx([0.5, 0.5], abs=1e-14)

    header, rows = _read_csv(out / "spectrum.csv")
    assert header == ["k", "lambda_k", "cumulative_weight"]
    assert [r[0] for r in rows] == ["1", "2"]
    assert float(rows[1][2]) == pytest.approx(1.0, abs=1e-14)

    header_p, rows_p = _read_csv(out / "modes_p.csv")
    # coordinate column plus (re, im) per emitted mode
    assert header_p == [
        "row_index",
        "mode1_re",
        "mode1_im",
        "mode2_re",
        "mode2_im",
    ]
    assert len(rows_p) == 2


def test_decompose_rank_one(tmp_path):
    f = tmp_path / "outer.txt"
    _write_matrix(f, np.outer([1.0, 2.0], [3.0, 1.0]))
    out = tmp_path / "out"
    assert main(["decompose", str(f), "--out", str(out)]) == 0
    s = _summary(out)
    assert s["results"]["rank"] == 1
    assert s["results"]["K"] == pytest.approx(1.0, abs=1e-14)
    assert s["results"]["S"] == pytest.approx(0.0, abs=1e-12)


def test_decompose_round_trip_through_emitted_modes(tmp_path):
    rng = np.random.default_rng(42)
    m = np.zeros((6, 6), dtype=complex)
    for _ in range(3):
        u = rng.normal(size=6) + 1j * rng.normal(size=6)
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        m += np.outer(u, v)
    f = tmp_path / "m.txt"
    _write_matrix(f, m)
    out1 = tmp_path / "o1"
    assert main(["decompose", str(f), "--out", str(out1)]) == 0
    s1 = _summary(out1)
    assert s1["results"]["rank"] == 3

    def modes_from_csv(path, r):
        _, rows = _read_csv(path)
        cols = np.array([[float(c) for c in row] for row in rows])
        return [cols[:, 1 + 2 * k] + 1j * cols[:, 2 + 2 * k] for k in range(r)]

    us = modes_from_csv(out1 / "modes_p.csv", 3)
    vs = modes_from_csv(out1 / "modes_q.csv", 3)
    lams = s1["results"]["lambdas"]
    rebuilt = sum(
        math.sqrt(lam) * np.outer(u, v) for lam, u, v in zip(lams, us, vs)
    )
    f2 = tmp_path / "m2.txt"
    _write_matrix(f2, rebuilt)
    out2 = tmp_path / "o2"
    assert main(["decompose", str(f2), "--out", str(out2)]) == 0
    s2 = _summary(out2)
    assert s2["results"]["lambdas"] == pytest.approx(lams, abs=1e-10)
    assert s2["results"]["K"] == pytest.approx(s1["results"]["K"], abs=1e-10)
    assert s2["results"]["S"] == pytest.approx(s1["results"]["S"], abs=1e-10)


def test_exit_code_parse_failures(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 oops\n")
    assert main(["decompose", str(bad), "--out", str(tmp_path / "o")]) == 4

    nonsquare = tmp_path / "rect.txt"
    nonsquare.write_text("1 2 3\n4 5 6\n")
    assert main(["decompose", str(nonsquare), "--out", str(tmp_path / "o2")]) == 4

    assert main(["decompose", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "o3")]) == 4


def test_exit_code_convergence(tmp_path, capsys):
    code = main(
        [
            "spdc",
            "--L",
            "4",
            "--sigma",
            "10",
            "--n",
            "32",
            "--window=-40,40,-40,40",
            "--out",
            str(tmp_path / "o"),
        ]
    )
    assert code == 3
    assert "n >=" in capsys.readouterr().err


def test_exit_code_config_errors(tmp_path):
    # missing required parameter
    assert main(["spdc", "--sigma", "10", "--out", str(tmp_path / "a")]) == 2
    # conflicting figure presets
    assert main(["spdc", "--fig5", "--fig6", "--out", str(tmp_path / "b")]) == 2
    # unknown config key
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"bogus": 1}\n')
    assert (
        main(
            [
                "spdc",
                "--L",
                "0.5",
                "--sigma",
                "10",
                "--n",
                "64",
                "--config",
                str(cfg),
                "--out",
                str(tmp_path / "c"),
            ]
        )
        == 2
    )
    # argparse rejects unknown flags with SystemExit(2)
    with pytest.raises(SystemExit) as exc:
        main(["spdc", "--no-such-flag"])
    assert exc.value.code == 2


def test_fig_preset_tables():
    assert FIG_PRESETS["fig1"] == {"xi0": 100.0, "eta": 0.03, "tau": 10.0, "n": 800}
    assert FIG_PRESETS["fig3"] == {"xi0": 100.0, "eta": 0.03, "n": 400}
    assert FIG_PRESETS["fig5"] == {"L": 0.5, "sigma": 10.0, "n": 512}
    assert FIG_PRESETS["fig6"] == {"L": 4.0, "sigma": 10.0, "n": 512}
    assert FIG_PRESETS["fig2"]["tau_steps"] == 34
    assert FIG_PRESETS["fig4"]["L_steps"] == 16


def test_coord_preset_with_flag_override(tmp_path):
    out = tmp_path / "out"
    assert main(["atom-photon-coord", "--fig1", "--n", "64", "--out", str(out)]) == 0
    s = _summary(out)
    p = s["params"]
    assert (p["xi0"], p["eta"], p["tau"]) == (100.0, 0.03, 10.0)
    assert p["n"] == 64  # explicit flag beats the preset's 800
    assert s["validity"]["satisfied"] is True
    ovl = s["results"]["laguerre_overlaps"]
    assert ovl[0]["k"] == 0 and ovl[0]["overlap_modulus"] > 0.99
    assert (out / "laguerre_overlaps.csv").exists()


def test_momentum_preset_with_flag_override(tmp_path):
    out = tmp_path / "out"
    assert main(["atom-photon-momentum", "--fig3", "--n", "64", "--out", str(out)]) == 0
    s = _summary(out)
    assert s["params"]["n"] == 64
    assert s["asymptotics"]["K_inf"] == pytest.approx(1.0009)
    header, rows = _read_csv(out / "modes_nu.csv")
    assert header[0] == "nu_ph"
    assert len(header) == 1 + 2 * 4  # four emitted modes, re and im each
    assert len(rows) == 64
    dheader, _ = _read_csv(out / "densities_pi.csv")
    assert dheader == ["pi_a"] + [f"mode{k}_density" for k in (1, 2, 3, 4)]


def test_dynamics_tau_list_contains_exact_balance_point(tmp_path):
    out = tmp_path / "out"
    tau = math.log(2.0)
    code = main(
        [
            "atom-photon-dynamics",
            "--xi0",
            "100",
            "--eta",
            "0.03",
            "--tau-list",
            f"{tau!r},10",
            "--n",
            "100",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    header, rows = _read_csv(out / "sweep.csv")
    assert header == ["tau", "K0", "S0", "K", "S", "K_minus_K0", "S_minus_S0"]
    assert len(rows) == 2
    first = [float(c) for c in rows[0]]
    assert first[1] == pytest.approx(2.0, abs=1e-12)
    assert first[2] == pytest.approx(1.0, abs=1e-12)
    assert first[3] == pytest.approx(2.0, abs=0.05)
    s = _summary(out)
    assert s["results"]["max_abs_K_minus_K0"] < 0.05


def test_dynamics_preset_row_count(tmp_path):
    out = tmp_path / "out"
    assert main(["atom-photon-dynamics", "--fig2", "--n", "64", "--out", str(out)]) == 0
    _, rows = _read_csv(out / "sweep.csv")
    assert len(rows) == 34
    assert float(rows[0][0]) == pytest.approx(0.1)
    assert float(rows[-1][0]) == pytest.approx(10.0)


def test_spdc_payload_and_polarization_block(tmp_path):
    out = tmp_path / "out"
    code = main(["spdc", "--L", "0.5", "--sigma", "10", "--n", "128", "--out", str(out)])
    assert code == 0
    s = _summary(out)
    r = s["results"]
    assert r["F"]["re"] == pytest.approx(0.971, abs=0.01)
    assert abs(r["F"]["im"]) < 1e-12
    assert r["weight_plus"] + r["weight_minus"] == pytest.approx(1.0, abs=1e-14)
    assert r["purity"] == pytest.approx((1.0 + r["F"]["re"] ** 2) / 2.0, abs=1e-12)
    assert s["params"]["X_o"] == pytest.approx(0.38)
    assert s["params"]["X_e"] == pytest.approx(1.33)
    rho = r["rho"]
    assert len(rho) == 4 and all(len(row) == 4 for row in rho)
    assert rho[1][1]["re"] == pytest.approx(0.5)
    assert rho[1][2]["re"] == pytest.approx(r["F"]["re"] / 2.0, abs=1e-14)
    assert r["rho_basis"] == ["HH", "HV", "VH", "VV"]
    assert "dF" in s["grid_convergence"]
    assert (out / "modes_o.csv").exists() and (out / "modes_e.csv").exists()


def test_spdc_length_sweep_with_list(tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "spdc-length-sweep",
            "--L-list",
            "0.5,1.0",
            "--sigma",
            "10",
            "--n",
            "96",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    header, rows = _read_csv(out / "sweep.csv")
    assert header == ["L", "X_o", "X_e", "F", "K", "S"]
    assert len(rows) == 2
    assert float(rows[0][3]) > float(rows[1][3])  # F falls as the crystal grows


def test_jobs_do_not_change_output(tmp_path):
    args = ["spdc-length-sweep", "--L-list", "0.5,1.0,2.0", "--sigma", "10", "--n", "160"]
    out1, out2 = tmp_path / "j1", tmp_path / "j2"
    assert main(args + ["--jobs", "1", "--out", str(out1)]) == 0
    assert main(args + ["--jobs", "2", "--out", str(out2)]) == 0
    assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()


def test_repeat_runs_are_byte_identical(tmp_path):
    args = ["spdc", "--L", "0.5", "--sigma", "10", "--n", "96"]
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ("summary.json", "spectrum.csv", "modes_o.csv", "modes_e.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_env_var_supplies_default_n(tmp_path, monkeypatch):
    out = tmp_path / "out"
    monkeypatch.setenv(cli.ENV_DEFAULT_N, "128")
    assert main(["spdc", "--L", "0.5", "--sigma", "10", "--out", str(out)]) == 0
    assert _summary(out)["params"]["n"] == 128

    monkeypatch.setenv(cli.ENV_DEFAULT_N, "not-a-number")
    assert main(["spdc", "--L", "0.5", "--sigma", "10", "--out", str(out)]) == 2
    # an explicit flag still beats the environment
    monkeypatch.setenv(cli.ENV_DEFAULT_N, "128")
    out3 = tmp_path / "out3"
    assert main(["spdc", "--L", "0.5", "--sigma", "10", "--n", "96", "--out", str(out3)]) == 0
    assert _summary(out3)["params"]["n"] == 96


def test_config_file_supplies_parameters(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"L": 0.5, "sigma": 10.0, "n": 96}\n')
    out = tmp_path / "out"
    assert main(["spdc", "--config", str(cfg), "--out", str(out)]) == 0
    s = _summary(out)
    assert s["params"]["L"] == 0.5
    assert s["params"]["n"] == 96
    # flags win over the config file
    out2 = tmp_path / "out2"
    assert main(["spdc", "--config", str(cfg), "--n", "128", "--out", str(out2)]) == 0
    assert _summary(out2)["params"]["n"] == 128


def test_window_flag_overrides_automatic_grid(tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "spdc",
            "--L",
            "0.5",
            "--sigma",
            "10",
            "--n",
            "64",
            "--window=-30,30,-30,30",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    w = _summary(out)["params"]["window"]
    assert (w["p_min"], w["p_max"], w["q_min"], w["q_max"]) == (-30.0, 30.0, -30.0, 30.0)


def test_format_filter_limits_emitted_files(tmp_path):
    out = tmp_path / "out"
    args = ["spdc", "--L", "0.5", "--sigma", "10", "--n", "64", "--out", str(out)]
    assert main(args + ["--format", "json-summary"]) == 0
    assert (out / "summary.json").exists()
    assert not (out / "spectrum.csv").exists()
    assert not (out / "modes_o.csv").exists()

    out2 = tmp_path / "out2"
    f = tmp_path / "eye.txt"
    _write_matrix(f, np.eye(2))
    assert main(["decompose", str(f), "--out", str(out2), "--format", "csv-spectrum"]) == 0
    assert (out2 / "spectrum.csv").exists()
    assert not (out2 / "summary.json").exists()


def test_module_entry_point_subprocess(tmp_path):
    f = tmp_path / "eye.txt"
    _write_matrix(f, np.eye(2))
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "schmidt_lab.cli", "decompose", str(f), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "completed in" in proc.stderr
    assert (out / "summary.json").exists()
    # no timestamps or durations leak into the data files
    assert "duration" not in (out / "summary.json").read_text()
