import json

import numpy as np
import pytest

from gaussthermo.cli import RunConfig, main
from gaussthermo.errors import ConfigError
from gaussthermo.states import (
    SimonInvariants,
    from_simon,
    ppt_min_eigenvalue,
    validate_physical,
)


def read_csv(path):
    meta, rows = [], []
    header = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                meta.append(line)
            elif header is None:
                header = line.split(",")
            else:
                rows.append(dict(zip(header, line.split(","))))
    return meta, header, rows


def test_default_config_is_valid():
    RunConfig().validate()


def test_config_validation_names_field():
    cfg = RunConfig(k_a=-1.0)
    with pytest.raises(ConfigError, match="k_a"):
        cfg.validate()
    cfg = RunConfig(spacing="cubic")
    with pytest.raises(ConfigError, match="spacing"):
        cfg.validate()


def test_time_grid_shapes():
    cfg = RunConfig(t_max=10.0, n_points=5)
    assert np.allclose(cfg.time_grid(), np.linspace(0.0, 10.0, 5))
    cfg = RunConfig(t_max=10.0, n_points=5, spacing="log")
    grid = cfg.time_grid()
    assert grid[0] == 0.0 and len(grid) == 5 and np.all(np.diff(grid) > 0)
    assert RunConfig(n_points=1).time_grid().tolist() == [0.0]


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"m_a": 0.5, "m_b": 0.5, "samples": 3}))
    out = tmp_path / "o.csv"
    code = main([
        "sample-states", "--config", str(config),
        "--samples", "2", "--out", str(out),
    ])
    assert code == 0
    meta, _, rows = read_csv(out)
    assert len(rows) == 2  # flag wins over config file
    assert '"m_a": 0.5' in meta[1]


def test_config_file_unknown_key(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"samples": 3, "nonsense": 1}))
    assert main(["sample-states", "--config", str(config)]) == 2


def test_bad_flag_exit_code(tmp_path):
    assert main(["qfi-scan", "--m-a", "-1", "--out", str(tmp_path / "x.csv")]) == 2


def test_unstable_propagate_exit_code(tmp_path):
    code = main([
        "propagate", "--gn", "1.5", "--n-points", "3", "--t-max", "1",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 3


def test_steady_state_reports_instability(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["steady-state", "--gn", "1.5", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert rows[0]["stable"] == "false"
    assert rows[0]["sigma_00"] == "nan"


def test_steady_state_uncoupled_row(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["steady-state", "--gn", "0", "--m-a", "0.5", "--m-b", "0.5",
                 "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    row = rows[0]
    assert row["stable"] == "true"
    assert float(row["sigma_00"]) == pytest.approx(2.0, abs=1e-10)
    assert float(row["sigma_02"]) == pytest.approx(0.0, abs=1e-10)
    assert float(row["nu_minus"]) == pytest.approx(2.0, rel=1e-10)
    assert float(row["purity"]) == pytest.approx(1.0 / 4.0, rel=1e-10)


def test_sample_states_rows_revalidate(tmp_path):
    out = tmp_path / "samples.csv"
    assert main(["sample-states", "--samples", "40", "--seed", "5",
                 "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert len(rows) == 40
    for row in rows:
        sigma = from_simon(SimonInvariants(
            float(row["a"]), float(row["b"]),
            float(row["c_plus"]), float(row["c_minus"]),
        ))
        assert validate_physical(sigma)[0]
        nu_tilde = ppt_min_eigenvalue(sigma)
        assert nu_tilde == pytest.approx(float(row["nu_tilde_minus"]), rel=1e-9)
        expected = "entangled" if nu_tilde < 1.0 - 1e-12 else "separable"
        assert row["classification"] == expected


def test_speed_scan_rows_revalidate(tmp_path):
    out = tmp_path / "speed.csv"
    assert main(["speed-scan", "--samples", "30", "--bound-points", "4",
                 "--m-a", "0.5", "--m-b", "0.5", "--out", str(out)]) == 0
    _, header, rows = read_csv(out)
    assert header[0] == "record"
    samples = [r for r in rows if r["record"] == "sample"]
    bounds = [r for r in rows if r["record"] == "bound"]
    assert len(samples) == 30 and len(bounds) == 4
    for row in samples:
        v = float(row["v_b_squared"])
        if row["excluded"] == "false":
            assert v >= 0.0
        else:
            assert np.isnan(v)
        assert row["classification"] in ("entangled", "separable")
        entangled = float(row["nu_tilde_minus"]) < 1.0 - 1e-12
        assert (row["classification"] == "entangled") == entangled
    for row in bounds:
        assert row["classification"] == ""


def test_qfi_scan_families_and_zero_grid(tmp_path):
    out = tmp_path / "qfi.csv"
    assert main(["qfi-scan", "--n-points", "1", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert [r["family"] for r in rows] == ["thermal", "local-squeeze", "twin-beam"]
    assert all(float(r["q_m"]) == 0.0 for r in rows)

    single = tmp_path / "qfi_single.csv"
    assert main(["qfi-scan", "--state", "twin-beam", "--r", "1",
                 "--n-points", "3", "--t-max", "10", "--out", str(single)]) == 0
    _, _, rows = read_csv(single)
    assert {r["family"] for r in rows} == {"twin-beam"}
    assert len(rows) == 3


def test_state_file_round_trip(tmp_path):
    matrix = tmp_path / "state.txt"
    np.savetxt(matrix, np.diag([1.4, 1.4, 2.0, 2.0]))
    out = tmp_path / "prop.csv"
    assert main(["propagate", "--state", "file", "--state-file", str(matrix),
                 "--n-points", "3", "--t-max", "5", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert float(rows[0]["sigma_00"]) == pytest.approx(1.4)

    np.savetxt(matrix, 0.1 * np.eye(4))
    assert main(["propagate", "--state", "file", "--state-file", str(matrix),
                 "--out", str(out)]) == 3


def test_byte_identical_reruns(tmp_path):
    args = ["speed-scan", "--samples", "25", "--bound-points", "3", "--seed", "9"]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_floats_round_trip_exactly(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["steady-state", "--gn", "0.35", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    from gaussthermo.dynamics import build_diffusion, build_drift, solve_steady
    from gaussthermo.cli import RunConfig
    cfg = RunConfig(gn=0.35)
    steady = solve_steady(build_drift(cfg.params()), build_diffusion(cfg.params()))
    assert float(rows[0]["sigma_01"]) == steady[0, 1]  # 17 digits round-trip
