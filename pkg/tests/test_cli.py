import json

from rigidsim.cli import main


def run_simulate(out_dir, extra=()):
    argv = [
        "simulate",
        "--preset",
        "double-tetrahedron",
        "--quantizer",
        "uniform-sym",
        "--gain",
        "0.5",
        "--duration",
        "1.5",
        "--out-dir",
        str(out_dir),
        *extra,
    ]
    return main(argv)


def test_simulate_writes_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    assert run_simulate(out) == 0
    assert (out / "run_positions.csv").exists()
    assert (out / "run_errors.csv").exists()
    assert (out / "run_report.json").exists()
    assert (out / "run_summary.png").exists()
    header = (out / "run_positions.csv").read_text().splitlines()[0]
    assert header == "t,agent,x,y,z"
    header = (out / "run_errors.csv").read_text().splitlines()[0]
    assert header == "t," + ",".join(f"e_{k}" for k in range(1, 10)) + ",V,maxu"
    report = json.loads((out / "run_report.json").read_text())
    assert report["converged"] is True
    assert report["target_set"] == {"kind": "F_approx", "delta_u": 0.5}
    assert "converged: True" in capsys.readouterr().out


def test_simulate_outputs_are_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_simulate(out_a) == 0
    assert run_simulate(out_b) == 0
    for name in ("run_positions.csv", "run_errors.csv", "run_report.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


def test_simulate_from_config_file(tmp_path):
    doc = {
        "version": 1,
        "preset": "double-tetrahedron",
        "perturbation": {"seed": 3, "magnitude": 0.4},
        "quantizer": {"kind": "uniform-asym", "gain": 0.5},
        "integrator": {"step": 0.001, "duration": 1.0},
        "decimation": 10,
        "output_prefix": "cfgrun",
    }
    cfg_path = tmp_path / "scenario.json"
    cfg_path.write_text(json.dumps(doc), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg_path), "--out-dir", str(out)]) == 0
    assert (out / "cfgrun_report.json").exists()


def test_invalid_config_exits_1(tmp_path, capsys):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text('{"version": 1, "bogus": true}', encoding="utf-8")
    code = main(["simulate", "--config", str(cfg_path), "--out-dir", str(tmp_path / "o")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_collocation_abort_exits_2(tmp_path, capsys):
    doc = {
        "version": 1,
        "graph": {"vertices": 2, "edges": [[1, 2]], "desired": [0.5], "dim": 2},
        "initial_positions": [[0.0, 0.0], [1.0, 0.0]],
        "quantizer": {"kind": "uniform-asym", "gain": 0.5},
        "integrator": {"step": 1.0, "duration": 3.0},
    }
    cfg_path = tmp_path / "collide.json"
    cfg_path.write_text(json.dumps(doc), encoding="utf-8")
    out = tmp_path / "out"
    code = main(["simulate", "--config", str(cfg_path), "--out-dir", str(out)])
    assert code == 2
    assert "aborted" in capsys.readouterr().err
    # partial trajectory still written
    assert (out / "run_positions.csv").exists()
    assert not (out / "run_report.json").exists()


def test_check_rigidity_output(capsys):
    assert main(["check-rigidity", "--preset", "double-tetrahedron"]) == 0
    out = capsys.readouterr().out
    assert "rank: 9 (required 9)" in out
    assert "infinitesimally rigid: True" in out
    assert "minimally rigid: True" in out


def test_two_agent_cases(tmp_path, capsys):
    code = main(
        ["two-agent", "--duration", "3", "--out-dir", str(tmp_path / "o")]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "6.5" in out
    assert "stationary at 6.2" in out
    csv_lines = (tmp_path / "o" / "two_agent.csv").read_text().splitlines()
    assert csv_lines[0] == "initial,predicted,stationary,simulated,abs_diff,ok"
    assert len(csv_lines) == 4
    assert (tmp_path / "o" / "two_agent.png").exists()


def test_compare_outputs(tmp_path):
    out = tmp_path / "cmp"
    code = main(
        [
            "compare",
            "--preset",
            "double-tetrahedron",
            "--gain",
            "0.5",
            "--duration",
            "0.5",
            "--decimation",
            "10",
            "--out-dir",
            str(out),
        ]
    )
    assert code == 0
    lines = (out / "compare.csv").read_text().splitlines()
    assert lines[0] == "t,V_uniform_sym,V_logarithmic,V_signum,V_uniform_asym"
    assert (out / "compare.png").exists()


def test_sweep_index(tmp_path, monkeypatch):
    monkeypatch.setenv("RIGIDSIM_THREADS", "1")
    out = tmp_path / "sweep"
    code = main(
        [
            "sweep",
            "--quantizers",
            "uniform-sym,logarithmic",
            "--gains",
            "0.5,1.0",
            "--duration",
            "0.5",
            "--decimation",
            "10",
            "--out-dir",
            str(out),
        ]
    )
    assert code == 0
    index = json.loads((out / "index.json").read_text())
    assert len(index["cells"]) == 4
    for cell in index["cells"]:
        assert (out / cell["report"]).exists()
        assert (out / cell["dir"] / "errors.csv").exists()


def test_sweep_unknown_kind_exits_1(tmp_path, capsys):
    code = main(["sweep", "--quantizers", "bogus", "--out-dir", str(tmp_path / "s")])
    assert code == 1
    assert "unknown quantizer kind" in capsys.readouterr().err
