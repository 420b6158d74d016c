import json

import pytest

from pbedg.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from pbedg.harness import benchmark_spec


def write_config(path, spec_dict):
    path.write_text(json.dumps(spec_dict))
    return path


@pytest.fixture
def config(tmp_path):
    spec = benchmark_spec("ex1-I").to_dict()
    spec["mesh"]["L"] = 6
    spec["time"]["t_end"] = 0.2
    return write_config(tmp_path / "cfg.json", spec)


def test_run(config, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == EXIT_OK
    for name in ("solution", "moments", "errors", "steps"):
        assert (out / f"{name}.csv").exists()
    assert json.loads((out / "config.json").read_text())["mesh"]["L"] == 6
    assert "L1 =" in capsys.readouterr().out


def test_run_twice_is_bit_identical(config, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", "--config", str(config), "--out", str(a)])
    main(["run", "--config", str(a / "config.json"), "--out", str(b)])
    for name in ("solution", "moments", "errors", "steps"):
        assert (a / f"{name}.csv").read_bytes() == (b / f"{name}.csv").read_bytes()


def test_bench(tmp_path, capsys):
    assert main(["bench", "--name", "ex1-I", "--out", str(tmp_path)]) == EXIT_OK
    row = (tmp_path / "errors.csv").read_text().splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(9.53e-4, rel=0.15)
    assert "ex1-I" in capsys.readouterr().out


def test_bench_unknown_name(tmp_path, capsys):
    assert main(["bench", "--name", "ex9", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_bench_numerical_failure(tmp_path, capsys):
    rc = main(["bench", "--name", "ex5-I-unlimited", "--out", str(tmp_path)])
    assert rc == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_config_errors(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text('{"mesh": {"L": 3, "colour": 1}}')
    assert main(["run", "--config", str(bad)]) == EXIT_CONFIG
    bad.write_text("[1, 2")
    assert main(["validate", "--config", str(bad)]) == EXIT_CONFIG


def test_converge(config, tmp_path, capsys):
    out = tmp_path / "conv"
    assert main(["converge", "--config", str(config), "--levels", "2", "--out", str(out)]) == 0
    lines = (out / "errors.csv").read_text().splitlines()
    assert len(lines) == 3 and lines[2].split(",")[0] == "1"
    assert "level 1" in capsys.readouterr().out


def test_geometry_dump(tmp_path):
    spec = benchmark_spec("ex2").to_dict()
    spec["mesh"]["L"] = 4
    cfg = write_config(tmp_path / "g.json", spec)
    assert main(["geometry-dump", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    tri = (tmp_path / "aggregation_triangles.csv").read_text().splitlines()
    brk = (tmp_path / "breakage_elements.csv").read_text().splitlines()
    assert len(tri) > 1
    # L triangles plus L(L-1)/2 rectangles
    assert len(brk) - 1 == 4 + 6


def test_validate(config, tmp_path, capsys):
    assert main(["validate", "--config", str(config)]) == EXIT_OK
    spec = benchmark_spec("ex3-I").to_dict()
    spec["problem"]["processes"]["growth"] = {"law": "constant", "params": {"value": -1.0}}
    bad = write_config(tmp_path / "neg.json", spec)
    assert main(["validate", "--config", str(bad)]) == EXIT_CONFIG
    assert "growth" in capsys.readouterr().err
