import json

import pytest

from rdweno.cli import EXIT_CONFIG, EXIT_OK, main


def test_list_presets(capsys):
    assert main(["list-presets"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fisher-convergence" in out and "nws-speed" in out


def test_solve_preset_with_overrides(tmp_path, capsys):
    code = main(["solve", "--preset", "fisher-convergence", "--override", "n_cells=300",
                 "--override", "t_final=0.0005", "--out", str(tmp_path)])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "OK" and doc["config"]["n_cells"] == 300
    assert (tmp_path / "report.csv").exists()


def test_solve_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("model: bistable\nbeta: 0.2\nrho: 10000\ndomain: {a: -5, b: 1}\nn_cells: 300\n"
                   "scheme: CWENO\nt_final: 0.0002\n")
    assert main(["solve", "--config", str(cfg)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["config"]["model"]["beta"] == 0.2


@pytest.mark.parametrize("argv", [
    ["solve", "--preset", "fisher-convergence", "--override", "n_cells=4"],
    ["solve", "--preset", "nope"],
    ["solve"],
    ["solve", "--config", "/nonexistent/run.yaml"],
    ["table", "--family", "heat"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_table_subset(tmp_path, capsys):
    assert main(["table", "--family", "nws-cfl", "--n", "200", "--out", str(tmp_path)]) == EXIT_OK
    text = (tmp_path / "nws-cfl.csv").read_text().splitlines()
    assert len(text) == 1 + 3
