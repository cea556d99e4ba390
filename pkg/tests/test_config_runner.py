import json

import numpy as np
import pytest

from rdweno.config import PRESETS, ConfigError, apply_overrides, parse_config
from rdweno.integrator import Status
from rdweno.kernels import DEFAULT_EPSILON, Scheme
from rdweno.reactions import ModelKind
from rdweno.runner import FAMILIES, family_configs, read_rows, run, write_rows

YAML_DOC = """
model: {kind: fisher, D: 1.0, rho: 10000}
domain: {a: -1, b: 5}
n_cells: 1200
scheme: {kind: CWENO}
t_final: 0.02
"""


def test_parse_yaml_and_defaults():
    cfg = parse_config(YAML_DOC)
    assert cfg.model.kind is ModelKind.FISHER and cfg.model.rho == 1e4
    assert cfg.cfl == 0.4 and cfg.n_cells == 1200
    assert cfg.scheme.kind is Scheme.CWENO and cfg.scheme.epsilon == DEFAULT_EPSILON[Scheme.CWENO]
    assert parse_config(json.dumps(cfg.to_dict())) == cfg


def test_preset_with_overrides_matches_cfl_row():
    doc = apply_overrides({"preset": "nws-speed"}, ["n_cells=300", "cfl=0.13"])
    cfg = parse_config(doc)
    ref = parse_config({"preset": "nws-cfl-a2-n300-cfl0.13"})
    for attr in ("model", "a", "b", "n_cells", "scheme", "t_final", "cfl"):
        assert getattr(cfg, attr) == getattr(ref, attr)


def test_overrides_and_shorthand():
    doc = apply_overrides({"preset": "fisher-convergence"}, ["scheme.kind=MWENO", "model.rho=2500", "scheme.epsilon=1e-20"])
    cfg = parse_config(doc)
    assert cfg.scheme.kind is Scheme.MWENO and cfg.scheme.epsilon == 1e-20 and cfg.model.rho == 2500
    cfg = parse_config({"preset": "nws-plateau", "alpha": 3})
    assert cfg.model.alpha == 3.0 and cfg.model.rho == 5000


@pytest.mark.parametrize("doc,path", [
    ({"preset": "fisher-convergence", "n_cells": 4}, "n_cells"),
    ({"preset": "fisher-convergence", "n_cells": 12.5}, "n_cells"),
    ({"preset": "fisher-convergence", "domain": {"a": 5, "b": -1}}, "domain"),
    ({"preset": "fisher-convergence", "scheme": {"kind": "ENO3"}}, "scheme"),
    ({"preset": "fisher-convergence", "cfl": 0}, "cfl"),
    ({"preset": "fisher-convergence", "cfl": "fast"}, "cfl"),
    ({"preset": "fisher-convergence", "t_final": -1}, "t_final"),
    ({"preset": "fisher-convergence", "snapshots": [1.0]}, "snapshots[0]"),
    ({"preset": "fisher-convergence", "model": {"kind": "heat"}}, "model"),
    ({"preset": "fisher-convergence", "model": {"rho": -1}}, "model"),
    ({"preset": "no-such-preset"}, "preset"),
    ({"preset": "fisher-convergence", "colour": "red"}, "colour"),
    ({"model": {"kind": "fisher"}}, "domain"),
])
def test_config_errors_name_the_key(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert path in str(info.value)


def test_malformed_text():
    with pytest.raises(ConfigError):
        parse_config("model: [unclosed")
    with pytest.raises(ConfigError):
        apply_overrides({}, ["no_equals_sign"])


def test_all_presets_parse():
    assert len(PRESETS) == 32
    for name in PRESETS:
        assert parse_config({"preset": name}).preset == name


def test_run_with_zero_final_time(tmp_path):
    cfg = parse_config({"preset": "fisher-convergence", "t_final": 0.0})
    rep = run(cfg, tmp_path)
    assert rep.status is Status.OK and rep.steps == 0
    assert (rep.norms[0].l1, rep.norms[0].l2, rep.norms[0].linf) == (0.0, 0.0, 0.0)
    for name in ("report.json", "report.csv", "front.csv", "final.csv", "plot.py"):
        assert (tmp_path / name).exists()


def test_run_artifacts_and_snapshots(tmp_path):
    cfg = parse_config({"preset": "nws-speed", "n_cells": 300, "cfl": 0.1, "t_final": 0.001, "snapshots": [0.0, 0.0005]})
    rep = run(cfg, tmp_path)
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["status"] == "OK" and doc["steps"] == rep.steps
    snaps = sorted(p.name for p in tmp_path.glob("snapshot_t*.csv"))
    assert len(snaps) == 2
    lines = (tmp_path / "final.csv").read_text().splitlines()
    assert len(lines) == cfg.n_cells + 2
    compile((tmp_path / "plot.py").read_text(), "plot.py", "exec")


def test_stability_run_reports_blowup():
    rep = run(parse_config({"preset": "fisher-stability"}))
    assert rep.status is Status.BLOWUP and rep.norms is None
    assert 0.002 <= rep.blowup_time <= 0.003
    row = rep.rows("stability")[0]
    assert row.status == "BLOWUP" and row.l1 is None


def test_rows_round_trip():
    rep = run(parse_config({"preset": "lotka-volterra-convergence", "n_cells": 300, "t_final": 2e-4}))
    rows = rep.rows("lotka-volterra")
    assert [r.species for r in rows] == ["u", "v"]
    assert read_rows(write_rows(rows)) == rows
    blown = run(parse_config({"preset": "fisher-stability", "t_final": 0.004})).rows()
    assert read_rows(write_rows(blown)) == blown


def test_runs_are_byte_reproducible(tmp_path):
    cfg = parse_config({"preset": "zeldovich-convergence", "n_cells": 300, "t_final": 0.002, "scheme": "MWENO"})
    run(cfg, tmp_path / "a")
    run(cfg, tmp_path / "b")
    for name in ("report.csv", "front.csv", "final.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_family_sizes():
    assert len(family_configs("fisher")) == 16
    assert len(family_configs("stability")) == 20
    assert len(family_configs("nws-cfl")) == 9
    assert len(family_configs("nws-speed")) == 12
    assert len(family_configs("lotka-volterra")) == 12
    assert {c.n_cells for c in family_configs("fisher", [1200])} == {1200}
    assert set(FAMILIES) >= {"fisher", "zeldovich", "nws", "bistable", "lotka-volterra", "stability"}
    with pytest.raises(ConfigError):
        family_configs("heat")
