"""Single runs, table families and their CSV/JSON artifacts."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import NWS_CFL_ROWS, NWS_GRID_ROWS, PRESETS, ConfigError, RunConfig, parse_config
from .diagnostics import ErrorNorms, FrontTrack, NoCrossingError, InsufficientSamplesError, \
    convergence_order, error_norms, front_position, front_speed
from .grid import BoundarySpec, StateField, make_grid
from .integrator import Status, TimeSpec, advance
from .kernels import Scheme
from .reactions import equilibria, exact_solution, exact_speed, front_level

log = logging.getLogger(__name__)

MAX_FRONT_SAMPLES = 2000
ALL_SCHEMES = ("FD6", "WENO_LSZ", "MWENO", "CWENO")


@dataclass
class RunReport:
    config: RunConfig
    status: Status
    t_reached: float
    steps: int
    norms: list[ErrorNorms] | None
    blowup_time: float | None = None
    front: FrontTrack = field(default_factory=FrontTrack)
    front_speed: float | None = None
    wall_clock: float = 0.0
    final_state: np.ndarray | None = field(default=None, repr=False)

    @property
    def exact_speed(self) -> float:
        return exact_speed(self.config.model)

    def rows(self, family: str = "") -> list[ResultRow]:
        cfg = self.config
        rows = []
        for s, name in enumerate(cfg.model.species_names):
            n = self.norms[s] if self.norms is not None else None
            rows.append(ResultRow(
                family=family, preset=cfg.preset or "", model=cfg.model.kind.value,
                scheme=cfg.scheme.kind.value, n_cells=cfg.n_cells, cfl=cfg.cfl, t_final=cfg.t_final,
                status=self.status.value, blowup_time=self.blowup_time, steps=self.steps, species=name,
                l1=n.l1 if n else None, l2=n.l2 if n else None, linf=n.linf if n else None,
                front_speed=self.front_speed, exact_speed=self.exact_speed,
            ))
        return rows

    def to_json(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "status": self.status.value,
            "t_reached": self.t_reached,
            "blowup_time": self.blowup_time,
            "steps": self.steps,
            "norms": None if self.norms is None else {
                name: dataclasses.asdict(n) for name, n in zip(self.config.model.species_names, self.norms)
            },
            "front": {
                "level": self.front.level,
                "samples": len(self.front),
                "final_position": self.front.positions[-1] if len(self.front) else None,
                "speed": self.front_speed,
                "exact_speed": self.exact_speed,
            },
            "wall_clock_seconds": self.wall_clock,
        }


@dataclass
class ResultRow:
    family: str
    preset: str
    model: str
    scheme: str
    n_cells: int
    cfl: float
    t_final: float
    status: str
    blowup_time: float | None
    steps: int
    species: str
    l1: float | None
    l2: float | None
    linf: float | None
    front_speed: float | None
    exact_speed: float
    order_l1: float | None = None
    order_l2: float | None = None
    order_linf: float | None = None


ROW_FIELDS = [f.name for f in dataclasses.fields(ResultRow)]
_INT_FIELDS = {"n_cells", "steps"}
_STR_FIELDS = {"family", "preset", "model", "scheme", "status", "species"}


def write_rows(rows: Iterable[ResultRow], fmt: str = ".17g") -> str:
    """CSV text with a header row and LF endings; absent values are empty cells."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in rows:
        cells = []
        for name in ROW_FIELDS:
            value = getattr(row, name)
            if value is None:
                cells.append("")
            elif name in _INT_FIELDS or name in _STR_FIELDS:
                cells.append(str(value))
            else:
                cells.append(format(value, fmt))
        writer.writerow(cells)
    return buf.getvalue()


def read_rows(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ROW_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        kw = {}
        for name in ROW_FIELDS:
            raw = rec[name]
            if name in _STR_FIELDS:
                kw[name] = raw
            elif raw == "":
                kw[name] = None
            elif name in _INT_FIELDS:
                kw[name] = int(raw)
            else:
                kw[name] = float(raw)
        rows.append(ResultRow(**kw))
    return rows


def _snapshot_csv(x: np.ndarray, values: np.ndarray, exact: np.ndarray, names: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", *names, *(f"exact_{n}" for n in names)])
    for i in range(x.size):
        writer.writerow([format(v, ".17g") for v in (x[i], *values[:, i], *exact[:, i])])
    return buf.getvalue()


PLOT_TEMPLATE = '''"""Plot the snapshot and front-track CSVs written next to this script."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).parent


def load(name):
    with open(here / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {{k: [float(r[k]) for r in rows] for k in rows[0]}} if rows else {{}}


fig, (ax, ax_front) = plt.subplots(1, 2, figsize=(11, 4))
for name in {snapshots!r}:
    data = load(name)
    for sp in {species!r}:
        ax.plot(data["x"], data[sp], label=f"{{name}} {{sp}}")
        ax.plot(data["x"], data["exact_" + sp], "k--", linewidth=0.8)
ax.set_xlabel("x")
ax.set_title({title!r})
ax.legend(fontsize="small")
front = load("front.csv")
if front:
    ax_front.plot(front["t"], front["x_front"], label="numerical")
    ax_front.plot(front["t"], [x0 + {speed!r} * t for x0, t in zip([front["x_front"][0]] * len(front["t"]), front["t"])],
                  "k--", label="exact speed")
    ax_front.set_xlabel("t")
    ax_front.set_ylabel("front position")
    ax_front.legend()
fig.tight_layout()
fig.savefig(here / "solution.png", dpi=150)
'''


def run(config: RunConfig, out_dir: str | Path | None = None) -> RunReport:
    """Advance the exact initial profile to ``t_final`` and compare with the exact wave."""
    out_dir = out_dir if out_dir is not None else config.out_dir
    model = config.model
    grid = make_grid(config.a, config.b, config.n_cells)
    left, right = equilibria(model)
    bc = BoundarySpec(left, right)
    x = grid.x
    state0 = StateField(exact_solution(model, x, 0.0))
    spec = TimeSpec(config.cfl, config.t_final)

    track = FrontTrack(level=front_level(model))
    n_steps = math.ceil(config.t_final / spec.dt(grid.dx) - 1e-9) if config.t_final > 0 else 0
    stride = max(1, n_steps // MAX_FRONT_SAMPLES)
    snapshots = {}
    pending = list(config.snapshots)

    def observe(k: int, t: float, values: np.ndarray) -> None:
        if k % stride == 0 or k == n_steps:
            try:
                prev = track.positions[-1] if len(track) else None
                track.append(t, front_position(values, grid, track.level, 0, prev))
            except NoCrossingError:
                pass
        while pending and pending[0] <= t + 1e-12 * max(1.0, t):
            snapshots[pending.pop(0)] = (t, values.copy())

    started = time.perf_counter()
    outcome = advance(state0, spec, grid, bc, config.scheme, model, observers=[observe])
    wall = time.perf_counter() - started

    if outcome.status is Status.OK:
        norms = error_norms(outcome.state.values, exact_solution(model, x, outcome.t))
    else:
        norms = None
        log.info("run blew up at t=%g after %d steps", outcome.t, outcome.steps)
    try:
        speed = front_speed(track)
    except InsufficientSamplesError:
        speed = None
    report = RunReport(config, outcome.status, outcome.t, outcome.steps, norms,
                       outcome.blowup_time, track, speed, wall, outcome.state.values)
    if out_dir is not None:
        write_run_artifacts(report, Path(out_dir), snapshots)
    return report


def write_run_artifacts(report: RunReport, out: Path, snapshots: dict | None = None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    cfg = report.config
    model = cfg.model
    grid = make_grid(cfg.a, cfg.b, cfg.n_cells)
    names = model.species_names
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
    (out / "report.csv").write_text(write_rows(report.rows()))
    with open(out / "front.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x_front"])
        w.writerows([format(t, ".17g"), format(p, ".17g")] for t, p in zip(report.front.times, report.front.positions))
    files = []
    for _, (t, values) in sorted((snapshots or {}).items()):
        name = f"snapshot_t{t:.6g}.csv"
        (out / name).write_text(_snapshot_csv(grid.x, values, exact_solution(model, grid.x, t), names))
        files.append(name)
    (out / "final.csv").write_text(
        _snapshot_csv(grid.x, report.final_state, exact_solution(model, grid.x, report.t_reached), names))
    files.append("final.csv")
    title = f"{model.kind.value} {cfg.scheme.kind.value} N={cfg.n_cells} CFL={cfg.cfl:g}"
    (out / "plot.py").write_text(PLOT_TEMPLATE.format(snapshots=files, species=list(names),
                                                      title=title, speed=report.exact_speed))


# Table families

CONVERGENCE_N = (1200, 2400, 4800, 9600)
FAMILIES = {
    "fisher": [("fisher-convergence", n, s) for n in CONVERGENCE_N for s in ALL_SCHEMES],
    "zeldovich": [("zeldovich-convergence", n, s) for n in CONVERGENCE_N for s in ALL_SCHEMES],
    "nws": [("nws-plateau", n, s) for n in CONVERGENCE_N for s in ALL_SCHEMES],
    "bistable": [("bistable-convergence", n, s) for n in CONVERGENCE_N for s in ALL_SCHEMES],
    "lotka-volterra": [("lotka-volterra-convergence", n, s) for n in (1500, 3000, 6000) for s in ALL_SCHEMES],
    "stability": [(f"{m}-stability", None, s)
                  for m in ("fisher", "zeldovich", "nws", "bistable", "lotka-volterra") for s in ALL_SCHEMES],
    "nws-speed": [(f"nws-grid-a{a}-n{n}", None, None) for a, n in NWS_GRID_ROWS],
    "nws-cfl": [(f"nws-cfl-a{a}-n{n}-cfl{c:g}", None, None) for a, n, c in NWS_CFL_ROWS],
}


def family_configs(family: str, n_values: Sequence[int] | None = None) -> list[RunConfig]:
    """Configurations of a table family, optionally restricted to some ``N`` values."""
    if family not in FAMILIES:
        raise ConfigError(f"family: unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    configs = []
    for preset, n, scheme in FAMILIES[family]:
        doc = {"preset": preset}
        if n is not None:
            doc["n_cells"] = n
        if scheme is not None:
            doc["scheme"] = {"kind": scheme}
        cfg = parse_config(doc)
        if n_values is None or cfg.n_cells in n_values:
            configs.append(cfg)
    return configs


def _run_quiet(cfg: RunConfig) -> RunReport:
    report = run(cfg, out_dir=None)
    report.final_state = None
    return report


def attach_orders(rows: list[ResultRow]) -> list[ResultRow]:
    """Fill observed orders between consecutive N of the same preset family, scheme, species and CFL."""
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.model, row.scheme, row.species, row.cfl, row.t_final), []).append(row)
    for group in groups.values():
        group.sort(key=lambda r: r.n_cells)
        for prev, cur in zip(group, group[1:]):
            if prev.n_cells == cur.n_cells:
                continue
            for metric in ("l1", "l2", "linf"):
                e0, e1 = getattr(prev, metric), getattr(cur, metric)
                if e0 and e1 and e0 > 0 and e1 > 0:
                    setattr(cur, f"order_{metric}", convergence_order([(prev.n_cells, e0), (cur.n_cells, e1)])[0])
    return rows


def run_table(family: str, out_dir: str | Path | None = None, jobs: int = 1,
              n_values: Sequence[int] | None = None) -> list[ResultRow]:
    configs = family_configs(family, n_values)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_quiet, configs))
    else:
        reports = [_run_quiet(cfg) for cfg in configs]
    rows = attach_orders([row for rep in reports for row in rep.rows(family)])
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{family}.csv").write_text(write_rows(rows, fmt=".5e"))
    return rows


def list_presets() -> list[tuple[str, str]]:
    return [(p.name, p.description) for p in PRESETS.values()]
