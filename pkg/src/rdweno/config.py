"""Run configuration documents and the experiment presets."""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field
from typing import Any

import yaml

from .grid import MIN_CELLS
from .kernels import SchemeSpec
from .reactions import ModelKind, ReactionModel

DEFAULT_CFL = 0.4

TOP_LEVEL_KEYS = {"preset", "model", "domain", "n_cells", "scheme", "cfl", "t_final", "snapshots", "out_dir"}
MODEL_KEYS = {"kind", "D", "rho", "alpha", "beta"}
# model parameters may also be given at top level as shorthand
MODEL_SHORTHAND = MODEL_KEYS - {"kind"}
DOMAIN_KEYS = {"a", "b"}
SCHEME_KEYS = {"kind", "epsilon"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: ReactionModel
    a: float
    b: float
    n_cells: int
    scheme: SchemeSpec
    t_final: float
    cfl: float = DEFAULT_CFL
    snapshots: tuple[float, ...] = ()
    out_dir: str | None = None
    preset: str | None = None

    def to_dict(self) -> dict[str, Any]:
        m = self.model
        model = {"kind": m.kind.value, "D": m.D, "rho": m.rho}
        if m.kind is ModelKind.NWS:
            model["alpha"] = m.alpha
        if m.kind is ModelKind.BISTABLE:
            model["beta"] = m.beta
        doc = {
            "model": model,
            "domain": {"a": self.a, "b": self.b},
            "n_cells": self.n_cells,
            "scheme": {"kind": self.scheme.kind.value, "epsilon": self.scheme.epsilon},
            "cfl": self.cfl,
            "t_final": self.t_final,
            "snapshots": list(self.snapshots),
            "out_dir": self.out_dir,
        }
        if self.preset is not None:
            doc["preset"] = self.preset
        return doc


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    doc: dict


def _model(kind, **kw):
    return {"kind": kind, "D": 1.0, **kw}


_EXAMPLE = {
    "fisher-convergence": ("Fisher convergence",
                           _model("fisher", rho=1e4), (-1.0, 5.0), 1200, "FD6", 0.02),
    "zeldovich-convergence": ("Zeldovich convergence",
                              _model("zeldovich", rho=9000.0), (-1.0, 5.0), 1200, "FD6", 0.06),
    "nws-plateau": ("Newell-Whitehead-Segel, alpha=2, lag plateau",
                    _model("nws", rho=5000.0, alpha=2.0), (-1.0, 5.0), 1200, "FD6", 0.028),
    "bistable-convergence": ("Bistable convergence",
                             _model("bistable", rho=1e4, beta=0.2), (-5.0, 1.0), 1200, "FD6", 0.05),
    "lotka-volterra-convergence": ("Lotka-Volterra convergence",
                                   _model("lotka-volterra", rho=7000.0), (-1.0, 5.0), 1500, "FD6", 0.1),
    "fisher-stability": ("Fisher, N=600 stability case",
                         _model("fisher", rho=1e4), (-1.0, 5.0), 600, "WENO_LSZ", 0.02),
    "zeldovich-stability": ("Zeldovich, N=600 stability case",
                            _model("zeldovich", rho=1e4), (-1.0, 5.0), 600, "WENO_LSZ", 0.06),
    "nws-stability": ("Newell-Whitehead-Segel, N=800 stability case",
                      _model("nws", rho=1e4, alpha=2.0), (-1.0, 5.0), 800, "WENO_LSZ", 0.02),
    "bistable-stability": ("Bistable, N=600 stability case",
                           _model("bistable", rho=1e4, beta=0.2), (-5.0, 1.0), 600, "WENO_LSZ", 0.02),
    "lotka-volterra-stability": ("Lotka-Volterra, N=900 stability case",
                                 _model("lotka-volterra", rho=1e4), (-1.0, 5.0), 900, "WENO_LSZ", 0.11),
    "nws-speed": ("Newell-Whitehead-Segel front-speed study, CWENO",
                  _model("nws", rho=1e4, alpha=2.0), (-1.0, 5.0), 1000, "CWENO", 0.02),
}

# (alpha, N) rows of the grid-refinement study and (alpha, N, CFL) rows of the CFL study
NWS_GRID_ROWS = [(1, 500), (1, 1000), (1, 2000), (2, 1000), (2, 5000), (2, 10000),
                 (3, 1200), (3, 6000), (3, 12000), (4, 1200), (4, 6000), (4, 12000)]
NWS_CFL_ROWS = [(2, 300, 0.18), (2, 300, 0.13), (2, 300, 0.08),
                (3, 240, 0.1), (3, 240, 0.076), (3, 240, 0.02),
                (4, 200, 0.06), (4, 200, 0.043), (4, 200, 0.01)]


def _build_presets() -> dict[str, Preset]:
    presets = {}
    for name, (desc, model, (a, b), n, scheme, t) in _EXAMPLE.items():
        doc = {"model": model, "domain": {"a": a, "b": b}, "n_cells": n,
               "scheme": {"kind": scheme}, "cfl": DEFAULT_CFL, "t_final": t}
        presets[name] = Preset(name, desc, doc)
    for alpha, n in NWS_GRID_ROWS:
        name = f"nws-grid-a{alpha}-n{n}"
        doc = copy.deepcopy(presets["nws-speed"].doc)
        doc["model"]["alpha"] = float(alpha)
        doc["n_cells"] = n
        presets[name] = Preset(name, f"CWENO grid refinement, alpha={alpha}, N={n}", doc)
    for alpha, n, cfl in NWS_CFL_ROWS:
        name = f"nws-cfl-a{alpha}-n{n}-cfl{cfl:g}"
        doc = copy.deepcopy(presets["nws-speed"].doc)
        doc["model"]["alpha"] = float(alpha)
        doc["n_cells"] = n
        doc["cfl"] = cfl
        presets[name] = Preset(name, f"CWENO optimal-CFL study, alpha={alpha}, N={n}, CFL={cfl:g}", doc)
    return presets


PRESETS = _build_presets()


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


_FLOAT_RE = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?")


def _number(doc: dict, key: str, path: str) -> float:
    value = doc[key]
    if isinstance(value, str) and _FLOAT_RE.fullmatch(value.strip()):
        value = float(value)  # YAML 1.1 reads e.g. 1e-40 as a string
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite, got {value!r}")
    return value


def _check_keys(doc: Any, allowed: set[str], path: str) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(f"{path or '<root>'}: expected a mapping, got {type(doc).__name__}")
    for key in doc:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise ConfigError(f"{where}: unknown key")
    return doc


def _require(doc: dict, key: str, path: str):
    if key not in doc or doc[key] is None:
        raise ConfigError(f"{path}{key}: missing required field")
    return doc[key]


def resolve_document(doc: dict) -> dict:
    """Apply the preset and top-level shorthands; returns the merged raw document."""
    _check_keys(doc, TOP_LEVEL_KEYS | MODEL_SHORTHAND, "")
    doc = dict(doc)
    name = doc.pop("preset", None)
    shorthand = {k: doc.pop(k) for k in list(doc) if k in MODEL_SHORTHAND}
    if isinstance(doc.get("scheme"), str):
        doc["scheme"] = {"kind": doc["scheme"]}
    if isinstance(doc.get("model"), str):
        doc["model"] = {"kind": doc["model"]}
    if shorthand:
        doc["model"] = {**(doc.get("model") or {}), **shorthand}
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"preset: unknown preset {name!r}")
        doc = _merge(PRESETS[name].doc, doc)
        doc["preset"] = name
    return doc


def parse_config(source: str | dict) -> RunConfig:
    """Build a :class:`RunConfig` from YAML/JSON text or an already-loaded mapping."""
    if isinstance(source, str):
        try:
            source = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            raise ConfigError(f"<root>: malformed document: {exc}") from None
        if source is None:
            source = {}
    doc = resolve_document(_check_keys(source, TOP_LEVEL_KEYS | MODEL_SHORTHAND, ""))

    model_doc = _check_keys(_require(doc, "model", ""), MODEL_KEYS, "model")
    kind = _require(model_doc, "kind", "model.")
    params = {k: _number(model_doc, k, f"model.{k}") for k in MODEL_SHORTHAND if k in model_doc}
    try:
        model = ReactionModel(ModelKind.parse(kind), **params)
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from None

    domain = _check_keys(_require(doc, "domain", ""), DOMAIN_KEYS, "domain")
    _require(domain, "a", "domain.")
    _require(domain, "b", "domain.")
    a, b = _number(domain, "a", "domain.a"), _number(domain, "b", "domain.b")
    if not b > a:
        raise ConfigError(f"domain: need b > a, got a={a}, b={b}")

    n_cells = _require(doc, "n_cells", "")
    if isinstance(n_cells, bool) or not isinstance(n_cells, int):
        raise ConfigError(f"n_cells: expected an integer, got {n_cells!r}")
    if n_cells < MIN_CELLS:
        raise ConfigError(f"n_cells: must be >= {MIN_CELLS} for the 6-point stencil, got {n_cells}")

    scheme_doc = _check_keys(_require(doc, "scheme", ""), SCHEME_KEYS, "scheme")
    eps = _number(scheme_doc, "epsilon", "scheme.epsilon") if scheme_doc.get("epsilon") is not None else None
    try:
        scheme = SchemeSpec.of(_require(scheme_doc, "kind", "scheme."), eps)
    except ValueError as exc:
        raise ConfigError(f"scheme: {exc}") from None

    cfl = _number(doc, "cfl", "cfl") if doc.get("cfl") is not None else DEFAULT_CFL
    if not cfl > 0:
        raise ConfigError(f"cfl: must be positive, got {cfl}")
    _require(doc, "t_final", "")
    t_final = _number(doc, "t_final", "t_final")
    if t_final < 0:
        raise ConfigError(f"t_final: must be non-negative, got {t_final}")

    snaps = doc.get("snapshots") or []
    if not isinstance(snaps, list):
        raise ConfigError(f"snapshots: expected a list, got {snaps!r}")
    snapshots = []
    for i, s in enumerate(snaps):
        if isinstance(s, bool) or not isinstance(s, (int, float)):
            raise ConfigError(f"snapshots[{i}]: expected a number, got {s!r}")
        if not 0 <= s <= t_final:
            raise ConfigError(f"snapshots[{i}]: time {s} outside [0, {t_final}]")
        snapshots.append(float(s))

    out_dir = doc.get("out_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError(f"out_dir: expected a path string, got {out_dir!r}")

    return RunConfig(model, a, b, n_cells, scheme, t_final, cfl, tuple(sorted(snapshots)), out_dir, doc.get("preset"))


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.key=value`` strings; values are parsed as YAML scalars."""
    doc = copy.deepcopy(doc)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        value = yaml.safe_load(raw)
        node = doc
        for p in parts[:-1]:
            child = node.get(p)
            if isinstance(child, str) and p in ("scheme", "model"):
                child = {"kind": child}
            if child is None:
                child = {}
            if not isinstance(child, dict):
                raise ConfigError(f"override {key}: {p} is not a mapping")
            node[p] = child
            node = child
        node[parts[-1]] = value
    return doc
