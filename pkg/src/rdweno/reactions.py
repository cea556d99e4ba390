"""Reaction kinetics and closed-form traveling waves for the supported models.

All closed forms are written through ``expit`` so that the steep fronts produced
by large reaction coefficients never overflow ``exp``; far from the front they
saturate to the equilibrium values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit


class ModelKind(enum.Enum):
    FISHER = "fisher"
    ZELDOVICH = "zeldovich"
    NWS = "nws"
    BISTABLE = "bistable"
    LOTKA_VOLTERRA = "lotka-volterra"

    @classmethod
    def parse(cls, name) -> ModelKind:
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {"newell-whitehead-segel": "nws", "lv": "lotka-volterra", "lotkavolterra": "lotka-volterra"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown model {name!r}; expected one of {choices}") from None


@dataclass(frozen=True)
class ReactionModel:
    kind: ModelKind
    D: float = 1.0
    rho: float = 1.0
    alpha: float = 1.0
    beta: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        if not self.D > 0:
            raise ValueError(f"diffusion coefficient D must be positive, got {self.D}")
        if not self.rho > 0:
            raise ValueError(f"reaction coefficient rho must be positive, got {self.rho}")
        if self.kind is ModelKind.NWS and not self.alpha >= 1:
            raise ValueError(f"NWS exponent alpha must be >= 1, got {self.alpha}")
        if self.kind is ModelKind.BISTABLE and not 0 < self.beta < 1:
            raise ValueError(f"bistable beta must lie in (0, 1), got {self.beta}")

    @property
    def species_count(self) -> int:
        return 2 if self.kind is ModelKind.LOTKA_VOLTERRA else 1

    @property
    def species_names(self) -> tuple[str, ...]:
        return ("u", "v") if self.species_count == 2 else ("u",)


def reaction_term(model: ReactionModel, u) -> np.ndarray:
    """``R(u)``; ``u`` has the species on its leading axis."""
    u = np.asarray(u, dtype=float)
    rho = model.rho
    kind = model.kind
    if kind is ModelKind.LOTKA_VOLTERRA:
        a, b = u[0], u[1]
        return np.stack([rho * a * (1.0 - a - b), rho * b * (3.0 - 4.0 * a - b)])
    s = u[0] if u.ndim > 0 and u.shape[0] == 1 else u
    if kind is ModelKind.FISHER:
        r = rho * s * (1.0 - s)
    elif kind is ModelKind.ZELDOVICH:
        r = rho * s * s * (1.0 - s)
    elif kind is ModelKind.NWS:
        r = rho * s * (1.0 - np.power(s, model.alpha))
    else:
        r = rho * s * (1.0 - s) * (s - model.beta)
    return np.reshape(r, (1,) + np.shape(r))


def exact_speed(model: ReactionModel) -> float:
    """Signed front speed; negative means the wave travels toward -x."""
    rD = model.rho * model.D
    kind = model.kind
    if kind is ModelKind.FISHER:
        return 5.0 * math.sqrt(rD / 6.0)
    if kind is ModelKind.ZELDOVICH:
        return math.sqrt(rD / 2.0)
    if kind is ModelKind.NWS:
        a = model.alpha
        return (a + 4.0) / math.sqrt(2.0 * a + 4.0) * math.sqrt(rD)
    if kind is ModelKind.BISTABLE:
        return -(1.0 + model.beta) * math.sqrt(rD / 2.0)
    return math.sqrt(rD / 6.0)


def minimum_speed(model: ReactionModel) -> float:
    """Linear-spreading lower bound ``2 sqrt(rho D)`` for Fisher-type kinetics."""
    return 2.0 * math.sqrt(model.rho * model.D)


def exact_solution(model: ReactionModel, x, t: float) -> np.ndarray:
    """Closed-form wave at ``(x, t)``, shape ``(species,) + shape(x)``."""
    x = np.asarray(x, dtype=float)
    rho, D = model.rho, model.D
    z = x - exact_speed(model) * t
    kind = model.kind
    if kind is ModelKind.FISHER:
        u = expit(-math.sqrt(rho / (6.0 * D)) * z) ** 2
    elif kind is ModelKind.ZELDOVICH:
        u = expit(-math.sqrt(rho / (2.0 * D)) * z)
    elif kind is ModelKind.NWS:
        a = model.alpha
        arg = -a / (2.0 * math.sqrt(2.0 * a + 4.0)) * math.sqrt(rho / D) * z
        u = (0.5 * np.tanh(arg) + 0.5) ** (2.0 / a)
    elif kind is ModelKind.BISTABLE:
        b = model.beta
        u = (1.0 + b) / 2.0 + (1.0 - b) / 2.0 * np.tanh((1.0 - b) / 4.0 * math.sqrt(2.0 * rho / D) * z)
    else:
        arg = 0.5 * math.sqrt(3.0 * rho / (2.0 * D)) * z
        th = np.tanh(arg)
        return np.stack([0.5 * (1.0 + th), 0.75 * (1.0 - th) ** 2])
    return np.reshape(u, (1,) + np.shape(u))


def diffusion_coefficients(model: ReactionModel) -> np.ndarray:
    if model.kind is ModelKind.LOTKA_VOLTERRA:
        return np.array([model.D, model.D / 3.0])
    return np.array([model.D])


def equilibria(model: ReactionModel) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Limits of the exact wave as ``x -> -inf`` and ``x -> +inf``."""
    kind = model.kind
    if kind is ModelKind.BISTABLE:
        return (model.beta,), (1.0,)
    if kind is ModelKind.LOTKA_VOLTERRA:
        return (0.0, 3.0), (1.0, 0.0)
    return (1.0,), (0.0,)


def front_level(model: ReactionModel) -> float:
    """Midpoint of the connected equilibria of the tracked (first) species."""
    left, right = equilibria(model)
    return 0.5 * (left[0] + right[0])
