"""Explicit TVD-RK3 time stepping for the semi-discrete reaction-diffusion system."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .grid import BoundarySpec, Grid, StateField, extend_with_ghosts, pin_boundaries
from .kernels import SchemeSpec, second_derivative_values
from .reactions import ReactionModel, diffusion_coefficients, reaction_term

BLOWUP_THRESHOLD = 1e10

Observer = Callable[[int, float, np.ndarray], None]


class StepCapError(RuntimeError):
    pass


class Status(enum.Enum):
    OK = "OK"
    BLOWUP = "BLOWUP"


@dataclass(frozen=True)
class TimeSpec:
    cfl: float
    t_final: float
    max_steps: int = 50_000_000

    def __post_init__(self):
        if not self.cfl > 0:
            raise ValueError(f"cfl must be positive, got {self.cfl}")
        if not self.t_final >= 0:
            raise ValueError(f"t_final must be non-negative, got {self.t_final}")

    def dt(self, dx: float) -> float:
        return self.cfl * dx * dx


@dataclass
class StepOutcome:
    state: StateField
    t: float
    status: Status = Status.OK
    steps: int = 0

    @property
    def blowup_time(self) -> float | None:
        return self.t if self.status is Status.BLOWUP else None


def is_blown_up(values: np.ndarray) -> bool:
    return not bool(np.all(np.abs(values) <= BLOWUP_THRESHOLD))  # NaN compares False


def rhs(state: StateField, grid: Grid, bc: BoundarySpec, scheme: SchemeSpec, model: ReactionModel) -> np.ndarray:
    """``D_s u_xx + R(u)`` at interior nodes, zero at the pinned endpoints."""
    return make_rhs(grid, bc, scheme, model)(state.values)


def make_rhs(grid: Grid, bc: BoundarySpec, scheme: SchemeSpec, model: ReactionModel) -> Callable[[np.ndarray], np.ndarray]:
    diff = diffusion_coefficients(model)[:, None]

    def evaluate(values: np.ndarray) -> np.ndarray:
        ext = extend_with_ghosts(StateField(values), bc)
        out = diff * second_derivative_values(ext, grid.dx, scheme)
        out[:, 1:-1] += reaction_term(model, values[:, 1:-1])
        return out

    return evaluate


def rk3_step(state: StateField, dt: float, rhs_eval: Callable[[np.ndarray], np.ndarray],
             bc: BoundarySpec | None = None, t: float = 0.0) -> StepOutcome:
    """One Shu-Osher step; Dirichlet values are re-imposed after every stage when ``bc`` is given."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    u0 = state.values

    def stage(values):
        if bc is not None:
            pin_boundaries(values, bc)
        return values

    with np.errstate(all="ignore"):
        u1 = stage(u0 + dt * rhs_eval(u0))
        ok = not is_blown_up(u1)
        if ok:
            u2 = stage(0.75 * u0 + 0.25 * (u1 + dt * rhs_eval(u1)))
            ok = not is_blown_up(u2)
        if ok:
            u3 = stage(u0 / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs_eval(u2)))
            ok = not is_blown_up(u3)
    if not ok:
        return StepOutcome(StateField(u0.copy(), blown_up=True), t + dt, Status.BLOWUP, 1)
    return StepOutcome(StateField(u3), t + dt, Status.OK, 1)


def advance(state0: StateField, spec: TimeSpec, grid: Grid, bc: BoundarySpec, scheme: SchemeSpec,
            model: ReactionModel, observers: Iterable[Observer] = ()) -> StepOutcome:
    """Integrate to ``spec.t_final`` with ``dt = cfl dx^2``, truncating the last step.

    Observers are called as ``observer(step_index, t, values)`` after every accepted
    step (and once with step 0 before the first); they must not modify ``values``.
    On blow-up the returned outcome holds the last finite state and the time of the
    failed step.
    """
    state0.check_grid(grid)
    observers = list(observers)
    evaluate = make_rhs(grid, bc, scheme, model)
    dt = spec.dt(grid.dx)
    t_final = spec.t_final
    n_full = math.floor(t_final / dt)
    # absorb round-off so that e.g. 0.02 / 1e-5 does not produce a 1e-19 tail step
    if t_final - n_full * dt <= 1e-9 * dt:
        n_steps, last_dt = n_full, dt
    else:
        n_steps, last_dt = n_full + 1, t_final - n_full * dt
    if n_steps > spec.max_steps:
        raise StepCapError(f"{n_steps} steps needed to reach t={t_final}, cap is {spec.max_steps}")

    values = state0.values.copy()
    if n_steps:
        # a zero-length run returns the initial data untouched
        pin_boundaries(values, bc)
    state = StateField(values)
    view = values.view()
    view.flags.writeable = False
    for obs in observers:
        obs(0, 0.0, view)
    t = 0.0
    for k in range(1, n_steps + 1):
        h = last_dt if k == n_steps else dt
        out = rk3_step(state, h, evaluate, bc, t)
        if out.status is Status.BLOWUP:
            out.steps = k
            return out
        state = out.state
        t = t_final if k == n_steps else k * dt
        view = state.values.view()
        view.flags.writeable = False
        for obs in observers:
            obs(k, t, view)
    return StepOutcome(state, t, Status.OK, n_steps)
