import math

import numpy as np
import pytest

from rdweno.grid import BoundarySpec, StateField, make_grid
from rdweno.integrator import Status, StepCapError, TimeSpec, advance, rhs, rk3_step
from rdweno.kernels import Scheme, SchemeSpec
from rdweno.reactions import ReactionModel, equilibria, exact_solution, exact_speed

FISHER = ReactionModel("fisher", rho=1e4)


def _setup(model, a, b, n):
    grid = make_grid(a, b, n)
    left, right = equilibria(model)
    return grid, BoundarySpec(left, right), StateField(exact_solution(model, grid.x, 0.0))


def test_rhs_vanishes_at_constant_equilibria():
    grid = make_grid(-1, 5, 60)
    for model, value in [(FISHER, (1.0,)), (ReactionModel("lotka-volterra", rho=1e4), (0.0, 3.0))]:
        state = StateField(np.tile(np.array(value)[:, None], (1, grid.n_points)))
        bc = BoundarySpec(value, value)
        for kind in Scheme:
            np.testing.assert_array_equal(rhs(state, grid, bc, SchemeSpec.of(kind), model), 0.0)


@pytest.mark.parametrize("kind", ["FD6", "CWENO"])
def test_rhs_of_traveling_wave_is_minus_c_ux(kind):
    grid, bc, state = _setup(FISHER, -1, 5, 2400)
    r = rhs(state, grid, bc, SchemeSpec.of(kind), FISHER)[0]
    # sixth-order centred first derivative of the exact profile, built only for this check
    x_ext = grid.a + (np.arange(grid.n_points + 6) - 3) * grid.dx
    u_ext = exact_solution(FISHER, x_ext, 0.0)[0]
    c7 = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
    u_x = np.convolve(u_ext, c7[::-1], mode="valid") / grid.dx
    dev = np.abs(r[1:-1] + exact_speed(FISHER) * u_x[1:-1]).max()
    assert dev <= 1e-2 * np.abs(r).max()


def test_rk3_identity_and_scalar_amplification():
    s = StateField([[0.3, -2.0]])
    out = rk3_step(s, 0.1, lambda v: np.zeros_like(v))
    np.testing.assert_array_equal(out.state.values, s.values)
    lam, dt = -2.5, 0.3
    z = lam * dt
    out = rk3_step(StateField([[1.7]]), dt, lambda v: lam * v)
    expected = 1.7 * (1 + z + z**2 / 2 + z**3 / 6)
    assert abs(out.state.values[0, 0] - expected) <= 4 * np.spacing(expected)


def test_rk3_unstable_step_blows_up():
    lam, dt = -3.0, 1.0  # amplification factor -2
    s = StateField([[1.0]])
    for k in range(200):
        out = rk3_step(s, dt, lambda v: lam * v, t=float(k))
        if out.status is Status.BLOWUP:
            break
        assert out.state.values[0, 0] == pytest.approx((-2.0) ** (k + 1))
        s = out.state
    assert out.status is Status.BLOWUP
    assert out.t == k + 1.0
    assert abs(s.values[0, 0]) <= 1e10  # last accepted state is kept


def test_rk3_third_order_in_time():
    errs = []
    for dt in (0.1, 0.05, 0.025):
        s = StateField([[1.0]])
        for _ in range(round(1 / dt)):
            s = rk3_step(s, dt, lambda v: -v).state
        errs.append(abs(s.values[0, 0] - math.exp(-1.0)))
    for e0, e1 in zip(errs, errs[1:]):
        assert 6 <= e0 / e1 <= 10


def test_rk3_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        rk3_step(StateField([[1.0]]), 0.0, lambda v: v)


def test_advance_step_count_and_final_time():
    grid, bc, state = _setup(FISHER, -1, 5, 1200)
    spec = TimeSpec(0.4, 0.02)
    assert spec.dt(grid.dx) == pytest.approx(1e-5, rel=1e-12)
    seen = []
    out = advance(state, spec, grid, bc, SchemeSpec.of("FD6"), FISHER,
                  observers=[lambda k, t, v: seen.append((k, t))])
    assert out.status is Status.OK and out.steps == 2000 and out.t == 0.02
    assert seen[0] == (0, 0.0) and seen[-1] == (2000, 0.02)
    assert all(t1 > t0 for (_, t0), (_, t1) in zip(seen, seen[1:]))


def test_advance_truncates_short_runs():
    mild = ReactionModel("fisher", rho=10.0)
    grid, bc, state = _setup(mild, -1, 5, 120)
    dt = TimeSpec(0.4, 1.0).dt(grid.dx)
    out = advance(state, TimeSpec(0.4, 0.3 * dt), grid, bc, SchemeSpec.of("FD6"), mild)
    assert out.steps == 1 and out.t == 0.3 * dt
    out = advance(state, TimeSpec(0.4, 2.5 * dt), grid, bc, SchemeSpec.of("FD6"), mild)
    assert out.steps == 3 and out.t == 2.5 * dt


def test_advance_observers_cannot_mutate_state():
    grid, bc, state = _setup(FISHER, -1, 5, 60)

    def meddle(k, t, values):
        values[0, 5] = 99.0

    with pytest.raises(ValueError):
        advance(state, TimeSpec(0.4, 1e-3), grid, bc, SchemeSpec.of("FD6"), FISHER, observers=[meddle])


def test_advance_step_cap():
    grid, bc, state = _setup(FISHER, -1, 5, 1200)
    with pytest.raises(StepCapError):
        advance(state, TimeSpec(0.4, 0.02, max_steps=100), grid, bc, SchemeSpec.of("FD6"), FISHER)


@pytest.mark.parametrize("kind", list(Scheme))
def test_equilibrium_preserved(kind):
    grid = make_grid(-1, 5, 120)
    for model, value in [(FISHER, (1.0,)), (ReactionModel("bistable", rho=1e4, beta=0.2), (0.2,)),
                         (ReactionModel("lotka-volterra", rho=1e4), (1.0, 0.0))]:
        state = StateField(np.tile(np.array(value)[:, None], (1, grid.n_points)))
        out = advance(state, TimeSpec(0.4, 200 * 0.4 * grid.dx**2), grid, BoundarySpec(value, value),
                      SchemeSpec.of(kind), model)
        assert out.steps == 200
        np.testing.assert_array_equal(out.state.values, state.values)


def test_advance_is_deterministic():
    grid, bc, state = _setup(ReactionModel("nws", rho=1e4, alpha=2), -1, 5, 300)
    model = ReactionModel("nws", rho=1e4, alpha=2)
    a = advance(state, TimeSpec(0.13, 0.002), grid, bc, SchemeSpec.of("CWENO"), model)
    b = advance(state, TimeSpec(0.13, 0.002), grid, bc, SchemeSpec.of("CWENO"), model)
    assert a.state.values.tobytes() == b.state.values.tobytes()


def test_weno_lsz_blows_up_on_coarse_fisher_grid():
    grid, bc, state = _setup(FISHER, -1, 5, 600)
    out = advance(state, TimeSpec(0.4, 0.02), grid, bc, SchemeSpec.of("WENO_LSZ"), FISHER)
    assert out.status is Status.BLOWUP
    assert out.blowup_time == pytest.approx(0.00248, rel=0.2)
    assert np.all(np.isfinite(out.state.values))
