import numpy as np
import pytest

from lvfronts import (ComparisonReport, FieldState, Grid, InitialCondition,
                      ModelParams, comparison_check, default_dt, make_initial,
                      simulate)

P = ModelParams(1, 1, 2, 3)
GRID = Grid(x_min=-20.0, x_max=20.0, n=201, boundary="neumann")


def small_run(ic, t_end=5.0, dt=0.005, grid=GRID, params=P, **kw):
    out = np.arange(0.0, t_end + 1e-9, 1.0)
    return simulate(params, grid, ic, t_end, output_times=out, dt=dt, **kw)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(x_min=0.0, x_max=1.0, n=8)
    with pytest.raises(ValueError):
        Grid(x_min=1.0, x_max=0.0, n=100)
    with pytest.raises(ValueError):
        Grid(x_min=0.0, x_max=1.0, n=100, boundary="periodic")


def test_initial_condition_support_exact():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0),
                          taper=1.0, v_background=1.0)
    st = make_initial(GRID, ic)
    x = GRID.x
    assert np.all(st.u[np.abs(x) > 5.0] == 0.0)       # exact zeros outside
    assert st.u[np.abs(x) < 3.9].min() == pytest.approx(1.0)
    assert np.all(st.v == 1.0)


def test_initial_condition_margin_rule():
    # support closer than 10 cells to the boundary is rejected
    ic = InitialCondition(scenario="compact-u", u_support=(-19.5, 19.5))
    with pytest.raises(ValueError):
        make_initial(GRID, ic)


def test_dt_stability_rejection():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0))
    with pytest.raises(ValueError):
        small_run(ic, dt=0.5)      # violates dx^2 / (2 max(d,1))


def test_output_times_must_hit_steps():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0))
    with pytest.raises(ValueError):
        simulate(P, GRID, ic, 1.0, output_times=np.array([0.0, 0.333]),
                 dt=0.005)


def test_box_invariant_and_steady_states():
    # data inside [0,1]^2 stay inside; the segregated state is steady
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0),
                          v_background=1.0, taper=1.0)
    traj = small_run(ic, t_end=10.0)
    assert traj.box_violation == 0.0
    st = FieldState(0.0, np.ones(GRID.n), np.zeros(GRID.n))
    traj2 = small_run(st, t_end=5.0)
    last = traj2.snapshots[-1]
    assert np.max(np.abs(last.u - 1.0)) < 1e-12
    assert np.max(np.abs(last.v)) < 1e-12


def test_excess_decays_at_kinetic_rate():
    # sup u - 1 shrinks at least like e^{-r(1-eps) t} once above the state
    st = FieldState(0.0, np.full(GRID.n, 1.5), np.zeros(GRID.n))
    traj = small_run(st, t_end=8.0, dt=0.004)
    for s in traj.snapshots[1:]:
        bound = 0.5 * np.exp(-P.r * s.t * 0.95)
        assert s.u.max() - 1.0 <= bound + 1e-12


def test_reflection_symmetry():
    ic = InitialCondition(scenario="compact-both", u_support=(-6.0, 6.0),
                          v_support=(-4.0, 4.0), taper=1.0)
    traj = small_run(ic, t_end=5.0)
    last = traj.snapshots[-1]
    assert np.max(np.abs(last.u - last.u[::-1])) < 1e-13
    assert np.max(np.abs(last.v - last.v[::-1])) < 1e-13


def test_single_species_fast_path_matches_full():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0),
                          v_background=0.0)
    traj = small_run(ic, t_end=5.0)                  # v == 0: fast path
    st = make_initial(GRID, ic)
    st.v[:] = 1e-300                                 # force the full path
    traj2 = small_run(st, t_end=5.0)
    assert np.max(np.abs(traj.snapshots[-1].u - traj2.snapshots[-1].u)) < 1e-12


def test_boundary_warning():
    ic = InitialCondition(scenario="compact-u", u_support=(-15.0, 15.0),
                          taper=1.0)
    traj = small_run(ic, t_end=10.0)                 # front reaches the edge
    assert traj.boundary_warning


def test_observer_skips_storage():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0))
    seen = []
    traj = small_run(ic, t_end=3.0, observer=lambda s: seen.append(s.t))
    assert seen == [0.0, 1.0, 2.0, 3.0]
    assert traj.snapshots == []


def _random_ordered_pair(rng, n):
    # smooth random fields with u1 <= u2 and v1 >= v2, all inside [0, 1]
    def smooth(lo, hi):
        y = rng.random(n)
        for _ in range(12):
            y[1:-1] = (y[:-2] + 2 * y[1:-1] + y[2:]) / 4.0
        y = (y - y.min()) / max(y.max() - y.min(), 1e-12)
        return lo + (hi - lo) * y
    u_lo = smooth(0.0, 0.5)
    u_hi = u_lo + smooth(0.0, 0.45)
    v_hi = smooth(0.3, 1.0)
    v_lo = v_hi - smooth(0.0, 0.25)
    return (np.clip(u_lo, 0, 1), np.clip(v_hi, 0, 1),
            np.clip(u_hi, 0, 1), np.clip(np.maximum(v_lo, 0), 0, 1))


def test_comparison_principle_randomized(rng):
    # criterion-8 style property at smaller scale: ordered data stay ordered
    worst = 0.0
    for _ in range(5):
        u1, v1, u2, v2 = _random_ordered_pair(rng, GRID.n)
        lo = FieldState(0.0, u1, v1)
        hi = FieldState(0.0, u2, v2)
        t_lo = small_run(lo, t_end=5.0)
        t_hi = small_run(hi, t_end=5.0)
        rep = comparison_check(t_hi, t_lo)
        assert isinstance(rep, ComparisonReport)
        assert rep.ordered, (rep.which, rep.where_t, rep.max_violation)
        worst = max(worst, rep.max_violation)
    assert worst <= 1e-10


def test_comparison_check_flags_violations():
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0))
    a = small_run(ic, t_end=2.0)
    ic2 = InitialCondition(scenario="compact-u", u_support=(-8.0, 8.0))
    b = small_run(ic2, t_end=2.0)
    rep = comparison_check(a, b)   # a claimed >= b, but b is wider
    assert not rep.ordered
    assert rep.max_violation > 0.1
