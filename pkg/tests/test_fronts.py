import numpy as np
import pytest

from lvfronts import (FrontTrace, Grid, InitialCondition, ModelParams,
                      detect_terrace, estimate_shift, estimate_speed,
                      fit_bramson, level_set, segregation_metric, simulate,
                      track_front)

P = ModelParams(1, 1, 2, 3)


def test_level_set_exact_crossing():
    x = np.linspace(0.0, 10.0, 101)
    f = np.clip(1.0 - 0.2 * (x - 3.0), 0.0, 1.0)   # crosses 0.5 at x = 5.5
    pos = level_set(x, f, 0.5)
    assert len(pos) == 1
    assert pos[0] == pytest.approx(5.5, abs=1e-12)


def test_level_set_absent():
    x = np.linspace(0.0, 10.0, 101)
    assert len(level_set(x, np.zeros_like(x), 0.5)) == 0


@pytest.fixture(scope="module")
def invasion_traj():
    grid = Grid(x_min=-60.0, x_max=60.0, n=1201, boundary="neumann")
    ic = InitialCondition(scenario="compact-u", u_support=(-8.0, 8.0),
                          taper=2.0, v_background=1.0)
    return simulate(P, grid, ic, 80.0,
                    output_times=np.arange(0.0, 81.0, 2.0), dt=0.004), grid


def test_track_and_speed(invasion_traj, ref_wave):
    traj, _ = invasion_traj
    trace = track_front(traj, "u", 0.5, "max")
    est = estimate_speed(trace, window=(40.0, 80.0))
    assert est.speed == pytest.approx(ref_wave.speed, rel=0.01)
    assert est.halfwidth < 0.01


def test_speeds_at_other_levels_agree(invasion_traj):
    # the front is a single profile: every level moves at the same speed
    traj, _ = invasion_traj
    speeds = []
    for level in (0.1, 0.5, 0.9):
        est = estimate_speed(track_front(traj, "u", level, "max"),
                             window=(40.0, 80.0))
        speeds.append(est.speed)
    assert max(speeds) - min(speeds) < 0.005


def test_front_absent_gives_nan():
    grid = Grid(x_min=-20.0, x_max=20.0, n=201)
    ic = InitialCondition(scenario="compact-u", u_support=(-5.0, 5.0),
                          v_background=0.0)
    traj = simulate(P, grid, ic, 1.0, output_times=np.array([0.0, 1.0]),
                    dt=0.005)
    tr = track_front(traj, "v", 0.5)
    assert np.all(np.isnan(tr.positions))


def test_shift_estimate(invasion_traj, ref_wave):
    traj, grid = invasion_traj
    last = traj.snapshots[-1]
    trace = track_front(traj, "u", 0.5, "max")
    est = estimate_shift(last, grid, ref_wave,
                         expected_center=trace.positions[-1])
    assert est.unimodal
    assert est.distance < 0.01
    assert abs(est.shift + trace.positions[-1] - ref_wave.speed * last.t) < 16


def test_segregation_decay(invasion_traj, ref_wave):
    traj, _ = invasion_traj
    seg = segregation_metric(traj, c=0.5 * ref_wave.speed)
    assert seg.r_squared > 0.9
    assert seg.decay_rate > 0
    assert not seg.truncated


def test_synthetic_bramson_recovery():
    # exact synthetic trace: position = 2 t - 1.5 ln t + 3
    t = np.arange(5.0, 400.0, 0.5)
    trace = FrontTrace(species="u", level=0.5, extreme="max",
                       times=t, positions=2.0 * t - 1.5 * np.log(t) + 3.0)
    fit = fit_bramson(trace, c=2.0, window=(5.0, 400.0),
                      t0_grid=np.linspace(0.0, 10.0, 41))
    assert fit.kappa == pytest.approx(1.5, abs=1e-6)
    assert fit.t0 == pytest.approx(0.0, abs=1e-9)
    assert fit.offset == pytest.approx(-3.0, abs=1e-6)
    assert fit.sup_omega < 1e-8


def test_terrace_preconditions():
    # terrace detection is only meaningful when c_u < c_v
    grid = Grid(x_min=-20.0, x_max=20.0, n=201)
    ic = InitialCondition(scenario="compact-both", u_support=(-5.0, 5.0),
                          v_support=(-5.0, 5.0))
    traj = simulate(ModelParams(4, 1, 2, 40), grid, ic, 1.0,
                    output_times=np.array([0.0, 1.0]), dt=0.001)
    with pytest.raises(ValueError):
        detect_terrace(traj, 2.4)
