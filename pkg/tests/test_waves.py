import numpy as np
import pytest

from lvfronts import (ModelParams, WaveSolveError, char_roots, fit_tail_decay,
                      solve_bistable_wave, solve_kpp_profile,
                      solve_perturbed_wave)
from lvfronts.waves import kpp_decay_rate

REF = ModelParams(1, 1, 2, 3)

# frozen values computed independently at high resolution
C_REF = 0.252392621454156
C_KANON = [0.0, 0.14491836948695697, 0.252392621454156, 0.4059000934094409]
C_PERTURBED = 0.13757507302155453
C_FAST = 2.40833290876275       # d=4, r=1, a=2, b=40
C_TERRACE = 0.6230140433610842  # d=0.25, r=1, a=1.2, b=20


def test_reference_speed(ref_wave):
    assert ref_wave.speed == pytest.approx(C_REF, abs=1e-9)
    assert ref_wave.residual < 1e-10


def test_profile_shape(ref_wave):
    w = ref_wave
    assert np.all(np.diff(w.U) <= 1e-9)
    assert np.all(np.diff(w.V) >= -1e-9)
    assert np.all((w.U >= -1e-9) & (w.U <= 1 + 1e-9))
    assert np.all((w.V >= -1e-9) & (w.V <= 1 + 1e-9))
    # phase normalization: U crosses 1/2 at xi = 0
    assert w.u(0.0) == pytest.approx(0.5, abs=1e-6)


def test_evaluation_beyond_mesh(ref_wave):
    # tail extrapolation decays toward the limits instead of clamping
    xs = np.array([59.0, 65.0, 80.0])
    assert np.all(np.diff(ref_wave.u(xs)) < 0) and ref_wave.u(80.0) > 0
    # saturated sides: deficits are below machine epsilon out here, so the
    # evaluation must clamp exactly to the limit, never overshoot it
    assert ref_wave.v(80.0) == 1.0 and 0 <= ref_wave.v(-80.0) < ref_wave.v(-59.0)
    assert ref_wave.u(-80.0) == 1.0


def test_symmetric_speed_zero():
    w = solve_bistable_wave(ModelParams(1, 1, 2, 2))
    assert abs(w.speed) < 1e-6


def test_exchange_symmetry():
    c_ab = solve_bistable_wave(ModelParams(1, 1, 2, 3)).speed
    c_ba = solve_bistable_wave(ModelParams(1, 1, 3, 2)).speed
    assert c_ab == pytest.approx(-c_ba, abs=1e-7)


def test_speed_oracles():
    assert solve_bistable_wave(ModelParams(4, 1, 2, 40)).speed == \
        pytest.approx(C_FAST, abs=1e-6)
    assert solve_bistable_wave(ModelParams(0.25, 1, 1.2, 20)).speed == \
        pytest.approx(C_TERRACE, abs=1e-6)


def test_speed_monotone_in_competition():
    # increasing pressure on v speeds u up; increasing pressure on u slows it
    cs = [solve_bistable_wave(ModelParams(1, 1, 2, b)).speed
          for b in (2.0, 2.5, 3.0, 4.0)]
    assert cs == pytest.approx(C_KANON, abs=1e-6)
    assert np.all(np.diff(cs) > 0)
    c_higher_a = solve_bistable_wave(ModelParams(1, 1, 2.5, 3)).speed
    assert c_higher_a < C_REF


def test_resolution_and_domain_stability():
    # halving the step and enlarging the box moves the speed by < 1e-6
    w2 = solve_bistable_wave(REF, L=80, n=int(160 / 0.0125) + 1)
    assert w2.speed == pytest.approx(C_REF, abs=1e-6)


def test_tail_rates_match_roots(ref_wave):
    roots = char_roots(REF, ref_wave.speed)
    for side, species in (("+inf", "u"), ("+inf", "v"),
                          ("-inf", "u"), ("-inf", "v")):
        f = fit_tail_decay(ref_wave, roots, side, species)
        assert f.relative_error < 0.03, (side, species, f.relative_error)
        assert f.n_samples >= 30
    # the common rate ahead of the front is a double root here
    f = fit_tail_decay(ref_wave, roots, "+inf", "v")
    assert f.gamma == 1


def test_requires_strong_competition():
    with pytest.raises((ValueError, WaveSolveError)):
        solve_bistable_wave(ModelParams(1, 1, 0.8, 3))


def test_perturbed_wave(ref_perturbed_wave):
    w = ref_perturbed_wave
    assert w.kind == "perturbed"
    assert w.speed == pytest.approx(C_PERTURBED, abs=1e-6)
    assert w.limits_left == pytest.approx((0.95, 0.0))
    assert w.limits_right == pytest.approx((0.0, 1.05))
    assert np.all(np.diff(w.U) <= 1e-9)


def test_perturbed_requires_bistability():
    # eps so large that b(1-eps) <= 1+eps breaks bistability
    with pytest.raises((ValueError, WaveSolveError)):
        solve_perturbed_wave(ModelParams(1, 1, 2, 1.1), eps=0.2)


def test_kpp_profile_supercritical():
    # at c = 3 > 2 the tail rate is the slow root (3 - sqrt(5)) / 2
    w = solve_kpp_profile(REF, c=3.0)
    assert w.kind == "kpp"
    assert np.all(w.V == 0.0)
    assert w.u(0.0) == pytest.approx(0.5, abs=1e-8)
    rate, gamma = kpp_decay_rate(REF, 3.0)
    assert rate == pytest.approx((3 - np.sqrt(5)) / 2, rel=1e-12)
    assert gamma == 0
    # fit well ahead of the front, past the subdominant-root region
    xi = np.linspace(20.0, 40.0, 60)
    slope = np.polyfit(xi, np.log(w.u(xi)), 1)[0]
    assert -slope == pytest.approx(rate, rel=1e-3)


def test_kpp_profile_minimal_speed():
    # minimal speed: double root, tail (A xi + B) exp(-rate xi); dividing
    # out the linear prefactor leaves O(1/xi) corrections from B
    w = solve_kpp_profile(ModelParams(4, 1, 2, 40), c=4.0, L=120)
    rate, gamma = kpp_decay_rate(ModelParams(4, 1, 2, 40), 4.0)
    assert rate == pytest.approx(0.5)
    assert gamma == 1
    xi = np.linspace(20.0, 50.0, 60)
    slope = np.polyfit(xi, np.log(w.u(xi) / xi), 1)[0]
    assert -slope == pytest.approx(rate, rel=0.02)


def test_kpp_rejects_subcritical_speed():
    with pytest.raises((ValueError, WaveSolveError)):
        solve_kpp_profile(REF, c=1.5)
