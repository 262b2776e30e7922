import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lvfronts import (ModelParams, Sign, canonical_speeds, char_roots,
                      predict_front_sign)
from lvfronts.model import reaction_u, reaction_v

pos = st.floats(min_value=0.05, max_value=20.0,
                allow_nan=False, allow_infinity=False)
gt1 = st.floats(min_value=1.01, max_value=20.0,
                allow_nan=False, allow_infinity=False)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(d=-1, r=1, a=2, b=3)
    with pytest.raises(ValueError):
        ModelParams(d=1, r=0, a=2, b=3)
    with pytest.raises(ValueError):
        ModelParams(d=1, r=1, a=math.inf, b=3)


def test_strong_competition_flag():
    assert ModelParams(1, 1, 2, 3).strong_competition
    assert not ModelParams(1, 1, 0.5, 3).strong_competition


@given(d=pos, r=pos)
def test_canonical_speeds(d, r):
    sp = canonical_speeds(ModelParams(d, r, 2.0, 3.0))
    assert sp.c_u == pytest.approx(2.0 * math.sqrt(r * d), rel=1e-12)
    assert sp.c_v == 2.0


def test_kinetics_zeros():
    p = ModelParams(1, 1, 2, 3)
    # both single-species states and extinction are equilibria
    for u, v in ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)):
        assert reaction_u(u, v, p) == 0.0
        assert reaction_v(u, v, p) == 0.0


@given(d=pos, r=pos, a=gt1, b=gt1,
       c=st.floats(min_value=-1.9, max_value=3.0, allow_nan=False))
def test_char_roots_satisfy_quadratics(d, r, a, b, c):
    p = ModelParams(d, r, a, b)
    rt = char_roots(p, c)
    # each rate solves its characteristic quadratic
    def q(A, B, C, z):
        scale = max(abs(A * z * z), abs(B * z), abs(C), 1.0)
        return abs(A * z * z + B * z + C) / scale
    assert q(d, c, r * (1 - a), rt.lam1) < 1e-10
    assert q(1, c, -1, rt.lam2) < 1e-10
    assert q(d, c, -r, rt.lam3) < 1e-10
    assert q(1, c, 1 - b, rt.lam4) < 1e-10
    # signs: decay ahead, growth-toward-limit behind
    assert rt.lam1 < 0 and rt.lam2 < 0
    assert rt.lam3 > 0 and rt.lam4 > 0
    assert rt.Lam_plus == max(rt.lam1, rt.lam2)
    assert rt.Lam_minus == min(rt.lam3, rt.lam4)


def test_double_root_flag_at_reference():
    # at d=r=1, a=2 and c solving both quadratics, lam1 == lam2 exactly
    p = ModelParams(1, 1, 2, 3)
    rt = char_roots(p, 0.252392621454156)
    assert rt.lam1 == pytest.approx(rt.lam2, rel=1e-9)
    assert rt.gamma_plus == 1
    assert rt.gamma_minus == 0


def test_char_roots_requires_strong_competition():
    with pytest.raises(ValueError):
        char_roots(ModelParams(1, 1, 0.9, 3), 0.1)


@pytest.mark.parametrize("params,expected,clause_word", [
    (ModelParams(1, 1, 2, 3), Sign.POSITIVE, "b > a"),
    (ModelParams(1, 1, 3, 2), Sign.NEGATIVE, "a > b"),
    (ModelParams(1, 1, 2, 2), Sign.ZERO, "a = b"),
    (ModelParams(0.25, 1, 1.2, 20), Sign.POSITIVE, "(r/d)^2"),
    (ModelParams(4, 1, 20, 1.2), Sign.NEGATIVE, "(d/r)^2"),
    (ModelParams(4, 1, 2, 40), Sign.UNKNOWN, "no applicable"),
])
def test_sign_prediction_clauses(params, expected, clause_word):
    pred = predict_front_sign(params)
    assert pred.sign is expected
    assert clause_word in pred.clause


@given(d=pos, r=pos, a=gt1, b=gt1)
def test_sign_prediction_total(d, r, a, b):
    # the table always answers, and mirrored parameters give mirrored signs
    p = ModelParams(d, r, a, b)
    pred = predict_front_sign(p)
    assert pred.sign in Sign
    if d == r:
        mirrored = predict_front_sign(ModelParams(d, r, b, a))
        flip = {Sign.POSITIVE: Sign.NEGATIVE, Sign.NEGATIVE: Sign.POSITIVE,
                Sign.ZERO: Sign.ZERO, Sign.UNKNOWN: Sign.UNKNOWN}
        assert mirrored.sign is flip[pred.sign]
