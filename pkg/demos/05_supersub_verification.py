"""Comparison pairs: numerically verified super- and subsolutions.

Each family perturbs the traveling front by exponentially decaying
amplitude corrections and a relaxing shift.  The reduced residuals
(N1 for u, N2 for v) must have the right signs everywhere; the verifier
evaluates them on a front-tracking lattice and reports the first time
from which the signs are clean (t*).  A validated lower pair dominated
by the initial data certifies invasion outright.
"""

import numpy as np

from lvfronts import (ModelParams, SuperSubParams, build_pair,
                      check_constraints, evaluate_residuals,
                      invasion_certificate, residuals_fd,
                      solve_bistable_wave, solve_perturbed_wave)

p = ModelParams(d=1, r=1, a=2, b=3)
wave = solve_bistable_wave(p)

cases = [
    SuperSubParams("lower-simple", p0=0.05, q0=0.5, alpha=0.2, shift1=1.0),
    SuperSubParams("upper-simple", p0=0.05, q0=0.5, alpha=0.2, shift1=-1.0),
    SuperSubParams("upper-two-sided", p0=0.02, q0=0.2, alpha=0.05,
                   shift0=-20.0, shift1=-1.0),
    SuperSubParams("lower-two-sided", p0=0.02, q0=0.3, alpha=0.05,
                   shift0=-10.0, shift1=1.0),
    SuperSubParams("appendix-lower", p0=0.04, q0=0.02, alpha=0.02,
                   shift0=10.0, shift1=1.0, eps=0.05),
]

pairs = {}
for ssp in cases:
    w = solve_perturbed_wave(p, ssp.eps) if ssp.family == "appendix-lower" \
        else wave
    con = check_constraints(p, ssp, w.speed)
    pair = build_pair(p, ssp, w)
    rep = evaluate_residuals(pair)
    pairs[ssp.family] = pair
    print(f"{ssp.family:16s} ({pair.kind:5s}): constraints "
          f"{'ok' if con.ok else 'VIOLATED'}, residual signs "
          f"{'clean' if rep.clean else 'violated'}, valid from t* = "
          f"{rep.t_star}")

# independent cross-check: raw finite-difference residuals agree with the
# reduced (cancellation-free) form
pair = pairs["lower-simple"]
t, x = 30.0, np.linspace(-10.0, 20.0, 7)
n1, n2, *_ = pair.residuals(t, x)
f1, f2 = residuals_fd(pair, t, x)
print(f"\nreduced vs finite-difference residuals: "
      f"max gap {max(np.max(np.abs(n1 - f1)), np.max(np.abs(n2 - f2))):.1e}")

# certificate: fully established u on a wide block dominates the lower
# two-sided pair at its validated time, so invasion is guaranteed
pair = pairs["lower-two-sided"]
rep = evaluate_residuals(pair)
x = np.linspace(-80.0, 80.0, 1601)
u0 = np.where(np.abs(x) <= 55.0, 1.0, 0.0)
v0 = np.zeros_like(x)
cert = invasion_certificate(u0, v0, x, pair, rep.t_star)
print(f"invasion certificate: {cert.ok} "
      f"(margins u {cert.margin_u:+.3f}, v {cert.margin_v:+.3f})")
