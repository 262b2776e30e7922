"""The propagating terrace in the slow-u regime.

When u diffuses slowly (c_u < c_v) but still wins locally, invasion happens
in two steps: a fast v front at speed 2 colonizes open space, and the
slower bistable front replaces v by u behind it.  Between the two fronts
the solution sits near (0, 1); ahead of the midpoint ray u is negligible.
"""

import numpy as np

from lvfronts import (Grid, InitialCondition, ModelParams, canonical_speeds,
                      detect_terrace, make_initial, simulate,
                      solve_bistable_wave)

p = ModelParams(d=0.25, r=1, a=1.2, b=20)
sp = canonical_speeds(p)
wave = solve_bistable_wave(p)
print(f"c_u = {sp.c_u}, c_v = {sp.c_v}, c_uv = {wave.speed:.6f} "
      f"(midpoint ray {(wave.speed + sp.c_v) / 2:.3f})")

grid = Grid(x_min=-150.0, x_max=400.0, n=5501, boundary="neumann")
ic = InitialCondition(scenario="compact-both", u_support=(-10.0, 10.0),
                      v_support=(-10.0, 10.0), taper=2.0)
traj = simulate(p, grid, ic, t_end=150.0,
                output_times=np.arange(0.0, 151.0, 5.0), dt=0.004)

rep = detect_terrace(traj, wave.speed, wave=wave)
print(f"terrace detected: {rep.detected}")
print(f"  v front speed {rep.v_front_speed:.4f} (expected ~2)")
print(f"  u front speed {rep.u_front_speed:.4f} "
      f"(expected ~{wave.speed:.4f})")
print(f"  max u ahead of the midpoint ray: {rep.u_beyond_mid:.2e}")

last = traj.snapshots[-1]
mid = int(np.searchsorted(grid.x, (wave.speed + sp.c_v) / 2 * last.t))
print(f"  at t = {last.t:.0f}, between the fronts: "
      f"u = {last.u[mid]:.2e}, v = {last.v[mid]:.4f}")
