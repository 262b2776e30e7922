"""Monotone finite-difference simulator for the competition system.

Explicit Euler in time with second-order central differences in space.
Under the stability restrictions enforced here the update preserves the
competitive order (u1 >= u2 and v1 <= v2 propagate forward in time) and
the invariant box 0 <= u <= max(1, sup u0), 0 <= v <= max(1, sup v0),
which is what makes super/subsolution arguments transfer to the discrete
dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, reaction_u, reaction_v

__all__ = [
    "Grid",
    "FieldState",
    "InitialCondition",
    "Trajectory",
    "ComparisonReport",
    "make_initial",
    "default_dt",
    "step",
    "simulate",
    "comparison_check",
]

# a moving front is reported when it enters this many cells from an end
BOUNDARY_GUARD_CELLS = 20


@dataclass(frozen=True)
class Grid:
    """Uniform spatial grid on [x_min, x_max] with n nodes.

    boundary is "neumann" (zero flux, mirror closure) or "pinned" (both
    end values held at their initial values; appropriate for data that are
    constant near the ends).
    """

    x_min: float
    x_max: float
    n: int
    boundary: str = "neumann"

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("grid too coarse")
        if self.x_max <= self.x_min:
            raise ValueError("empty domain")
        if self.boundary not in ("neumann", "pinned"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


@dataclass
class FieldState:
    """Both species sampled on a grid at one time."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.u.copy(), self.v.copy())


def _taper(x, lo, hi, width):
    """C^1 bump supported exactly on [lo, hi]: flat top, cosine ramps of
    the given width just inside the endpoints, identically zero outside."""
    if 2 * width > hi - lo:
        raise ValueError("taper wider than the support")
    y = np.zeros_like(x)
    core = (x >= lo + width) & (x <= hi - width)
    y[core] = 1.0
    if width > 0:
        left = (x >= lo) & (x < lo + width)
        y[left] = 0.5 * (1.0 - np.cos(np.pi * (x[left] - lo) / width))
        right = (x > hi - width) & (x <= hi)
        y[right] = 0.5 * (1.0 - np.cos(np.pi * (hi - x[right]) / width))
    return y


def _ramp_down(x, edge, width):
    """1 far left, 0 for x >= edge, cosine ramp on [edge - width, edge]."""
    y = np.zeros_like(x)
    y[x <= edge - width] = 1.0
    m = (x > edge - width) & (x < edge)
    if width > 0:
        y[m] = 0.5 * (1.0 + np.cos(np.pi * (x[m] - edge + width) / width))
    return y


@dataclass(frozen=True)
class InitialCondition:
    """Initial data described by scenario.

    scenario:
      "compact-both"  u and v compactly supported bumps (both invaders)
      "compact-u"     u a compact bump over a uniform v background
      "step"          u = 1 left of x_u, v = 1 right of x_v (front data;
                      combine with pinned boundaries)
      "custom"        explicit samples in u_values / v_values
    """

    scenario: str
    u_support: tuple[float, float] = (-10.0, 10.0)
    u_amplitude: float = 1.0
    v_support: tuple[float, float] = (-10.0, 10.0)
    v_amplitude: float = 1.0
    v_background: float = 1.0
    taper: float = 2.0
    x_u: float = 0.0
    x_v: float = 0.0
    u_values: np.ndarray | None = None
    v_values: np.ndarray | None = None


def make_initial(grid: Grid, ic: InitialCondition) -> FieldState:
    """Sample an initial condition on a grid.

    Compact supports must fit inside the grid with a margin of at least
    10 dx (otherwise truncation would corrupt the scenario).
    """
    x = grid.x
    margin = 10 * grid.dx
    s = ic.scenario
    if s in ("compact-both", "compact-u"):
        supports = [ic.u_support] + ([ic.v_support] if s == "compact-both" else [])
        for lo, hi in supports:
            if lo - margin < grid.x_min or hi + margin > grid.x_max:
                raise ValueError("support must sit 10 dx inside the grid")
    if s == "compact-both":
        u = ic.u_amplitude * _taper(x, *ic.u_support, ic.taper)
        v = ic.v_amplitude * _taper(x, *ic.v_support, ic.taper)
    elif s == "compact-u":
        u = ic.u_amplitude * _taper(x, *ic.u_support, ic.taper)
        v = np.full_like(x, ic.v_background)
    elif s == "step":
        u = ic.u_amplitude * _ramp_down(x, ic.x_u, ic.taper)
        v = ic.v_amplitude * _ramp_down(-x, -ic.x_v, ic.taper)
    elif s == "custom":
        if ic.u_values is None or ic.v_values is None:
            raise ValueError("custom scenario needs explicit samples")
        u = np.asarray(ic.u_values, dtype=float).copy()
        v = np.asarray(ic.v_values, dtype=float).copy()
        if u.shape != x.shape or v.shape != x.shape:
            raise ValueError("sample shape does not match the grid")
    else:
        raise ValueError(f"unknown scenario {s!r}")
    if u.min() < 0 or v.min() < 0:
        raise ValueError("initial data must be nonnegative")
    return FieldState(0.0, u, v)


def reaction_lipschitz(params: ModelParams, u_max: float, v_max: float) -> float:
    """Bound on the kinetic Jacobian over the box [0,u_max] x [0,v_max]."""
    lam_u = params.r * (1.0 + 2.0 * u_max + params.a * v_max)
    lam_v = 1.0 + 2.0 * v_max + params.b * u_max
    return max(lam_u, lam_v)


def default_dt(params: ModelParams, grid: Grid, u_max: float = 1.0,
               v_max: float = 1.0, safety: float = 0.9) -> float:
    """Largest stable time step (with a safety factor)."""
    diff = grid.dx ** 2 / (2.0 * max(params.d, 1.0))
    reac = 1.0 / reaction_lipschitz(params, u_max, v_max)
    return safety * min(diff, reac)


def _laplacian(f, dx, boundary, out):
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / dx**2
    if boundary == "neumann":
        out[0] = 2.0 * (f[1] - f[0]) / dx**2
        out[-1] = 2.0 * (f[-2] - f[-1]) / dx**2
    else:  # pinned: end values never move
        out[0] = 0.0
        out[-1] = 0.0
    return out


def step(state: FieldState, params: ModelParams, grid: Grid, dt: float,
         work=None, skip_v: bool = False) -> FieldState:
    """One explicit Euler step.  Mutates and returns state.

    Raises when dt violates either stability restriction for the current
    solution box (diffusive CFL, or dt * Lipschitz(reaction) > 1).
    """
    u, v = state.u, state.v
    dx = grid.dx
    u_max = max(1.0, u.max())
    v_max = max(1.0, v.max())
    if dt > dx * dx / (2.0 * max(params.d, 1.0)) * (1 + 1e-12):
        raise ValueError("dt violates the diffusive stability bound")
    if dt * reaction_lipschitz(params, u_max, v_max) > 1.0 + 1e-12:
        raise ValueError("dt violates the kinetic stability bound")
    if work is None:
        work = np.empty_like(u)
    ru = reaction_u(u, v, params)
    rv = None if skip_v else reaction_v(u, v, params)
    lap = _laplacian(u, dx, grid.boundary, work)
    if grid.boundary == "pinned":
        ru[0] = ru[-1] = 0.0
        lap[0] = lap[-1] = 0.0
    u += dt * (params.d * lap + ru)
    if not skip_v:
        lap = _laplacian(v, dx, grid.boundary, work)
        if grid.boundary == "pinned":
            rv[0] = rv[-1] = 0.0
            lap[0] = lap[-1] = 0.0
        v += dt * (lap + rv)
    state.t += dt
    return state


@dataclass
class Trajectory:
    """Simulation output: snapshots at the requested times plus metadata."""

    params: ModelParams
    grid: Grid
    dt: float
    times: np.ndarray
    snapshots: list[FieldState]
    boundary_warning: bool = False
    box_violation: float = 0.0

    def snapshot_at(self, t: float) -> FieldState:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9:
            raise KeyError(f"no snapshot at t = {t}")
        return self.snapshots[i]


def _front_near_boundary(f):
    """A front is 'present' where values sit strictly between the states."""
    return np.any((f > 0.02) & (f < 0.98))


def simulate(params: ModelParams, grid: Grid, ic, t_end: float,
             output_times=None, dt: float | None = None,
             observer=None) -> Trajectory:
    """March the system to t_end, storing snapshots at output_times.

    ic is an InitialCondition or a FieldState already on the grid.  When
    observer is given it is called as observer(state) at every output time
    and snapshot storage is skipped (for long runs).  Output times must be
    (near-)multiples of dt.  A warning flag is set when a front of either
    species comes within 20 cells of a boundary.
    """
    state = make_initial(grid, ic) if isinstance(ic, InitialCondition) else ic.copy()
    if state.u.shape != (grid.n,):
        raise ValueError("state does not match the grid")
    u_max0 = max(1.0, float(state.u.max()))
    v_max0 = max(1.0, float(state.v.max()))
    if dt is None:
        dt = default_dt(params, grid, u_max0, v_max0)
    if output_times is None:
        output_times = np.array([0.0, t_end])
    output_times = np.asarray(output_times, dtype=float)
    if np.any(output_times < 0) or np.any(output_times > t_end + 1e-9):
        raise ValueError("output times outside [0, t_end]")
    steps_to = np.round(output_times / dt).astype(int)
    if np.max(np.abs(steps_to * dt - output_times)) > 1e-7:
        raise ValueError("output times must be multiples of dt")

    skip_v = bool(np.all(state.v == 0.0))  # v == 0 is invariant: single species
    dx = grid.dx
    d, r, a, b = params.d, params.r, params.a, params.b
    if dt > dx * dx / (2.0 * max(d, 1.0)) * (1 + 1e-12):
        raise ValueError("dt violates the diffusive stability bound")
    if dt * reaction_lipschitz(params, u_max0, v_max0) > 1.0 + 1e-12:
        raise ValueError("dt violates the kinetic stability bound")

    n_steps = int(round(t_end / dt))
    if abs(n_steps * dt - t_end) > 1e-7:
        n_steps = math.ceil(t_end / dt - 1e-12)

    u, v = state.u, state.v
    lap_u = np.empty_like(u)
    lap_v = np.empty_like(v)
    guard = BOUNDARY_GUARD_CELLS

    times = []
    snapshots = []
    boundary_warning = False
    box_hi_u = u_max0 + 1e-12
    box_hi_v = v_max0 + 1e-12
    box_violation = 0.0
    out_set = {int(s) for s in steps_to}

    def emit(k):
        nonlocal boundary_warning, box_violation
        st = FieldState(k * dt, u, v)
        for f in (u,) if skip_v else (u, v):
            if (_front_near_boundary(f[:guard])
                    or _front_near_boundary(f[-guard:])):
                boundary_warning = True
        box_violation = max(
            box_violation,
            float(max(-u.min(), u.max() - box_hi_u,
                      0.0 if skip_v else max(-v.min(), v.max() - box_hi_v))),
        )
        if observer is not None:
            observer(FieldState(k * dt, u, v))
        else:
            times.append(k * dt)
            snapshots.append(st.copy())

    if 0 in out_set:
        emit(0)
    pinned = grid.boundary == "pinned"
    for k in range(1, n_steps + 1):
        _laplacian(u, dx, grid.boundary, lap_u)
        ru = r * u * (1.0 - u - a * v)
        if skip_v:
            if pinned:
                ru[0] = ru[-1] = 0.0
                lap_u[0] = lap_u[-1] = 0.0
            u += dt * (d * lap_u + ru)
        else:
            _laplacian(v, dx, grid.boundary, lap_v)
            rv = v * (1.0 - v - b * u)
            if pinned:
                ru[0] = ru[-1] = 0.0
                rv[0] = rv[-1] = 0.0
                lap_u[0] = lap_u[-1] = 0.0
                lap_v[0] = lap_v[-1] = 0.0
            u += dt * (d * lap_u + ru)
            v += dt * (lap_v + rv)
        if k in out_set:
            emit(k)

    return Trajectory(
        params=params, grid=grid, dt=dt,
        times=np.array(times) if observer is None else output_times,
        snapshots=snapshots,
        boundary_warning=boundary_warning,
        box_violation=box_violation,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Worst violation of the competitive order between two trajectories
    expected to satisfy u1 >= u2, v1 <= v2 at every node and output time."""

    ordered: bool
    max_violation: float
    where_t: float
    where_x: float
    which: str


def comparison_check(traj_hi: Trajectory, traj_lo: Trajectory,
                     tol: float = 1e-10) -> ComparisonReport:
    """Check the competitive order (u of traj_hi above, v below) pointwise.

    Both trajectories must share grid, parameters, dt and output times.
    """
    if traj_hi.grid != traj_lo.grid:
        raise ValueError("grids differ")
    if traj_hi.params != traj_lo.params:
        raise ValueError("parameters differ")
    if (len(traj_hi.times) != len(traj_lo.times)
            or np.max(np.abs(traj_hi.times - traj_lo.times)) > 1e-9):
        raise ValueError("output times differ")
    worst = 0.0
    wt = wx = 0.0
    which = ""
    x = traj_hi.grid.x
    for s1, s2 in zip(traj_hi.snapshots, traj_lo.snapshots):
        du = s2.u - s1.u  # positive where order is violated
        dv = s1.v - s2.v
        for name, dvals in (("u", du), ("v", dv)):
            i = int(np.argmax(dvals))
            if dvals[i] > worst:
                worst = float(dvals[i])
                wt, wx, which = s1.t, float(x[i]), name
    return ComparisonReport(
        ordered=worst <= tol, max_violation=worst,
        where_t=wt, where_x=wx, which=which,
    )
