"""Comparison pairs (super- and subsolutions) built from front profiles.

Each family perturbs a computed traveling front by exponentially decaying
amplitude and shift corrections.  With

    N1[u, v] = u_t - d u_xx - r u (1 - u - a v),
    N2[u, v] = v_t -   v_xx -   v (1 - v - b u),

a subsolution pair (u-, v+) satisfies N1 <= 0, N2 >= 0 and a supersolution
pair (u+, v-) the reverse; the comparison principle then traps real
solutions between validated pairs.

All components have the form  sum_k g_k(t) W(s_k x - c t + w(t)) + h(t)
with s_k = +-1 and w(t) = shift0 - shift1 exp(-rho t), optionally clipped
at zero.  Because the base profile W solves its own traveling-wave
equations, the second derivative can be eliminated analytically and the
residuals reduce to

    N1 = sum g_k' U_k + w' sum g_k U_k' + h' + sum g_k f0(U_k, V_k) - f(u, v)

(and its v analogue), which is what evaluate_residuals computes: the only
numerical ingredients are interpolated profile values and first
derivatives, so no large cancellations are left.  Where a clipped
component vanishes the corresponding residual is exactly zero (reported
and flagged as a kink).  A finite-difference route on the raw (t, x)
dependence is provided as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, reaction_u, reaction_v, canonical_speeds
from .waves import WaveProfile, _perturbed_rates

__all__ = [
    "FAMILIES",
    "SuperSubParams",
    "ComparisonPair",
    "ConstraintReport",
    "ResidualReport",
    "Certificate",
    "check_constraints",
    "build_pair",
    "evaluate_residuals",
    "residuals_fd",
    "invasion_certificate",
]

FAMILIES = (
    "lower-simple",      # front minus a sagging amplitude; subsolution
    "upper-simple",      # front plus a swelling amplitude; supersolution
    "upper-two-sided",   # mirrored fronts glued above; supersolution
    "lower-two-sided",   # mirrored fronts glued below; subsolution
    "appendix-lower",    # mirrored perturbed fronts glued below; subsolution
)

# default lattice for residual verification
DEFAULT_XI = (-40.0, 40.0, 0.05)
DEFAULT_T = (0.0, 200.0, 0.5)
VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class SuperSubParams:
    """Free parameters of a comparison-pair family.

    p0, q0     initial sizes of the amplitude corrections (positive)
    alpha      common decay rate of the corrections
    shift0     asymptotic value of the time-dependent shift
    shift1     size of the decaying part of the shift (sign is
               family-specific: positive for the lower families,
               negative for the upper ones)
    eps        habitat perturbation, used only by "appendix-lower"
    """

    family: str
    p0: float
    q0: float
    alpha: float
    shift0: float = 0.0
    shift1: float = 1.0
    eps: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class ConstraintReport:
    ok: bool
    clauses: tuple[tuple[str, bool], ...]

    @property
    def violated(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.clauses if not ok)


def _two_sided_rate_bound(params: ModelParams, c: float, eps: float) -> float:
    """min(lam_u c, lam_v c, 1/4) where lam_u, lam_v are the decay rates of
    the profile deficits behind the front; finite only for advancing fronts."""
    if c <= 0:
        return 0.0
    _, _, lam3, lam4 = _perturbed_rates(params, c, eps)
    lam_u = min(lam3, lam4)  # rate of the u deficit at -inf
    return min(lam_u * c, lam4 * c, 0.25)


def check_constraints(params: ModelParams, ssp: SuperSubParams,
                      c: float) -> ConstraintReport:
    """Named sufficient conditions under which a family's residuals have
    the right sign for all large times.  c is the speed of the base front."""
    r, a, b = params.r, params.a, params.b
    p0, q0, al = ssp.p0, ssp.q0, ssp.alpha
    cl: list[tuple[str, bool]] = [
        ("p0 > 0", p0 > 0),
        ("q0 > 0", q0 > 0),
        ("alpha > 0", al > 0),
    ]
    f = ssp.family
    if f == "lower-simple":
        cl += [
            ("alpha < min(r, 1, (a-1) r)", al < min(r, 1.0, (a - 1.0) * r)),
            ("p0 < (q0 / b) (1 - alpha) / 2", p0 < (q0 / b) * (1.0 - al) / 2.0),
            ("shift1 > 0", ssp.shift1 > 0),
        ]
    elif f == "upper-simple":
        cl += [
            ("alpha < min(r, 1, b - 1)", al < min(r, 1.0, b - 1.0)),
            ("p0 < q0 (1 - alpha) / (2 a)", p0 < q0 * (1.0 - al) / (2.0 * a)),
            ("shift1 < 0", ssp.shift1 < 0),
        ]
    elif f == "upper-two-sided":
        cl += [
            ("advancing front (c > 0)", c > 0),
            ("q0 > 2 b p0", q0 > 2.0 * b * p0),
            ("alpha < min(lam_u c, lam_v c, 1/4)",
             al < _two_sided_rate_bound(params, c, 0.0)),
            ("shift1 < 0", ssp.shift1 < 0),
            ("shift0 < 0", ssp.shift0 < 0),
        ]
    elif f == "lower-two-sided":
        cl += [
            ("advancing front (c > 0)", c > 0),
            ("q0 > 2 b (1 + q0) p0", q0 > 2.0 * b * (1.0 + q0) * p0),
            ("alpha < min(lam_u c, lam_v c, 1/4)",
             al < _two_sided_rate_bound(params, c, 0.0)),
            ("shift1 > 0", ssp.shift1 > 0),
            ("shift0 <= 0", ssp.shift0 <= 0),
        ]
    elif f == "appendix-lower":
        e = ssp.eps
        bistable = (e > 0 and params.a * (1.0 + e) > 1.0 - e
                    and params.b * (1.0 - e) > 1.0 + e)
        rate_bound = min(_two_sided_rate_bound(params, c, e),
                         r * (a - 1.0), b - 1.0) if bistable else 0.0
        cl += [
            ("eps > 0 and perturbed system bistable", bistable),
            ("advancing front (c > 0)", c > 0),
            ("p0 = a q0", abs(p0 - a * q0) <= 1e-12 * max(1.0, a * q0)),
            ("alpha < min(lam_u c, lam_v c, r (a-1), b-1)", al < rate_bound),
            ("shift1 > 0", ssp.shift1 > 0),
            ("shift0 >= 0", ssp.shift0 >= 0),
        ]
    return ConstraintReport(ok=all(ok for _, ok in cl), clauses=tuple(cl))


@dataclass
class ComparisonPair:
    """An evaluable super- or subsolution candidate.

    kind is "sub" (expect N1 <= 0 <= N2) or "super" (the reverse).
    u_terms / v_terms are (sign, amplitude(t), amplitude'(t)) triples; the
    offsets are (h(t), h'(t)) pairs.  clip_u / clip_v truncate the
    component at zero.
    """

    family: str
    kind: str
    params: ModelParams
    ssp: SuperSubParams
    wave: WaveProfile
    shift_rate: float
    u_terms: list = field(default_factory=list)
    v_terms: list = field(default_factory=list)
    u_offset: tuple = (lambda t: 0.0, lambda t: 0.0)
    v_offset: tuple = (lambda t: 0.0, lambda t: 0.0)
    clip_u: bool = False
    clip_v: bool = False

    # -- geometry ---------------------------------------------------------
    def shift(self, t):
        return self.ssp.shift0 - self.ssp.shift1 * np.exp(-self.shift_rate * t)

    def shift_prime(self, t):
        return self.ssp.shift1 * self.shift_rate * np.exp(-self.shift_rate * t)

    def _xis(self, t, x):
        w = self.shift(t)
        c = self.wave.speed
        return [s * x - c * t + w for s, _, _ in self.u_terms]

    # -- components -------------------------------------------------------
    def u(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        val = self.u_offset[0](t) * np.ones(np.broadcast(t, x).shape)
        for (s, g, _), xi in zip(self.u_terms, self._xis(t, x)):
            val = val + g(t) * self.wave.u(xi)
        return np.maximum(val, 0.0) if self.clip_u else val

    def v(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        val = self.v_offset[0](t) * np.ones(np.broadcast(t, x).shape)
        for (s, m, _), xi in zip(self.v_terms, self._xis(t, x)):
            val = val + m(t) * self.wave.v(xi)
        return np.maximum(val, 0.0) if self.clip_v else val

    # -- reduced residuals ------------------------------------------------
    def residuals(self, t, x):
        """N1, N2 and the kink masks at one time over an array of x."""
        x = np.asarray(x, dtype=float)
        w = float(self.shift(t))
        wp = float(self.shift_prime(t))
        c = self.wave.speed
        xis = [s * x - c * t + w for s, _, _ in self.u_terms]
        Us = [self.wave.u(xi) for xi in xis]
        Vs = [self.wave.v(xi) for xi in xis]
        Ups = [self.wave.u_prime(xi) for xi in xis]
        Vps = [self.wave.v_prime(xi) for xi in xis]

        u_smooth = self.u_offset[0](t) + sum(
            g(t) * U for (_, g, _), U in zip(self.u_terms, Us))
        v_smooth = self.v_offset[0](t) + sum(
            m(t) * V for (_, m, _), V in zip(self.v_terms, Vs))
        kink_u = self.clip_u & (u_smooth <= 0.0)
        kink_v = self.clip_v & (v_smooth <= 0.0)
        u = np.where(kink_u, 0.0, u_smooth) if self.clip_u else u_smooth
        v = np.where(kink_v, 0.0, v_smooth) if self.clip_v else v_smooth

        N1 = (self.u_offset[1](t)
              + sum(gp(t) * U for (_, _, gp), U in zip(self.u_terms, Us))
              + wp * sum(g(t) * Up for (_, g, _), Up in zip(self.u_terms, Ups))
              + sum(g(t) * self.wave.f_base(U, V)
                    for (_, g, _), U, V in zip(self.u_terms, Us, Vs))
              - reaction_u(u, v, self.params))
        N2 = (self.v_offset[1](t)
              + sum(mp(t) * V for (_, _, mp), V in zip(self.v_terms, Vs))
              + wp * sum(m(t) * Vp for (_, m, _), Vp in zip(self.v_terms, Vps))
              + sum(m(t) * self.wave.g_base(U, V)
                    for (_, m, _), U, V in zip(self.v_terms, Us, Vs))
              - reaction_v(u, v, self.params))
        if self.clip_u:
            N1 = np.where(kink_u, 0.0, N1)
        if self.clip_v:
            N2 = np.where(kink_v, 0.0, N2)
        return N1, N2, kink_u, kink_v


def _exp(coef, rate):
    f = lambda t: coef * np.exp(-rate * t)
    fp = lambda t: -coef * rate * np.exp(-rate * t)
    return f, fp


def _const(value):
    return (lambda t: value + 0.0 * np.asarray(t, dtype=float)), \
           (lambda t: 0.0 * np.asarray(t, dtype=float))


def build_pair(params: ModelParams, ssp: SuperSubParams,
               wave: WaveProfile) -> ComparisonPair:
    """Assemble the evaluable pair for a family on top of a base front.

    The base front must be bistable for the first four families and the
    perturbed front with matching eps for "appendix-lower".  Parameter
    constraints are not enforced here (build freely, then check).
    """
    f = ssp.family
    if f == "appendix-lower":
        if wave.kind != "perturbed" or abs(wave.eps - ssp.eps) > 1e-12:
            raise ValueError("appendix-lower needs the perturbed front "
                             "with the same eps")
    elif wave.kind != "bistable":
        raise ValueError(f"{f} needs the bistable front")

    al = ssp.alpha
    p0, q0 = ssp.p0, ssp.q0
    p, pp = _exp(p0, al)
    q, qp = _exp(q0, al)
    one = _const(1.0)

    if f == "lower-simple":
        return ComparisonPair(
            family=f, kind="sub", params=params, ssp=ssp, wave=wave,
            shift_rate=al / 2.0,
            u_terms=[(+1, *one)],
            u_offset=(lambda t: -p(t), lambda t: -pp(t)),
            clip_u=True,
            v_terms=[(+1, lambda t: 1.0 + q(t), qp)],
        )
    if f == "upper-simple":
        return ComparisonPair(
            family=f, kind="super", params=params, ssp=ssp, wave=wave,
            shift_rate=al / 2.0,
            u_terms=[(+1, lambda t: 1.0 + q(t), qp)],
            v_terms=[(+1, *one)],
            v_offset=(lambda t: -p(t), lambda t: -pp(t)),
            clip_v=True,
        )
    if f == "upper-two-sided":
        amp = (lambda t: 1.0 - q(t), lambda t: -qp(t))
        return ComparisonPair(
            family=f, kind="super", params=params, ssp=ssp, wave=wave,
            shift_rate=al / 2.0,
            u_terms=[(+1, *one), (-1, *one)],
            u_offset=(lambda t: -1.0 + p(t), pp),
            v_terms=[(+1, *amp), (-1, *amp)],
        )
    if f == "lower-two-sided":
        amp = (lambda t: 1.0 + q(t), qp)
        return ComparisonPair(
            family=f, kind="sub", params=params, ssp=ssp, wave=wave,
            shift_rate=al / 2.0,
            u_terms=[(+1, *one), (-1, *one)],
            u_offset=(lambda t: -1.0 - p(t), lambda t: -pp(t)),
            clip_u=True,
            v_terms=[(+1, *amp), (-1, *amp)],
        )
    # appendix-lower: perturbed fronts glued below, decay rate alpha on all
    # corrections and on the shift itself
    e = ssp.eps
    return ComparisonPair(
        family=f, kind="sub", params=params, ssp=ssp, wave=wave,
        shift_rate=al,
        u_terms=[(+1, *one), (-1, *one)],
        u_offset=(lambda t: -(1.0 - e) - p(t), lambda t: -pp(t)),
        clip_u=True,
        v_terms=[(+1, *one), (-1, *one)],
        v_offset=(q, qp),
    )


@dataclass(frozen=True)
class ResidualReport:
    """Sign verification of a pair's residuals over a (t, xi) lattice.

    The lattice tracks the (right-moving) front: x = xi + c t - shift(t).
    t_star is the first lattice time from which on no violations occur
    (inf when the final time still violates); worst_* record the largest
    wrong-signed residual values and their locations.
    """

    family: str
    kind: str
    t_values: np.ndarray
    violations_per_time: np.ndarray
    t_star: float
    clean: bool
    worst_n1: float
    worst_n1_at: tuple[float, float]
    worst_n2: float
    worst_n2_at: tuple[float, float]
    kink_fraction: float
    tol: float


def evaluate_residuals(pair: ComparisonPair,
                       t_range: tuple[float, float, float] = DEFAULT_T,
                       xi_range: tuple[float, float, float] = DEFAULT_XI,
                       tol: float = VIOLATION_TOL) -> ResidualReport:
    """Evaluate both residuals on the moving lattice and find T*.

    A violation is a residual on the wrong side of zero by more than tol
    (slack for interpolation noise; the analytic reduction leaves no O(1)
    cancellations, so tol can be tiny)."""
    t0, t1, dt = t_range
    x0, x1, dx = xi_range
    ts = np.arange(t0, t1 + dt / 2, dt)
    xis = np.arange(x0, x1 + dx / 2, dx)
    c = pair.wave.speed

    sign = 1.0 if pair.kind == "sub" else -1.0  # sign * N1 must be <= 0
    viol = np.zeros(len(ts), dtype=int)
    worst1 = worst2 = 0.0
    at1 = at2 = (np.nan, np.nan)
    kinks = 0
    total = 0
    for i, t in enumerate(ts):
        x = xis + c * t - float(pair.shift(t))
        N1, N2, ku, kv = pair.residuals(t, x)
        e1 = sign * N1   # must be <= tol
        e2 = -sign * N2
        bad = (e1 > tol) | (e2 > tol)
        viol[i] = int(np.count_nonzero(bad))
        m1 = float(np.max(e1))
        m2 = float(np.max(e2))
        if m1 > worst1:
            worst1 = m1
            at1 = (float(t), float(x[int(np.argmax(e1))]))
        if m2 > worst2:
            worst2 = m2
            at2 = (float(t), float(x[int(np.argmax(e2))]))
        kinks += int(np.count_nonzero(ku) + np.count_nonzero(kv))
        total += 2 * len(x)

    idx = np.nonzero(viol)[0]
    if len(idx) == 0:
        t_star, clean = float(ts[0]), True
    elif idx[-1] == len(ts) - 1:
        t_star, clean = math.inf, False
    else:
        t_star, clean = float(ts[idx[-1] + 1]), True
    return ResidualReport(
        family=pair.family, kind=pair.kind, t_values=ts,
        violations_per_time=viol, t_star=t_star, clean=clean,
        worst_n1=worst1, worst_n1_at=at1,
        worst_n2=worst2, worst_n2_at=at2,
        kink_fraction=kinks / total, tol=tol,
    )


def residuals_fd(pair: ComparisonPair, t: float, x: np.ndarray,
                 ht: float = 1e-3, hx: float = 1e-3):
    """Independent residual evaluation: fourth-order central differences
    applied directly to the pair's (t, x) dependence.  Noisier than the
    reduced form (it re-creates the traveling-wave cancellation) but free
    of its algebra; used to cross-check signs and magnitudes."""
    x = np.asarray(x, dtype=float)
    c1, c2 = 8.0, 1.0

    def dts(f):
        return (c2 * f(t - 2 * ht, x) - c1 * f(t - ht, x)
                + c1 * f(t + ht, x) - c2 * f(t + 2 * ht, x)) / (12.0 * ht)

    def dxx(f):
        return (-c2 * f(t, x - 2 * hx) + 16.0 * f(t, x - hx) - 30.0 * f(t, x)
                + 16.0 * f(t, x + hx) - c2 * f(t, x + 2 * hx)) / (12.0 * hx**2)

    u = pair.u(t, x)
    v = pair.v(t, x)
    N1 = dts(pair.u) - pair.params.d * dxx(pair.u) - reaction_u(u, v, pair.params)
    N2 = dts(pair.v) - dxx(pair.v) - reaction_v(u, v, pair.params)
    return N1, N2


@dataclass(frozen=True)
class Certificate:
    """Pointwise domination of initial data by a validated lower pair."""

    ok: bool
    margin_u: float
    margin_v: float
    t_reference: float


def invasion_certificate(u0: np.ndarray, v0: np.ndarray, x: np.ndarray,
                         pair: ComparisonPair, t_reference: float) -> Certificate:
    """Check u0 >= u-(t_ref, x) and v0 <= v+(t_ref, x) on the grid.

    With a validated subsolution pair (residual signs clean from t_ref on),
    a true solution starting above/below it at t_ref stays so forever, so
    u -> 1, v -> 0 spreads: successful invasion is certified.  The margins
    are the worst-case slacks (negative margin = certificate fails)."""
    if pair.kind != "sub":
        raise ValueError("certificate needs a subsolution pair")
    mu = float(np.min(u0 - pair.u(t_reference, x)))
    mv = float(np.min(pair.v(t_reference, x) - v0))
    return Certificate(ok=(mu >= 0.0 and mv >= 0.0), margin_u=mu,
                       margin_v=mv, t_reference=t_reference)
