"""Model parameters, canonical speeds and linearization data.

The system studied throughout the package is the two-species competition
diffusion system in dimensionless form

    u_t = d u_xx + r u (1 - u - a v),
    v_t =   v_xx +   v (1 - v - b u),

on the real line, in the strong-competition regime a > 1, b > 1 where
(1, 0) and (0, 1) are the only stable homogeneous states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "ModelParams",
    "SpeedSet",
    "CharacteristicRoots",
    "Sign",
    "SignPrediction",
    "canonical_speeds",
    "char_roots",
    "predict_front_sign",
    "reaction_u",
    "reaction_v",
]

# relative tolerance below which a pair of decay rates is treated as a
# double root (polynomial prefactor switches on)
DOUBLE_ROOT_RTOL = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters: u-diffusivity d, u-growth rate r and the
    cross-competition coefficients a (action of v on u) and b (u on v)."""

    d: float
    r: float
    a: float
    b: float

    def __post_init__(self):
        if not (self.d > 0 and self.r > 0):
            raise ValueError("d and r must be positive")
        if not (math.isfinite(self.d) and math.isfinite(self.r)
                and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("parameters must be finite")

    @property
    def strong_competition(self) -> bool:
        return self.a > 1.0 and self.b > 1.0


@dataclass(frozen=True)
class SpeedSet:
    """Invasion speeds of the two species into open space and their
    ordering.  c_u = 2 sqrt(r d) (species u), c_v = 2 (species v)."""

    c_u: float
    c_v: float

    @property
    def u_faster(self) -> bool:
        return self.c_u > self.c_v


def canonical_speeds(params: ModelParams) -> SpeedSet:
    """Linear spreading speeds of each species alone into vacant territory."""
    return SpeedSet(c_u=2.0 * math.sqrt(params.r * params.d), c_v=2.0)


def reaction_u(u, v, params: ModelParams):
    """Kinetic term of the u equation, r u (1 - u - a v)."""
    return params.r * u * (1.0 - u - params.a * v)


def reaction_v(u, v, params: ModelParams):
    """Kinetic term of the v equation, v (1 - v - b u)."""
    return v * (1.0 - v - params.b * u)


def _quad_roots(A: float, B: float, C: float) -> tuple[float, float]:
    """Both real roots of A x^2 + B x + C, cancellation-free.

    Requires A != 0 and a positive discriminant.  Returns (smaller, larger).
    """
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        raise ValueError("complex roots")
    sq = math.sqrt(disc)
    if B >= 0.0:
        q = -0.5 * (B + sq)
    else:
        q = -0.5 * (B - sq)
    if q == 0.0:  # B == 0 and C == 0
        return (0.0, 0.0) if A != 0 else (0.0, 0.0)
    r1, r2 = q / A, C / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


@dataclass(frozen=True)
class CharacteristicRoots:
    """Decay rates of a front profile moving at speed c, from linearizing
    the traveling-wave system about its limits.

    lam1: negative root of d z^2 + c z + r(1-a) = 0 (u ahead of the front)
    lam2: negative root of   z^2 + c z - 1      = 0 (v deficit ahead)
    lam3: positive root of d z^2 + c z - r      = 0 (u deficit behind)
    lam4: positive root of   z^2 + c z + 1 - b  = 0 (v behind the front)

    Lam_plus = max(lam1, lam2) governs 1 - V as xi -> +inf, with a linear
    prefactor |xi|^gamma_plus when lam1 and lam2 coincide; Lam_minus =
    min(lam3, lam4) governs 1 - U as xi -> -inf, prefactor |xi|^gamma_minus.
    """

    c: float
    lam1: float
    lam2: float
    lam3: float
    lam4: float
    Lam_plus: float
    Lam_minus: float
    gamma_plus: int
    gamma_minus: int


def char_roots(params: ModelParams, c: float) -> CharacteristicRoots:
    """Characteristic decay rates for a bistable front at speed c.

    Requires strong competition (a > 1 and b > 1) so that all four rates
    are real and have definite sign.
    """
    d, r, a, b = params.d, params.r, params.a, params.b
    if not params.strong_competition:
        raise ValueError("char_roots requires a > 1 and b > 1")
    lam1 = _quad_roots(d, c, r * (1.0 - a))[0]
    lam2 = _quad_roots(1.0, c, -1.0)[0]
    lam3 = _quad_roots(d, c, -r)[1]
    lam4 = _quad_roots(1.0, c, 1.0 - b)[1]
    assert lam1 < 0 and lam2 < 0 and lam3 > 0 and lam4 > 0

    def close(x, y):
        return abs(x - y) < DOUBLE_ROOT_RTOL * max(1.0, abs(x), abs(y))

    return CharacteristicRoots(
        c=c,
        lam1=lam1, lam2=lam2, lam3=lam3, lam4=lam4,
        Lam_plus=max(lam1, lam2),
        Lam_minus=min(lam3, lam4),
        gamma_plus=1 if close(lam1, lam2) else 0,
        gamma_minus=1 if close(lam3, lam4) else 0,
    )


class Sign(Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SignPrediction:
    """A-priori sign of the bistable front speed, with the clause used."""

    sign: Sign
    clause: str


def predict_front_sign(params: ModelParams) -> SignPrediction:
    """Sign of the bistable front speed from the known sufficient criteria.

    * r == d: sign follows the comparison of a and b.
    * r > d:  positive when b >= (r/d)^2 a.
    * r < d:  negative when a >= (d/r)^2 b.

    Anything not covered is reported as UNKNOWN rather than guessed; the
    speed is monotone (decreasing in a, increasing in b) but no sharp
    threshold is available in general.
    """
    d, r, a, b = params.d, params.r, params.a, params.b
    if not params.strong_competition:
        raise ValueError("sign prediction requires a > 1 and b > 1")
    if r == d:
        if b > a:
            return SignPrediction(Sign.POSITIVE, "r = d and b > a > 1")
        if a == b:
            return SignPrediction(Sign.ZERO, "r = d and a = b > 1")
        return SignPrediction(Sign.NEGATIVE, "r = d and a > b > 1")
    if r > d and b >= (r / d) ** 2 * a:
        return SignPrediction(Sign.POSITIVE, "r > d and b >= (r/d)^2 a")
    if r < d and a >= (d / r) ** 2 * b:
        return SignPrediction(Sign.NEGATIVE, "r < d and a >= (d/r)^2 b")
    return SignPrediction(Sign.UNKNOWN, "no applicable criterion")
