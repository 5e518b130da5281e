"""Limit-level wave-speed solvers.

The front speed has a closed form.  The pulse speed is found by nested
root-finding: an inner bisection in the interval width solves the
optimal-width condition for each candidate speed, and an outer bisection in
the speed drives the interval energy along the optimal-width path to zero.
Both levels finish with a few Newton polishing steps using the closed-form
derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, RegimeError
from .limit_energy import (
    front_energy,
    interval_energy,
    speed_ratio,
    width_condition,
)
from .model import SQRT2, Params, RegimeTag, classify, require_regime

#: inner (width) tolerance on the condition value
WIDTH_TOL = 1e-12
#: outer (speed) tolerance on the interval energy
SPEED_TOL = 1e-10


@dataclass(frozen=True)
class FrontResult:
    """Closed-form front speed with its defining data."""

    c_f: float
    h_star: float
    residual: float
    strict: bool

    def to_dict(self) -> dict:
        return {
            "regime": "front",
            "c": self.c_f,
            "h_star": self.h_star,
            "residual": self.residual,
            "strict": self.strict,
        }


@dataclass(frozen=True)
class PulseResult:
    """Pulse speed and geometry: interval [a, b] of width ell_p carrying unit
    weighted measure."""

    c_p: float
    ell_p: float
    a: float
    b: float
    residuals: dict

    def to_dict(self) -> dict:
        return {
            "regime": "pulse",
            "c": self.c_p,
            "ell": self.ell_p,
            "a": self.a,
            "b": self.b,
            "residuals": dict(self.residuals),
        }


def front_condition(c: float, p: Params) -> bool:
    """True when the semi-infinite interval beats every finite width at
    speed c: sqrt(2) gamma / (6 sigma) >= H(c)."""
    if c < 0:
        raise RegimeError(f"speed must be nonnegative, got {c}")
    return SQRT2 * p.gamma / (6.0 * p.sigma) >= speed_ratio(c, p.gamma)


def front_speed(p: Params) -> FrontResult:
    """Closed-form front speed c_f = 2 h* sqrt(gamma) / sqrt(1 - h*^2) with
    h* = 1 - (alpha - 1) gamma / (3 sqrt(2) sigma)."""
    regime = require_regime(p, RegimeTag.FRONT)
    h_star = 1.0 - (p.alpha - 1.0) * p.gamma / (3.0 * SQRT2 * p.sigma)
    c_f = 2.0 * h_star * math.sqrt(p.gamma) / math.sqrt(1.0 - h_star * h_star)
    residual = abs(front_energy(c_f, p).value)
    if not front_condition(c_f, p):  # pragma: no cover - excluded by regime
        raise RegimeError("front speed violates the semi-infinite optimality condition")
    return FrontResult(c_f=c_f, h_star=h_star, residual=residual,
                       strict=regime.strict)


def optimal_width(c: float, p: Params) -> float:
    """Width at which the optimal-width condition vanishes for speed c.

    The condition decreases strictly from +inf to a negative limit in the
    pulse regime, so bisection over an adaptive bracket cannot fail; a
    Newton polish sharpens the bisection root.
    """
    require_regime(p, RegimeTag.PULSE)
    if c <= 0:
        raise RegimeError(f"speed must be positive, got {c}")

    lo = 1e-8
    if width_condition(lo, c, p).value <= 0.0:  # pragma: no cover - defensive
        raise BracketError(f"no positive bracket end at width {lo}")
    hi = math.log((p.alpha + 1.0) / (p.alpha - 1.0)) + 1.0
    while width_condition(hi, c, p).value > 0.0:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - defensive
            raise BracketError("optimal-width bracket expansion failed")

    while hi - lo > 1e-14 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if width_condition(mid, c, p).value > 0.0:
            lo = mid
        else:
            hi = mid
    ell = 0.5 * (lo + hi)
    for _ in range(4):
        q = width_condition(ell, c, p)
        if abs(q.value) < WIDTH_TOL or q.d_width == 0.0:
            break
        step = q.value / q.d_width
        if not lo <= ell - step <= hi:
            break
        ell -= step
    return ell


def pulse_speed(p: Params) -> PulseResult:
    """Pulse speed and width from nested bisection.

    The outer function g(c) = interval_energy(optimal_width(c), c) decreases
    strictly in c (the energy is stationary in width along the optimal path
    and strictly decreasing in speed), from sqrt(2)/6 at rest to a negative
    limit, so its zero is unique.
    """
    require_regime(p, RegimeTag.PULSE)

    def g(c: float) -> float:
        return interval_energy(optimal_width(c, p), c, p).value

    lo = 1e-3
    while g(lo) <= 0.0:  # pragma: no cover - g -> sqrt(2)/6 as c -> 0
        lo *= 0.1
        if lo < 1e-12:
            raise BracketError("no positive bracket end for the pulse speed")
    hi = max(1.0, 2.0 * lo)
    while g(hi) >= 0.0:
        hi *= 2.0
        if hi > 1e9:
            raise BracketError("pulse-speed bracket expansion failed")

    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    # Newton polish: along the optimal-width path dg/dc equals the partial
    # speed derivative (the width derivative vanishes on the path).
    for _ in range(4):
        ell = optimal_width(c, p)
        je = interval_energy(ell, c, p)
        if abs(je.value) < SPEED_TOL or je.d_speed == 0.0:
            break
        c_next = c - je.value / je.d_speed
        if not lo <= c_next <= hi:
            break
        c = c_next

    ell = optimal_width(c, p)
    je = interval_energy(ell, c, p)
    b = -math.log(1.0 - math.exp(-ell))
    a = b - ell
    residuals = {
        "J": abs(je.value),
        "dJ_dl": abs(je.d_width),
        "Q": abs(width_condition(ell, c, p).value),
    }
    result = PulseResult(c_p=c, ell_p=ell, a=a, b=b, residuals=residuals)
    _check_pulse(result, je, p)
    return result


def _check_pulse(result: PulseResult, je, p: Params) -> None:
    if result.ell_p <= math.log((p.alpha + 1.0) / (p.alpha - 1.0)):
        raise BracketError(  # pragma: no cover - defensive
            f"pulse width {result.ell_p} below its structural lower bound"
        )
    if je.d_width2 <= 0.0:
        raise BracketError(  # pragma: no cover - defensive
            "pulse solution is not a width minimum"
        )
    if abs(math.exp(result.b) - math.exp(result.a) - 1.0) > 1e-12:
        raise BracketError(  # pragma: no cover - defensive
            "pulse interval is not normalized to unit weighted measure"
        )


def limit_speed(p: Params):
    """Front or pulse result according to the regime; raises in neither."""
    regime = classify(p)
    if regime.is_front:
        return front_speed(p)
    if regime.is_pulse:
        return pulse_speed(p)
    raise RegimeError(
        f"parameters (alpha={p.alpha}, gamma={p.gamma}, sigma={p.sigma}) "
        "support neither a front nor a pulse"
    )
