"""Finite-interface-width energy: recovery profiles, the discrete energy and
its gradient, constrained minimization, and the speed at which the minimum
energy vanishes.

The energy of a profile w at interface width eps and speed c is

    integral of e^x [ (eps/2) w'^2 + F0(w)/eps + alpha G(w) ] dx
    + (sigma/2) integral of e^x w (L_c w) dx

minimized over profiles with unit weighted L2 norm confined to a box.  As
eps shrinks, minimizers approach indicators of the sharp-interface sets and
the zero-crossing speed approaches the limit front or pulse speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, InvalidParameterError
from .model import SQRT2, Params, box_constants
from .nonlocal_operator import InhibitorOperator
from .weighted_space import Grid, IntervalUnion, SampledFunction

#: value tolerance on the minimum energy in the speed bisection
SPEED_VALUE_TOL = 5e-4
#: bracket-width tolerance in the speed bisection
SPEED_BRACKET_TOL = 1e-6


def _f0(u):
    """Balanced double well u^2 (1-u)^2 / 4, vectorized."""
    return 0.25 * u * u * (1.0 - u) ** 2


def _g(u):
    """Tilt potential (u^3/3 - u^2/2) / sqrt(2), vectorized."""
    return (u**3 / 3.0 - 0.5 * u * u) / SQRT2


def _f_eps(u, beta):
    """Cubic nonlinearity -u (u - beta) (u - 1); its negative is the
    derivative of F0/eps + alpha G rescaled by eps."""
    return -u * (u - beta) * (u - 1.0)


@dataclass(frozen=True)
class RecoveryProfile:
    """Monotone interface profile rising from 0 to 1 over [0, rho_eps].

    Solves the first-integral relation eps^2 u'^2 / 2 - F0(u) = eps/2 with
    u(0) = 0 and u(rho_eps) = 1; the falling profile is its reflection.
    """

    eps: float
    rho_eps: float
    x: np.ndarray
    u: np.ndarray

    def rising(self, t):
        """Profile value at t, extended by 0 below and 1 above the window."""
        return np.interp(t, self.x, self.u)

    def falling(self, t):
        """Reflected profile, 1 below the window and 0 above."""
        return np.interp(self.rho_eps - np.asarray(t, dtype=float), self.x, self.u)

    def first_integral_residual(self) -> float:
        """Max deviation of eps^2 u'^2 / 2 - F0(u) from eps/2 along the
        samples, with the derivative taken by central differences."""
        h = self.x[1] - self.x[0]
        du = (self.u[2:] - self.u[:-2]) / (2.0 * h)
        res = 0.5 * self.eps**2 * du**2 - _f0(self.u[1:-1]) - 0.5 * self.eps
        return float(np.max(np.abs(res)))


def recovery_profile(eps: float, n: int = 20001, quad_n: int = 400001) -> RecoveryProfile:
    """Interface profile from inverting x(u) = integral of eps/sqrt(eps+2F0).

    The cumulative integral is trapezoid on a fine u-grid and the inverse is
    sampled on a uniform x-grid of n points; rho_eps comes from the same
    cumulative integral so the endpoint values are exact.
    """
    if eps <= 0:
        raise InvalidParameterError(f"interface width must be positive, got {eps}")
    s = np.linspace(0.0, 1.0, quad_n)
    integrand = eps / np.sqrt(eps + 2.0 * _f0(s))
    ds = s[1] - s[0]
    x_of_s = np.concatenate(
        [[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * ds)]
    )
    rho = float(x_of_s[-1])
    x = np.linspace(0.0, rho, n)
    u = np.interp(x, x_of_s, s)
    u[0], u[-1] = 0.0, 1.0
    return RecoveryProfile(eps=eps, rho_eps=rho, x=x, u=u)


@dataclass(frozen=True)
class AdmissibleProfile:
    """Profile with unit weighted L2 norm confined to the box."""

    w: SampledFunction
    l2e_norm: float
    box: tuple[float, float]

    def __post_init__(self):
        if abs(self.l2e_norm - 1.0) > 1e-8:
            raise InvalidParameterError(
                f"profile norm {self.l2e_norm} is not 1 within 1e-8"
            )
        lo, hi = self.box
        if self.w.values.min() < lo - 1e-12 or self.w.values.max() > hi + 1e-12:
            raise InvalidParameterError(
                f"profile leaves the box [{lo}, {hi}]"
            )


def profile_box(p: Params) -> tuple[float, float]:
    """Box [-m1 - 1, beta2] confining admissible profiles."""
    m1, beta2 = box_constants(p)
    return (-m1 - 1.0, beta2)


def _l2e_norm(grid: Grid, values: np.ndarray) -> float:
    sq = np.trapezoid(grid.weight * values**2, dx=grid.h)
    return math.sqrt(max(float(sq), 0.0))


def solver_grid(e: IntervalUnion, eps: float, pad: float = 10.0) -> Grid:
    """Uniform grid resolving interfaces of width O(eps): spacing eps/8,
    right padding past the rightmost endpoint."""
    return Grid.for_interval(e.rightmost + pad, eps / 8.0)


def build_recovery(e: IntervalUnion, p: Params, grid: Grid) -> AdmissibleProfile:
    """Smooth the indicator of a normalized set with the interface profile.

    Each jump is replaced by the rising or falling profile in a window of
    width rho_eps positioned by a single global offset theta in [0, 1];
    theta = 0 puts every window on the inside of its interval (norm <= 1),
    theta = 1 on the outside (norm >= 1), and a scalar root-find picks the
    offset with unit norm.
    """
    p.require_small_epsilon()
    eps = p.epsilon
    if abs(e.l1e_norm - 1.0) > 1e-8:
        raise InvalidParameterError(
            f"set must have unit weighted measure, got {e.l1e_norm}"
        )
    endpoints = sorted(
        v for iv in e.intervals for v in iv if math.isfinite(v)
    )
    sep = 2.0 * math.sqrt(eps)
    for lo, hi in zip(endpoints[:-1], endpoints[1:]):
        if hi - lo <= sep:
            raise InvalidParameterError(
                f"interfaces at {lo} and {hi} closer than the minimum "
                f"separation {sep}"
            )
    rp = recovery_profile(eps)
    if grid.x_hi < e.rightmost + rp.rho_eps:
        raise InvalidParameterError(
            f"grid ends at {grid.x_hi}, before the rightmost interface "
            f"window reaching {e.rightmost + rp.rho_eps}"
        )

    x = grid.x

    def profile(theta: float) -> np.ndarray:
        values = np.zeros_like(x)
        for a, b in e.intervals:
            piece = rp.rising(b + theta * rp.rho_eps - x)
            if math.isfinite(a):
                piece = np.minimum(piece, rp.rising(x - a + theta * rp.rho_eps))
            values = np.maximum(values, piece)
        return values

    def norm_defect(theta: float) -> float:
        return _l2e_norm(grid, profile(theta)) - 1.0

    d0, d1 = norm_defect(0.0), norm_defect(1.0)
    if d0 > 0.0 or d1 < 0.0:  # pragma: no cover - defensive
        raise BracketError(
            f"interface offset cannot normalize: defects {d0}, {d1}"
        )
    theta = brentq(norm_defect, 0.0, 1.0, xtol=1e-14)
    values = profile(theta)
    return AdmissibleProfile(
        w=SampledFunction(grid, values),
        l2e_norm=_l2e_norm(grid, values),
        box=profile_box(p),
    )


@dataclass(frozen=True)
class EnergyReport:
    """Energy split into gradient, double-well, tilt and nonlocal parts."""

    gradient: float
    potential: float
    tilt: float
    nonlocal_term: float

    @property
    def total(self) -> float:
        return self.gradient + self.potential + self.tilt + self.nonlocal_term


class DiscreteEnergy:
    """The discrete energy on a fixed grid at fixed speed and parameters.

    Quadrature weights are trapezoid against e^x dx; the nonlocal part pairs
    the profile with its finite-difference inhibitor response.  Instances
    are immutable and safe to share across threads.
    """

    def __init__(self, grid: Grid, c: float, p: Params):
        p.require_small_epsilon()
        self.grid = grid
        self.c = c
        self.p = p
        self.op = InhibitorOperator(grid, c, p.gamma)
        q = grid.weight * grid.h
        q[0] *= 0.5
        q[-1] *= 0.5
        self.q = q
        self.box = profile_box(p)

    def report(self, values: np.ndarray) -> EnergyReport:
        eps, p = self.p.epsilon, self.p
        grid = self.grid
        dw = np.diff(values) / grid.h
        gradient = 0.5 * eps * float(np.sum(grid.weight_mid * dw**2 * grid.h))
        potential = float(self.q @ _f0(values)) / eps
        tilt = p.alpha * float(self.q @ _g(values))
        v = self.op.solve(values)
        nonlocal_term = 0.5 * p.sigma * float(self.q @ (values * v))
        return EnergyReport(
            gradient=gradient, potential=potential, tilt=tilt,
            nonlocal_term=nonlocal_term,
        )

    def value_and_grad(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        eps, p = self.p.epsilon, self.p
        grid = self.grid
        beta = p.beta_eps

        dw = np.diff(values) / grid.h
        flux = grid.weight_mid * dw
        gradient_part = 0.5 * eps * float(np.sum(flux * dw * grid.h))
        g_grad = np.zeros_like(values)
        g_grad[:-1] -= flux
        g_grad[1:] += flux
        g_grad *= eps

        local = float(self.q @ (_f0(values) / eps + p.alpha * _g(values)))
        g_local = -self.q * _f_eps(values, beta) / eps

        v = self.op.solve(values)
        nonlocal_part = 0.5 * p.sigma * float(self.q @ (values * v))
        adjoint = self.op.apply_boundary_coupling(
            self.op.solve_transpose(self.q * values)
        )
        g_nonlocal = 0.5 * p.sigma * (self.q * v + adjoint)

        value = gradient_part + local + nonlocal_part
        return value, g_grad + g_local + g_nonlocal

    def preconditioner(self, values: np.ndarray) -> np.ndarray:
        """Diagonal Hessian estimate of the stiff terms, in units of the
        quadrature weight.  Dividing the gradient by it equalizes the step
        scales of the interface (eps/h^2) and well-curvature (1/eps) terms
        against the order-one nonlocal and tilt terms."""
        eps = self.p.epsilon
        beta = self.p.beta_eps
        u = values
        curvature = (3.0 * u * u - 2.0 * (1.0 + beta) * u + beta) / eps
        return (
            2.0 * eps / self.grid.h**2
            + np.maximum(curvature, 0.0)
            + 1.0
        )

    def project(self, values: np.ndarray) -> np.ndarray:
        """Clamp into the box, then rescale to unit weighted L2 norm."""
        clamped = np.clip(values, self.box[0], self.box[1])
        norm = _l2e_norm(self.grid, clamped)
        if norm == 0.0:  # pragma: no cover - defensive
            raise InvalidParameterError("cannot normalize the zero profile")
        return clamped / norm


@dataclass(frozen=True)
class MinimizeResult:
    profile: SampledFunction
    value: float
    report: EnergyReport
    iterations: int
    converged: bool
    grad_norm: float


def minimize_energy(
    engine: DiscreteEnergy,
    init: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 10000,
) -> MinimizeResult:
    """Projected gradient descent on the unit sphere within the box.

    The descent direction is the energy gradient in the weighted L2 metric,
    made tangential to the norm constraint and zeroed on active box faces.
    Steps use a Barzilai-Borwein guess with backtracking; projection is
    box-clamp followed by renormalization.  Accepted steps never increase
    the energy.  On hitting the iteration cap the best iterate is returned
    with ``converged=False``.
    """
    grid, q = engine.grid, engine.q
    lo, hi = engine.box
    w = engine.project(np.asarray(init, dtype=float))
    f, g = engine.value_and_grad(w)
    step = 1.0
    prev_w = prev_d = None
    grad_norm = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        d = g / q
        d -= float(np.sum(q * d * w)) * w
        d[(w <= lo + 1e-12) & (d > 0.0)] = 0.0
        d[(w >= hi - 1e-12) & (d < 0.0)] = 0.0
        grad_norm = math.sqrt(float(np.sum(q * d * d)))
        d /= engine.preconditioner(w)
        if grad_norm < tol:
            return MinimizeResult(
                profile=SampledFunction(grid, w), value=f,
                report=engine.report(w), iterations=it - 1, converged=True,
                grad_norm=grad_norm,
            )
        if prev_w is not None:
            s = w - prev_w
            y = d - prev_d
            sy = float(np.sum(q * s * y))
            if sy > 0.0:
                step = float(np.sum(q * s * s)) / sy
        step = min(max(step, 1e-10), 1e3)
        prev_w, prev_d = w, d

        accepted = False
        t = step
        for _ in range(60):
            trial = engine.project(w - t * d)
            delta = trial - w
            dist2 = float(np.sum(q * delta * delta))
            if dist2 == 0.0:
                break
            f_trial, g_trial = engine.value_and_grad(trial)
            if f_trial <= f - 1e-4 * dist2 / max(t, 1e-300):
                w, f, g = trial, f_trial, g_trial
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
    return MinimizeResult(
        profile=SampledFunction(grid, w), value=f, report=engine.report(w),
        iterations=it, converged=False, grad_norm=grad_norm,
    )


@dataclass(frozen=True)
class SpeedResult:
    c_eps: float
    value: float
    profile: SampledFunction
    report: EnergyReport
    iterations: int
    converged: bool


def speed_eps(
    p: Params,
    c_lo: float,
    c_hi: float,
    grid: Grid,
    init: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 10000,
) -> SpeedResult:
    """Speed at which the constrained minimum energy crosses zero.

    Bisection on the speed, stopping once the minimum value is below
    SPEED_VALUE_TOL in magnitude or the bracket is narrower than
    SPEED_BRACKET_TOL.  Minimizations warm-start from the previous
    minimizer; the bracket must straddle a sign change.
    """
    if not 0.0 < c_lo < c_hi:
        raise BracketError(f"need 0 < c_lo < c_hi, got [{c_lo}, {c_hi}]")

    warm = np.asarray(init, dtype=float)
    total_iters = 0

    def minimum(c: float) -> MinimizeResult:
        nonlocal warm, total_iters
        res = minimize_energy(DiscreteEnergy(grid, c, p), warm,
                              tol=tol, max_iter=max_iter)
        warm = res.profile.values
        total_iters += res.iterations
        return res

    res_lo = minimum(c_lo)
    res_hi = minimum(c_hi)
    if not res_lo.value > 0.0 > res_hi.value:
        raise BracketError(
            f"no sign change of the minimum energy on [{c_lo}, {c_hi}]: "
            f"m({c_lo})={res_lo.value}, m({c_hi})={res_hi.value}"
        )
    best = res_lo if abs(res_lo.value) < abs(res_hi.value) else res_hi
    c_best = c_lo if best is res_lo else c_hi
    while c_hi - c_lo > SPEED_BRACKET_TOL:
        c_mid = 0.5 * (c_lo + c_hi)
        res = minimum(c_mid)
        if abs(res.value) < abs(best.value):
            best, c_best = res, c_mid
        if abs(res.value) < SPEED_VALUE_TOL:
            break
        if res.value > 0.0:
            c_lo = c_mid
        else:
            c_hi = c_mid
    return SpeedResult(
        c_eps=c_best, value=best.value, profile=best.profile,
        report=best.report, iterations=total_iters, converged=best.converged,
    )


#: columns of the convergence-study table, in emission order
STUDY_COLUMNS = (
    "eps", "c_eps", "err_c", "err_u_l2e",
    "E_grad", "E_F0", "E_G", "E_nonlocal", "total", "iters", "flag",
)


@dataclass(frozen=True)
class StudyResult:
    """Convergence table toward the sharp-interface predictions."""

    rows: list[dict]
    c_limit: float
    limit_set: IntervalUnion
    err_c_monotone: bool
    err_u_monotone: bool


def convergence_study(
    eps_list,
    p: Params,
    bracket_factor: float = 2.0,
    tol: float = 1e-6,
    max_iter: int = 1500,
) -> StudyResult:
    """Solve the finite-width speed problem along a ladder of interface
    widths and tabulate the errors against the limit speed and limit set.

    The speed bracket for every width is [c_limit/bracket_factor,
    c_limit*bracket_factor].  Error columns are flagged monotone when they
    decrease weakly down the ladder (widths sorted descending).

    The default per-minimization iteration budget is far below the cap of
    minimize_energy: the energy value settles orders of magnitude inside
    the speed tolerance long before the slow translation mode drives the
    gradient norm to its tolerance, and only the value enters the bisection.
    """
    from .wave_speeds import limit_speed

    limit = limit_speed(p)
    d = limit.to_dict()
    c_limit = d["c"]
    if d["regime"] == "front":
        e = IntervalUnion.single(-math.inf, 0.0)
    else:
        e = IntervalUnion.single(d["a"], d["b"])

    rows = []
    for eps in sorted(eps_list, reverse=True):
        pe = Params(p.alpha, p.gamma, p.sigma, eps)
        grid = solver_grid(e, eps)
        init = build_recovery(e, pe, grid)
        result = speed_eps(
            pe, c_limit / bracket_factor, c_limit * bracket_factor,
            grid, init.w.values, tol=tol, max_iter=max_iter,
        )
        chi = e.indicator(grid)
        diff = result.profile.values - chi.values
        err_u = math.sqrt(max(
            float(np.trapezoid(grid.weight * diff**2, dx=grid.h)), 0.0))
        r = result.report
        rows.append({
            "eps": eps,
            "c_eps": result.c_eps,
            "err_c": abs(result.c_eps - c_limit),
            "err_u_l2e": err_u,
            "E_grad": r.gradient,
            "E_F0": r.potential,
            "E_G": r.tilt,
            "E_nonlocal": r.nonlocal_term,
            "total": r.total,
            "iters": result.iterations,
            "flag": "ok" if result.converged else "maxiter",
        })

    def weakly_decreasing(key):
        vals = [row[key] for row in rows]
        return all(b <= a + 1e-12 for a, b in zip(vals[:-1], vals[1:]))

    return StudyResult(
        rows=rows, c_limit=c_limit, limit_set=e,
        err_c_monotone=weakly_decreasing("err_c"),
        err_u_monotone=weakly_decreasing("err_u_l2e"),
    )
