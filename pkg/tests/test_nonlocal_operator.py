import math

import numpy as np
import pytest

from fhn_gamma.errors import GridError, InvalidParameterError
from fhn_gamma.nonlocal_operator import (
    InhibitorOperator,
    char_roots,
    lc_indicator,
    lc_solve_fd,
    nonlocal_energy,
)
from fhn_gamma.weighted_space import Grid, SampledFunction


def test_char_roots_identities():
    rng = np.random.default_rng(3)
    for _ in range(200):
        c = rng.uniform(1e-3, 50.0)
        gamma = rng.uniform(1e-2, 10.0)
        r = char_roots(c, gamma)
        # exact up to one rounding of the subtraction
        assert abs(r.r1 + r.r2 + 1.0) < 1e-15
        assert r.r1 < -1.0 < 0.0 < r.r2
        # product of roots is -gamma/c^2
        assert r.r1 * r.r2 == pytest.approx(-gamma / c**2, rel=1e-12)
        h = c / math.sqrt(c * c + 4.0 * gamma)
        assert r.gap == pytest.approx(1.0 / h, rel=1e-13)


def test_char_roots_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        char_roots(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        char_roots(1.0, -1.0)


def test_indicator_response_junctions_and_ode():
    for ell, c, gamma in [(1.0, 1.0, 1.0), (3.0, 2.3, 1.0), (40.0, 0.2, 2.0),
                          (700.0, 5.0, 1.0)]:
        sol = lc_indicator(ell, c, gamma)
        for name, res in sol.junction_residuals().items():
            assert res < 1e-13, (ell, c, gamma, name, res)
        # interior of the support: gamma v - c^2 (v'' + v') = 1, checked by
        # finite differences on a fine stencil
        x0 = -min(ell, 10.0) / 2.0
        d = 1e-4
        v = sol(np.array([x0 - d, x0, x0 + d]))
        vpp = (v[0] - 2 * v[1] + v[2]) / d**2
        vp = (v[2] - v[0]) / (2 * d)
        assert gamma * v[1] - c * c * (vpp + vp) == pytest.approx(1.0, abs=1e-6)


def test_indicator_response_decays_both_ways():
    sol = lc_indicator(2.0, 1.5, 1.0)
    assert sol(np.array([50.0]))[0] < 1e-20
    assert sol(np.array([-300.0]))[0] < 1e-20
    assert sol(np.array([-1.0]))[0] > 0.0


def test_indicator_response_semi_infinite():
    sol = lc_indicator(math.inf, 1.0, 1.0)
    assert sol(np.array([-700.0]))[0] == pytest.approx(1.0, rel=1e-8)
    r = sol.roots
    assert sol.integral_over_support() == pytest.approx(
        (1.0 - 1.0 / r.gap), rel=1e-13)
    for res in sol.junction_residuals().values():
        assert res < 1e-13


def test_integral_over_support_matches_quadrature():
    ell, c, gamma = 2.5, 1.7, 1.3
    sol = lc_indicator(ell, c, gamma)
    x = np.linspace(-ell, 0.0, 200001)
    quad = np.trapezoid(np.exp(x) * sol(x), dx=x[1] - x[0])
    assert sol.integral_over_support() == pytest.approx(quad, rel=1e-9)


def test_fd_solve_constant_data_is_exact():
    # f = 1 everywhere: the response is 1/gamma, and the Robin conditions
    # with constant boundary data reproduce it to rounding
    gamma = 1.7
    grid = Grid(-10.0, 5.0, 1501)
    op = InhibitorOperator(grid, 1.3, gamma)
    v = op.solve(np.ones(grid.n))
    assert np.max(np.abs(v - 1.0 / gamma)) < 1e-11


def test_fd_solve_matches_closed_form_second_order():
    c, gamma = 1.0, 1.0
    errs = []
    for h in (0.02, 0.01):
        grid = Grid(-21.0, 9.0, int(round(30.0 / h)) + 1)
        x = grid.x
        chi = np.where((x > -1.0) & (x < 0.0), 1.0, 0.0)
        chi[np.isclose(x, -1.0)] = 0.5
        chi[np.isclose(x, 0.0)] = 0.5
        v = InhibitorOperator(grid, c, gamma).solve(chi)
        exact = lc_indicator(1.0, c, gamma)(x)
        errs.append(np.max(np.abs(v - exact)))
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_fd_grid_too_coarse_raises():
    grid = Grid(-5.0, 5.0, 11)
    with pytest.raises(GridError):
        InhibitorOperator(grid, 0.05, 1.0)  # r1 ~ -400 at this speed


def _random_smooth(grid, rng):
    # smooth bumps supported well inside the grid, where the decay-matching
    # boundary closure is accurate
    x = grid.x
    f = np.zeros_like(x)
    for _ in range(3):
        f += rng.uniform(-1, 1) * np.exp(
            -((x - rng.uniform(-7, 0)) / rng.uniform(0.3, 1.0)) ** 2)
    window = np.clip(x - grid.x_lo - 2.0, 0.0, 1.0) \
        * np.clip(grid.x_hi - 2.0 - x, 0.0, 1.0)
    return f * window


def test_transpose_solve_is_adjoint_in_plain_inner_product():
    grid = Grid(-12.0, 4.0, 801)
    op = InhibitorOperator(grid, 1.2, 1.0)
    rng = np.random.default_rng(11)
    f = rng.standard_normal(grid.n)
    g = rng.standard_normal(grid.n)
    # <A^{-1} B f, g> = <B f, A^{-T} g>
    lhs = float(np.dot(op.solve(f), g))
    rhs = float(np.dot(op.apply_boundary_coupling(f), op.solve_transpose(g)))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_nonlocal_energy_positive_and_self_adjoint():
    grid = Grid(-12.0, 4.0, 3201)
    c, gamma = 1.4, 1.0
    op = InhibitorOperator(grid, c, gamma)
    w = grid.weight
    rng = np.random.default_rng(5)
    for _ in range(50):
        u = _random_smooth(grid, rng)
        v = _random_smooth(grid, rng)
        pair_uv = np.trapezoid(w * u * op.solve(v), dx=grid.h)
        pair_vu = np.trapezoid(w * v * op.solve(u), dx=grid.h)
        scale = max(abs(pair_uv), abs(pair_vu), 1e-12)
        # the discrete asymmetry of the weighted pairing is O(h^2)
        assert abs(pair_uv - pair_vu) / scale < 1e-4
        energy = nonlocal_energy(SampledFunction(grid, u), c, gamma)
        assert energy >= -1e-10


def test_lc_solve_fd_wrapper():
    grid = Grid(-10.0, 4.0, 1401)
    f = SampledFunction.from_callable(
        grid, lambda x: np.exp(-(x + 3.0) ** 2))
    v = lc_solve_fd(f, 1.0, 1.0)
    assert v.grid is grid
    assert np.all(np.isfinite(v.values))
    assert v.values.max() > 0.0
