import math

import numpy as np
import pytest

from fhn_gamma.errors import GridError, InvalidParameterError
from fhn_gamma.weighted_space import (
    Grid,
    IntervalUnion,
    SampledFunction,
    shift,
    total_variation_e,
    total_variation_e_sampled,
    weighted_norms,
)


def test_grid_basics():
    g = Grid(-2.0, 2.0, 401)
    assert g.h == pytest.approx(0.01)
    assert g.x[0] == -2.0 and g.x[-1] == 2.0
    assert np.allclose(g.weight, np.exp(g.x))
    with pytest.raises(GridError):
        Grid(1.0, 0.0, 10)
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 2)


def test_grid_for_interval():
    g = Grid.for_interval(2.0, 0.1, x_lo=-1.0)
    assert g.x_lo == -1.0 and g.x_hi == 2.0
    assert g.h <= 0.1 + 1e-15


def test_sampled_function_shape_and_finite():
    g = Grid(0.0, 1.0, 11)
    with pytest.raises(GridError):
        SampledFunction(g, np.zeros(10))
    with pytest.raises(InvalidParameterError):
        SampledFunction(g, np.full(11, np.nan))


def test_csv_round_trip(tmp_path):
    g = Grid(-1.0, 1.0, 201)
    f = SampledFunction.from_callable(g, np.sin)
    path = tmp_path / "profile.csv"
    f.to_csv(path)
    back = SampledFunction.from_csv(path)
    assert back.grid.n == g.n
    assert np.allclose(back.values, f.values, atol=1e-12)


def test_csv_rejects_nonuniform(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,value\n0,1\n0.1,1\n0.35,1\n")
    with pytest.raises(GridError):
        SampledFunction.from_csv(path)


def test_weighted_norms_of_indicator_like_profile():
    g = Grid(-34.0, 0.0, 34001)
    f = SampledFunction(g, np.ones(g.n))
    norms = weighted_norms(f)
    exact = 1.0 - math.exp(-34.0)
    # trapezoid error for e^x is h^2/12 per unit mass
    assert norms.l1e == pytest.approx(exact, rel=1e-7)
    assert norms.l2e == pytest.approx(math.sqrt(exact), rel=1e-7)


def test_shift_identity_grid_aligned():
    g = Grid(-20.0, 10.0, 3001)  # h = 0.01
    f = SampledFunction.from_callable(
        g, lambda x: np.exp(-(x + 5.0) ** 2))
    a = 2.0
    shifted = shift(f, a)
    n0 = weighted_norms(f)
    n1 = weighted_norms(shifted)
    assert n1.l1e == pytest.approx(math.exp(-a) * n0.l1e, rel=1e-6)
    assert n1.l2e == pytest.approx(math.exp(-a / 2.0) * n0.l2e, rel=1e-6)


def test_shift_round_trip_and_errors():
    g = Grid(0.0, 1.0, 101)
    f = SampledFunction.from_callable(g, lambda x: x**2)
    back = shift(shift(f, 0.1), -0.1)
    interior = slice(11, 90)
    assert np.allclose(back.values[interior], f.values[interior], atol=1e-14)
    with pytest.raises(GridError):
        shift(f, 2.0)


def test_shift_fractional_warns():
    g = Grid(0.0, 1.0, 101)
    f = SampledFunction.from_callable(g, lambda x: x)
    with pytest.warns(UserWarning):
        shift(f, 0.005)


def test_interval_union_validation():
    with pytest.raises(InvalidParameterError):
        IntervalUnion(())
    with pytest.raises(InvalidParameterError):
        IntervalUnion(((1.0, 0.0),))
    with pytest.raises(InvalidParameterError):
        IntervalUnion(((0.0, 1.0), (0.5, 2.0)))  # overlap / wrong order
    with pytest.raises(InvalidParameterError):
        IntervalUnion(((-math.inf, 0.0), (-5.0, -3.0)))  # -inf not last
    with pytest.raises(InvalidParameterError):
        IntervalUnion(((0.0, math.inf),))


def test_interval_union_measure_and_endpoints():
    e = IntervalUnion(((1.0, 2.0), (-1.0, 0.0)))
    assert e.l1e_norm == pytest.approx(
        (math.e**2 - math.e) + (1.0 - math.exp(-1.0)))
    assert e.rightmost == 2.0
    assert e.leftmost == -1.0
    half = IntervalUnion.single(-math.inf, 0.0)
    assert half.l1e_norm == pytest.approx(1.0)


def test_interval_union_json_round_trip():
    e = IntervalUnion(((1.0, 2.0), (-math.inf, 0.0)))
    back = IntervalUnion.from_json(e.to_json())
    assert back.intervals == e.intervals


def test_indicator_marks_jumps_with_half():
    g = Grid(-2.0, 2.0, 401)
    e = IntervalUnion.single(-1.0, 0.0)
    chi = e.indicator(g)
    i_a = int(round((-1.0 - g.x_lo) / g.h))
    i_b = int(round((0.0 - g.x_lo) / g.h))
    assert chi.values[i_a] == 0.5 and chi.values[i_b] == 0.5
    assert chi.values[i_a + 1 : i_b].min() == 1.0
    assert chi.values[: i_a].max() == 0.0


def test_total_variation_unit_interval_exact():
    e = IntervalUnion.single(0.0, 1.0)
    assert total_variation_e(e) == 1.0 + math.e
    half = IntervalUnion.single(-math.inf, 0.0)
    assert total_variation_e(half) == 1.0


def test_sampled_total_variation_matches_geometric():
    g = Grid(-8.0, 2.0, 2001)
    e = IntervalUnion.single(-1.0, 0.5)
    chi = e.indicator(g)
    tv = total_variation_e_sampled(chi)
    assert tv == pytest.approx(total_variation_e(e), rel=1e-3)


def test_poincare_inequality_random_profiles():
    rng = np.random.default_rng(7)
    g = Grid(-12.0, 4.0, 1601)
    x = g.x
    for _ in range(100):
        center = rng.uniform(-8.0, 0.0)
        width = rng.uniform(0.3, 2.0)
        amp = rng.uniform(0.2, 3.0)
        bump = amp * np.exp(-((x - center) / width) ** 2)
        window = np.clip((x - g.x_lo - 1.0), 0, 1) * np.clip(g.x_hi - 1.0 - x, 0, 1)
        f = bump * window
        df = np.diff(f) / g.h
        lhs = np.sum(g.weight_mid * df**2 * g.h)
        rhs = 0.25 * np.trapezoid(g.weight * f**2, dx=g.h)
        assert lhs >= rhs * (1.0 - 1e-8)
