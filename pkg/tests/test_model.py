import math

import pytest

from fhn_gamma.errors import InvalidParameterError, RegimeError
from fhn_gamma.model import (
    SQRT2,
    Params,
    RegimeTag,
    box_constants,
    classify,
    gamma_star,
    gamma_star_limit,
    potentials,
    require_regime,
)

# equal-area slope at (alpha=2, sigma=1, eps=0.01), frozen from the closed
# formula before the module was written
GAMMA_STAR_ORACLE = 2.101507144194681


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        Params(0.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        Params(1.0, -1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        Params(1.0, 1.0, 1.0, epsilon=-0.1)


def test_beta_eps_and_cap():
    p = Params(2.0, 1.0, 1.0, 0.01)
    assert p.beta_eps == pytest.approx(0.5 - 0.02 / SQRT2, rel=1e-15)
    assert p.epsilon_cap == pytest.approx(0.25)
    p.require_small_epsilon()
    with pytest.raises(InvalidParameterError):
        Params(2.0, 1.0, 1.0, 0.3).require_small_epsilon()
    with pytest.raises(InvalidParameterError):
        Params(2.0, 1.0, 1.0).require_small_epsilon()


def test_d_of():
    p = Params(2.0, 1.0, 1.0, 0.1)
    assert p.d_of(0.5) == pytest.approx(0.04)
    with pytest.raises(InvalidParameterError):
        p.d_of(0.0)


def test_classify_regimes():
    assert classify(Params(5.0, 1.0, 1.0)).tag is RegimeTag.FRONT
    assert classify(Params(5.0, 1.0, 1.0)).strict
    assert classify(Params(2.0, 1.0, 1.0)).tag is RegimeTag.PULSE
    assert classify(Params(0.5, 1.0, 1.0)).tag is RegimeTag.NEITHER
    # alpha - 1 at or above the threshold: no front, no pulse
    assert classify(Params(6.0, 1.0, 0.5)).tag is RegimeTag.NEITHER


def test_classify_boundary_not_strict():
    boundary = 3.0 * SQRT2  # alpha equal to the front threshold at gamma=sigma=1
    regime = classify(Params(boundary, 1.0, 1.0))
    assert regime.tag is RegimeTag.FRONT
    assert not regime.strict


def test_require_regime():
    require_regime(Params(2.0, 1.0, 1.0), RegimeTag.PULSE)
    with pytest.raises(RegimeError):
        require_regime(Params(2.0, 1.0, 1.0), RegimeTag.FRONT)


def test_potential_values():
    p = Params(2.0, 1.0, 1.0, 0.01)
    assert potentials(0.0, p).F0 == 0.0
    assert potentials(1.0, p).F0 == 0.0
    assert potentials(0.5, p).F0 == pytest.approx(1.0 / 64.0, rel=1e-14)
    assert potentials(1.0, p).G == pytest.approx(-SQRT2 / 12.0, rel=1e-14)
    assert potentials(1.0, p).phi == pytest.approx(SQRT2 / 12.0, rel=1e-14)
    # zeros of the cubic at 0, beta, 1
    for u in (0.0, p.beta_eps, 1.0):
        assert potentials(u, p).f_eps == pytest.approx(0.0, abs=1e-15)


def test_full_potential_combines_well_and_tilt():
    p = Params(2.0, 1.0, 1.0, 0.02)
    for u in (-0.3, 0.1, 0.5, 0.9, 1.2):
        v = potentials(u, p)
        assert v.F_eps == pytest.approx(v.F0 + p.alpha * p.epsilon * v.G,
                                        rel=1e-14, abs=1e-16)


def test_cubic_is_negative_gradient_of_full_potential():
    p = Params(2.0, 1.0, 1.0, 0.05)
    d = 1e-6
    for u in (0.1, 0.4, 0.7, 0.95):
        fd = (potentials(u + d, p).F_eps - potentials(u - d, p).F_eps) / (2 * d)
        assert fd == pytest.approx(-potentials(u, p).f_eps, abs=1e-9)


def test_phi_outside_unit_interval_is_monotone_continuation():
    p = Params(2.0, 1.0, 1.0)
    assert potentials(-0.2, p).phi < 0.0
    assert potentials(1.2, p).phi > potentials(1.0, p).phi


def test_gamma_star_oracle_and_limit():
    p = Params(2.0, 1.0, 1.0, 0.01)
    assert gamma_star(p) == pytest.approx(GAMMA_STAR_ORACLE, rel=1e-13)
    assert gamma_star_limit(p) == pytest.approx(3.0 * SQRT2 / 2.0, rel=1e-15)
    with pytest.raises(InvalidParameterError):
        gamma_star(Params(2.0, 1.0, 1.0))


def test_gamma_star_approaches_limit():
    errs = []
    for eps in (0.04, 0.02, 0.01):
        p = Params(2.0, 1.0, 1.0, eps)
        errs.append(abs(gamma_star(p) / gamma_star_limit(p) - 1.0))
    assert errs[0] > errs[1] > errs[2]


def test_box_constants_solve_the_cubic_level():
    p = Params(2.0, 1.0, 1.0, 0.01)
    m1, beta2 = box_constants(p)
    assert beta2 == 1.01
    beta = p.beta_eps
    assert m1 * (m1 + beta) * (m1 + 1.0) == pytest.approx(
        beta2 / p.gamma, rel=1e-12)
    assert m1 > 0.0
