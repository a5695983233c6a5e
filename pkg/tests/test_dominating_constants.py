import numpy as np
import pytest

from metalin.core.constants.enums import MethodKind, Regime
from metalin.core.dominating_constants import (
    asymptotic_constant,
    bound_ordering_gamma,
    constant_ordering_check,
    dominating_constant_mc,
    erm_constant_exact,
    error_bound_constants,
    grid_minimum,
    maml_constant_conditional_mc,
    ordering_report,
    stieltjes,
    stieltjes_mc,
    stieltjes_second_moment,
    weight_scale,
)
from metalin.core.exceptions import UnsupportedMethodError, UnsupportedRegimeError
from metalin.core.models.methods import MethodConfig
from metalin.core.models.reports import ConstantEstimate
from metalin.settings.config import settings


def test_erm_constant_exact():
    assert erm_constant_exact(2, 4) == pytest.approx(1.75)
    assert erm_constant_exact(20, 40) == pytest.approx(1.525)
    assert erm_constant_exact(1, 10**9) == pytest.approx(1.0)


@pytest.mark.parametrize("d, N", [(2, 4), (20, 40)])
def test_erm_constant_monte_carlo(d, N):
    est = dominating_constant_mc(
        MethodConfig.erm(), d, N, 0.5, np.random.default_rng(d), 20_000
    )
    assert abs(est.value - erm_constant_exact(d, N)) <= 4.0 * est.mc_std_error
    assert est.satisfies_lower_bound()


@pytest.mark.parametrize(
    "cfg", [MethodConfig.maml(0.1), MethodConfig.imaml(1.0), MethodConfig.bamaml(1.0)], ids=str
)
def test_constants_are_at_least_one(cfg):
    est = dominating_constant_mc(cfg, 4, 8, 0.5, np.random.default_rng(1), 2000)
    assert est.satisfies_lower_bound()
    assert est.method == cfg
    assert est.n_samples == 2000


def test_conditional_maml_estimator_agrees():
    rng = np.random.default_rng(12)
    plain = dominating_constant_mc(MethodConfig.maml(0.1), 4, 8, 0.5, rng, 20_000)
    conditional = maml_constant_conditional_mc(0.1, 4, 8, 0.5, rng, 20_000)
    noise = np.hypot(plain.mc_std_error, conditional.mc_std_error)
    assert abs(plain.value - conditional.value) <= 4.0 * noise
    assert conditional.mc_std_error < plain.mc_std_error


def test_constant_preconditions(rng):
    with pytest.raises(UnsupportedRegimeError):
        dominating_constant_mc(MethodConfig.erm(), 2, 4, 0.5, rng, 1000, regime=Regime.GENERAL)
    with pytest.raises(ValueError):
        dominating_constant_mc(MethodConfig.erm(), 2, 4, 0.5, rng, 10)


def test_weight_scale():
    assert weight_scale(MethodConfig.erm()).w == pytest.approx(1.0)
    assert weight_scale(MethodConfig.maml(0.1)).w == pytest.approx(0.81)
    assert weight_scale(MethodConfig.bamaml(1.0), 0.5).w == pytest.approx(1.0 / 6.0)


def test_stieltjes_matches_marchenko_pastur_traces():
    rng = np.random.default_rng(400)
    for omega1, omega2 in [(1.0, 1.0), (1.0, 0.1), (2.0, 1.0)]:
        mc = stieltjes_mc(omega1, omega2, 400, 400, rng, n_samples=3)
        assert mc == pytest.approx(stieltjes(omega1, omega2, 1.0), abs=0.01)


def test_stieltjes_limits():
    assert stieltjes(1.0, 1e-6, 0.5) == pytest.approx(1.0, abs=1e-5)
    assert stieltjes(1.0, 1e8, 2.0) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(ValueError):
        stieltjes(0.0, 1.0, 1.0)


@pytest.mark.parametrize("eta", [0.25, 1.0, 3.0])
def test_second_moment_is_minus_derivative(eta):
    h = 1e-5
    finite_diff = -(stieltjes(1.0 + h, 1.0, eta) - stieltjes(1.0 - h, 1.0, eta)) / (2 * h)
    assert stieltjes_second_moment(1.0, 1.0, eta) == pytest.approx(finite_diff, abs=1e-6)


def test_second_moment_matches_simulation():
    mc = stieltjes_mc(1.0, 1.0, 400, 400, np.random.default_rng(9), n_samples=3, power=2)
    assert mc == pytest.approx(stieltjes_second_moment(1.0, 1.0, 1.0), abs=0.01)


def test_asymptotic_targets():
    assert asymptotic_constant(MethodKind.ERM, 0.5).value == pytest.approx(1.5)
    assert asymptotic_constant(MethodKind.MAML, 0.5).value == pytest.approx(1.5)
    low = asymptotic_constant(MethodKind.BAMAML, 0.5)
    assert (low.value, low.is_bound) == (1.0, False)
    high = asymptotic_constant(MethodKind.BAMAML, 2.0)
    assert (high.value, high.is_bound) == (2.0, True)


def test_error_bound_constants():
    c0, c1 = error_bound_constants(MethodConfig.maml(0.2), 0.1, 2.0, 0.5)
    assert c0 == pytest.approx(0.98**4 / 0.6**2 * 4.0 / 0.1)
    assert c1 == pytest.approx(2.0 + 0.04 * 8.0 / (0.36 * 0.1 * 0.5))
    assert error_bound_constants(MethodConfig.bamaml(1.0), 0.1, 2.0, 0.5)[1] == 1.0
    with pytest.raises(ValueError):
        error_bound_constants(MethodConfig.maml(0.6), 0.1, 2.0, 0.5)
    with pytest.raises(UnsupportedMethodError):
        error_bound_constants(MethodConfig.erm(), 0.1, 2.0, 0.5)


def test_small_gamma_orders_bound_constants():
    gamma = 0.5 * bound_ordering_gamma(0.2, 0.1, 2.0, 0.5)
    maml, _ = error_bound_constants(MethodConfig.maml(0.2), 0.1, 2.0, 0.5)
    bamaml, _ = error_bound_constants(MethodConfig.bamaml(gamma), 0.1, 2.0, 0.5)
    assert bamaml < maml


def _estimate(value, err, kind=MethodKind.MAML):
    cfg = MethodConfig.maml(0.1) if kind == MethodKind.MAML else MethodConfig.bamaml(1.0)
    return ConstantEstimate(value=value, mc_std_error=err, n_samples=1000, method=cfg, d=40, N=80)


def test_ordering_verdicts():
    ordered = ordering_report(_estimate(1.5, 0.01), _estimate(1.0, 0.01, MethodKind.BAMAML))
    assert ordered.strictly_ordered and ordered.verdict == "ordered"
    assert ordered.first_target == pytest.approx(1.5)
    assert ordered.second_target == pytest.approx(1.0)
    close = ordering_report(_estimate(1.02, 0.001), _estimate(1.0, 0.001, MethodKind.BAMAML))
    assert close.indistinguishable and close.verdict == "indistinguishable"
    reversed_ = ordering_report(_estimate(1.0, 0.001), _estimate(1.5, 0.001, MethodKind.BAMAML))
    assert reversed_.verdict == "not-ordered"


def test_grid_minimum_is_reproducible():
    grid = [(MethodConfig.maml(a), 0.5) for a in (0.05, 0.2)]
    best, every = grid_minimum(grid, 4, 8, 500, seed=3)
    again, _ = grid_minimum(grid, 4, 8, 500, seed=3)
    assert best.value == min(est.value for est in every) == again.value


@pytest.mark.slow
def test_constant_ordering_at_half_aspect_ratio():
    report = constant_ordering_check(
        40,
        80,
        settings.get("CONSTANT_SAMPLES"),
        settings.get("CONSTANT_ALPHA_GRID"),
        settings.get("CONSTANT_GAMMA_GRID"),
        settings.get("CONSTANT_S_GRID"),
        seed=2023,
    )
    assert 1.35 <= report.first_min.value <= 1.65
    assert 0.95 <= report.second_min.value <= 1.25
    assert report.strictly_ordered


@pytest.mark.slow
def test_erm_constant_approaches_limit():
    rng = np.random.default_rng(5)
    gaps = [
        abs(dominating_constant_mc(MethodConfig.erm(), d, 2 * d, 0.5, rng, 2000).value - 1.5)
        for d in (10, 40, 160)
    ]
    assert gaps[0] > gaps[1] > gaps[2]
