import math

import numpy as np
import pytest

from securehda import _kernels
from securehda import analytics as an
from securehda.model import BelowDesignThreshold, LeakageBudgetExceedsPower, MismatchPoint, SchemeKind
from securehda.montecarlo import (
    SimulationConfig,
    simulate,
    simulate_hybrid,
    simulate_separation,
    simulate_superimposed,
    simulate_uncoded,
)

DESIGN = MismatchPoint(1.0)
AT50 = MismatchPoint(0.2)
CFG = SimulationConfig(trials=200_000, seed=1)


def within(rep, k=4.0):
    return abs(rep.empirical_d - rep.analytic_d) <= k * rep.std_err


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig(trials=0)
    with pytest.raises(ValueError):
        SimulationConfig(seed=-1)
    with pytest.raises(ValueError):
        SimulationConfig(block_size=0)
    cfg = SimulationConfig(trials=10, block_size=4)
    assert cfg.block_lengths() == [4, 4, 2]
    assert cfg.n_blocks == 3


@pytest.mark.parametrize("scheme", list(SchemeKind))
@pytest.mark.parametrize("point", [DESIGN, AT50], ids=["design", "snr50"])
def test_agreement(fig4, scheme, point):
    rep = simulate(scheme, fig4, point, CFG)
    assert rep.trials == CFG.trials
    assert rep.std_err > 0
    assert within(rep)


def test_analytic_targets(fig4):
    assert simulate_uncoded(fig4, DESIGN, CFG).analytic_d == pytest.approx(3.8902, abs=1e-4)
    assert simulate_hybrid(fig4, AT50, CFG).analytic_d == pytest.approx(1.0470, abs=1e-4)
    assert simulate_separation(fig4, AT50, CFG).analytic_d == pytest.approx(2.7558, abs=1e-4)
    assert simulate_superimposed(fig4, DESIGN, CFG).analytic_d == pytest.approx(2.7558, abs=1e-4)


def test_uncoded_leakage(fig4):
    rep = simulate_uncoded(fig4, DESIGN, CFG)
    assert rep.empirical_leakage == pytest.approx(0.2, rel=0.01)
    alpha = an.uncoded_gain(fig4)
    assert abs(rep.empirical_power - alpha ** 2 * fig4.sigma_v2) <= 3 * rep.power_std_err
    assert rep.empirical_power < fig4.p


def test_power_accounting(fig4):
    hyb = simulate_hybrid(fig4, AT50, CFG)
    assert abs(hyb.empirical_power - fig4.p) <= 3 * hyb.power_std_err
    sup = simulate_superimposed(fig4, AT50, CFG)
    assert abs(sup.empirical_power - an.superimposed_plan(fig4).p_hwz) <= 3 * sup.power_std_err
    assert simulate_separation(fig4, AT50, CFG).empirical_power is None


def test_uncoded_zero_leakage(fig4):
    p = fig4.replace(i_eps=0.0, rate_r=0.0)
    rep = simulate_uncoded(p, DESIGN, CFG)
    assert abs(rep.empirical_d - 5.0) <= 3 * rep.std_err
    assert rep.empirical_leakage == 0.0


def test_hybrid_k_forced_zero(fig4):
    rep = simulate_hybrid(fig4, AT50, CFG, k=0.0)
    assert rep.analytic_d == pytest.approx(5.0, rel=1e-12)
    assert abs(rep.empirical_d - 5.0) <= 3 * rep.std_err


def test_separation_alpha_to_zero(fig4):
    p = fig4.replace(n2=1.0 + 1e-6, i_eps=0.0, rate_r=0.0)
    rep = simulate_separation(p, DESIGN, CFG)
    assert abs(rep.empirical_d - 5.0) <= 3 * rep.std_err + 1e-5


def test_superimposed_r0_matches_hybrid(fig4):
    p = fig4.replace(rate_r=0.0)
    a = simulate_superimposed(p, AT50, CFG)
    b = simulate_hybrid(p, AT50, CFG)
    assert a.analytic_d == pytest.approx(b.analytic_d, rel=1e-12)
    assert abs(a.empirical_d - b.empirical_d) <= 4 * math.hypot(a.std_err, b.std_err)


def test_errors_propagate(fig4):
    with pytest.raises(LeakageBudgetExceedsPower):
        simulate_uncoded(fig4.replace(i_eps=3.0), DESIGN, CFG)
    with pytest.raises(BelowDesignThreshold):
        simulate_hybrid(fig4, MismatchPoint(2.0), CFG)


def test_deterministic(fig4):
    cfg = SimulationConfig(trials=50_000, seed=99, block_size=8192)
    assert simulate_hybrid(fig4, AT50, cfg) == simulate_hybrid(fig4, AT50, cfg)


def test_threads_do_not_change_result(fig4):
    one = SimulationConfig(trials=50_000, seed=5, block_size=4096, workers=1)
    many = SimulationConfig(trials=50_000, seed=5, block_size=4096, workers=4)
    for scheme in SchemeKind:
        assert simulate(scheme, fig4, AT50, one) == simulate(scheme, fig4, AT50, many)


def test_seed_sensitivity(fig4):
    a = simulate_hybrid(fig4, AT50, SimulationConfig(trials=1_000_000, seed=1))
    b = simulate_hybrid(fig4, AT50, SimulationConfig(trials=1_000_000, seed=2))
    assert a.empirical_d != b.empirical_d
    assert within(a) and within(b)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_backends_agree(fig4):
    cfg = SimulationConfig(trials=100_000, seed=3)
    prev = _kernels.set_backend("numpy")
    try:
        a = simulate_superimposed(fig4, AT50, cfg)
        _kernels.set_backend("numba")
        b = simulate_superimposed(fig4, AT50, cfg)
    finally:
        _kernels.set_backend(prev)
    assert b.empirical_d == pytest.approx(a.empirical_d, rel=1e-12)
    assert b.std_err == pytest.approx(a.std_err, rel=1e-8)
