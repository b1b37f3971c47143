"""Rate optimization in T and G, the Lambert-W constant and the asymptotic predictors."""
import numpy as np
import pytest
from scipy.optimize import brentq

from axionqfi import CavityParams, SourceSpec
from axionqfi.errors import DomainError, RangeError
from axionqfi.optimize import (
    advantage,
    asymptotics_smss,
    asymptotics_tmss,
    default_t_range,
    lambert_w_m1,
    optimize_g,
    optimize_t,
    rate_star,
    result1_region,
    tmss_lossy_idler,
    vacuum_t_star_constant,
)


def test_lambert_w_m1():
    for x in (-0.3, -0.1, -1e-3, -1e-12):
        w = lambert_w_m1(x)
        assert w <= -1.0
        assert w * np.exp(w) == pytest.approx(x, rel=1e-12)
    assert lambert_w_m1(-np.exp(-1.0)) == pytest.approx(-1.0)
    for bad in (0.0, 0.1, -0.5):
        with pytest.raises(DomainError):
            lambert_w_m1(bad)


def test_vacuum_constant_maximizes_good_cavity_rate():
    # with g -> 2 the vacuum rate is proportional to (1 - e^{-x})^2 / x, x = Gamma T
    x_star = brentq(lambda x: 2 * x * np.exp(-x) - (1 - np.exp(-x)), 0.5, 5.0, xtol=1e-14)
    assert vacuum_t_star_constant() == pytest.approx(x_star, rel=1e-12)
    assert vacuum_t_star_constant() == pytest.approx(1.2564, abs=1e-4)


def test_optimize_t_finds_global_of_two_peaks():
    def f(t):
        u = np.log(t)
        return np.exp(-u ** 2) + 2.0 * np.exp(-(u - 10.0) ** 2)

    opt = optimize_t(f, (1e-3, 1e7))
    assert opt.t_star == pytest.approx(np.exp(10.0), rel=1e-5)
    assert opt.rate_star == pytest.approx(2.0, rel=1e-10)
    assert len(opt.all_local_maxima) == 2 and not opt.at_boundary


def test_optimize_t_boundary_and_errors():
    opt = optimize_t(lambda t: t, (1.0, 10.0))
    assert opt.at_boundary and opt.t_star == pytest.approx(10.0)
    with pytest.raises(DomainError):
        optimize_t(lambda t: t)
    with pytest.raises(DomainError):
        optimize_t(lambda t: t, (2.0, 1.0))
    with pytest.raises(RangeError):
        optimize_t(lambda t: np.full_like(t, np.nan), (1.0, 2.0))


def test_optimize_t_scalar_only_function():
    opt = optimize_t(lambda t: float(-(np.log(t) - 1.0) ** 2), (1e-2, 1e2))
    assert opt.t_star == pytest.approx(np.e, rel=1e-5)


def test_optimize_g():
    flat = optimize_g(lambda g: 3.0, (1.0, 1e6))
    assert flat.flat and flat.g_star == 1e6 and flat.rate == 3.0
    peak = optimize_g(lambda g: -(np.log10(g) - 3.0) ** 2, (1.0, 1e8))
    g_star, r = peak
    assert not peak.flat and g_star == pytest.approx(1e3, rel=1e-3) and r == pytest.approx(0.0, abs=1e-9)
    assert optimize_g(lambda g: g, (5.0, 5.0)).g_star == 5.0
    with pytest.raises(DomainError):
        optimize_g(lambda g: g, (0.5, 2.0))


def test_default_t_range():
    assert default_t_range(CavityParams(1e-4)) == (1e-4, 5e5)
    assert default_t_range(CavityParams(10.0)) == pytest.approx((1e-5, 5.0))


def test_smss_asymptotics():
    cav = CavityParams(1e-6, 0.0, 1e-2)
    a = asymptotics_smss(cav)
    assert a.g_th == pytest.approx(100.0)
    assert a.g_sat == pytest.approx(2 * np.sqrt(0.02) / 1e-6)
    assert np.isnan(a.advantage_pred)
    lin = asymptotics_smss(cav, 1e3)
    assert lin.advantage_pred == pytest.approx(2.455 * 1e3 * 1e-2)
    sat = asymptotics_smss(cav, 1e12)
    assert sat.advantage_pred == pytest.approx(0.665 * 1e-2 / 1e-6)
    assert sat.t_star_pred == 1.0
    with pytest.raises(DomainError):
        asymptotics_smss(CavityParams(1e-6, 0.0, 0.0))


def test_tmss_asymptotics_regimes():
    lossy = CavityParams(1e-8, 0.5e-8, 1e-2)
    ideal = CavityParams(1e-8, 1e-12, 1e-2)
    assert tmss_lossy_idler(lossy) and not tmss_lossy_idler(ideal)
    a = asymptotics_tmss(lossy, 1e4)
    assert a.regime == "tmss-lossy"
    assert a.g_th == pytest.approx(1.0 / (1e-2 * 3.0))
    assert a.advantage_pred == pytest.approx(1.283 * 1e4 * 1e-2 * 3.0)
    b = asymptotics_tmss(ideal, 1e4)
    assert b.regime == "tmss-ideal" and b.advantage_pred == pytest.approx(0.321e4)
    assert asymptotics_tmss(ideal, 1e12).advantage_pred == pytest.approx(0.347e8)


def test_result1_region():
    r = result1_region(CavityParams(1e-6, 1e-8, 1e-2), 1e3)
    assert r == {"smss_advantage": True, "tmss_advantage": True}
    r = result1_region(CavityParams(1e-1, 1e-3, 1e-2), 1e3)
    assert not r["smss_advantage"]
    r = result1_region(CavityParams(1e-6, 1e-8, 1e-2), 10.0)
    assert not r["smss_advantage"]
    # lossy idler noisier than the thermal occupation
    assert not result1_region(CavityParams(1e-1, 5e-2, 1e-2), 1e6)["tmss_advantage"]


def test_vacuum_advantage_is_one():
    cav = CavityParams(1e-4, 1e-6, 1e-2)
    assert advantage(SourceSpec.vacuum(), cav) == pytest.approx(1.0, rel=1e-9)
    base = rate_star(SourceSpec.vacuum(), "qfi", cav)
    assert advantage(SourceSpec.smss(1e3), cav, baseline=base) > 1.0
