"""Closed-form Fisher informations against transcriptions, the Gaussian pipeline and known limits."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from axionqfi import CavityParams, SourceSpec, j_sv, k_smss, k_tmss_general, k_tmss_onres, k_vac, k_vac_hom
from axionqfi.closed_forms import (
    FisherPoint,
    factor_smss,
    factor_tmss,
    factor_vac,
    transcribed_k_smss,
    transcribed_k_tmss_onres,
    transcribed_k_vac,
    transcribed_k_vac_hom,
    transcribed_k_vac_hom_onres,
)
from axionqfi.errors import DivergenceError, DomainError
from axionqfi.pipeline import qfi_pipeline

# moderate parameters where the expanded expressions are still accurate
MODERATE = [(0.7, 0.3, 0.0, 0.05, 3.0), (2.5, 0.9, 1.1, 0.2, 8.0), (0.2, 4.0, -0.6, 0.01, 1.5)]


def test_fisher_point():
    fp = FisherPoint.make(6.0, 3.0)
    assert (fp.value, fp.rate, fp.T) == (6.0, 2.0, 3.0)


@pytest.mark.parametrize("T,gam,w,n,G", MODERATE)
def test_matches_transcriptions(T, gam, w, n, G):
    cav = CavityParams(gam, 0.5 * gam, n)
    assert k_vac_hom(T, cav, w).value == pytest.approx(transcribed_k_vac_hom(T, gam, w, n), rel=1e-8)
    assert k_vac(T, cav, w).value == pytest.approx(transcribed_k_vac(T, gam, w, n), rel=1e-8)
    assert k_smss(T, cav, w, G).value == pytest.approx(transcribed_k_smss(T, gam, w, n, G), rel=1e-8)
    assert k_tmss_onres(T, cav, G).value == pytest.approx(
        transcribed_k_tmss_onres(T, gam, 0.5 * gam, n, G), rel=1e-7)
    assert k_vac_hom(T, cav).value == pytest.approx(transcribed_k_vac_hom_onres(T, gam, n), rel=1e-8)


@pytest.mark.parametrize("T,gam,w,n,G", MODERATE)
def test_matches_pipeline(T, gam, w, n, G):
    cav = CavityParams(gam, 0.5 * gam, n)
    assert k_vac(T, cav, w).value == pytest.approx(qfi_pipeline(SourceSpec.vacuum(), T, cav, w), rel=1e-10)
    assert k_smss(T, cav, w, G).value == pytest.approx(qfi_pipeline(SourceSpec.smss(G), T, cav, w), rel=1e-10)
    assert k_tmss_onres(T, cav, G).value == pytest.approx(qfi_pipeline(SourceSpec.tmss(G), T, cav), rel=1e-10)


def test_tmss_general_methods_agree_off_resonance():
    cav = CavityParams(1e-3, 1e-5, 1e-3)
    for w in (0.0, 0.7, 3.0):
        a = k_tmss_general(50.0, cav, w, 1e3).value
        b = k_tmss_general(50.0, cav, w, 1e3, method="closed").value
        assert a == pytest.approx(b, rel=1e-9)
    with pytest.raises(DomainError):
        k_tmss_general(1.0, cav, 0.0, 2.0, method="nope")


def test_vectorized_in_time():
    cav = CavityParams(1e-4, 1e-6, 1e-2)
    t = np.logspace(-1, 5, 11)
    for fn in (lambda x: k_smss(x, cav, 0.3, 1e3), lambda x: k_vac(x, cav, 0.3), lambda x: k_vac_hom(x, cav),
               lambda x: k_tmss_onres(x, cav, 1e3)):
        vec = fn(t)
        assert vec.value.shape == t.shape
        np.testing.assert_allclose(vec.rate, vec.value / t)
        for ti, vi in zip(t, vec.value):
            assert fn(ti).value == pytest.approx(vi, rel=1e-14)


def test_unit_gain_reduces_to_vacuum():
    cav = CavityParams(0.03, 0.01, 0.02)
    for T in (0.5, 10.0, 200.0):
        assert k_smss(T, cav, 0.3, 1.0).value == pytest.approx(k_vac(T, cav, 0.3).value, rel=1e-12)
    # TMSS at G = 1 is two independent thermal modes: the idler carries no information
    assert factor_tmss(5.0, 0.03, 0.01, 0.02, 1.0) == pytest.approx(factor_vac(0.02), rel=1e-12)


def test_vacuum_diverges_without_noise():
    with pytest.raises(DivergenceError):
        k_vac(1.0, CavityParams(0.1, n_t=0.0))


def test_gain_validation():
    with pytest.raises(DomainError):
        k_smss(1.0, CavityParams(0.1, n_t=0.1), 0.0, 0.5)


def test_j_sv_is_large_gain_limit():
    cav = CavityParams(0.2, 0.0, 0.05)
    T = 3.0
    eta = np.exp(-cav.gamma_tau * T)
    f = factor_smss(T, cav.gamma_tau, cav.n_t, 1e12)
    assert f == pytest.approx(j_sv(eta, cav.n_t), rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(T=st.floats(1e-2, 1e3), lg=st.floats(-8, 1), n=st.floats(1e-5, 1.0), lG=st.floats(0, 8))
def test_squeezed_factors_positive_and_finite(T, lg, n, lG):
    gam, G = 10 ** lg, 10 ** lG
    fs = factor_smss(T, gam, n, G)
    ft = factor_tmss(T, gam, 1e-2 * gam, n, G)
    assert np.isfinite(fs) and fs > 0
    assert np.isfinite(ft) and ft > 0


@settings(max_examples=30, deadline=None)
@given(T=st.floats(1e-1, 1e3), lg=st.floats(-6, 0), n=st.floats(1e-4, 1.0))
def test_qfi_dominates_homodyne_for_vacuum(T, lg, n):
    cav = CavityParams(10 ** lg, 0.0, n)
    assert k_vac(T, cav).value >= k_vac_hom(T, cav).value * (1 - 1e-12)
