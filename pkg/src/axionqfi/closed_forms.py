"""Closed-form Fisher informations for vacuum, SMSS and TMSS probes.

Every quantity factorizes as ``K = s(T, omega)^2 * F(T)`` where
``s = d n_A^eff / d N_A`` (:func:`axion_gain.signal_slope`) carries the whole
detuning dependence and ``F`` is the Fisher information of the additive-noise
photon number for the probe/channel pair.  The ``F`` factors below are written
in regrouped forms in which every denominator factor is a sum of non-negative
terms, so they are accurate for ``Gamma T`` from ``1e-12`` to ``1e3`` and gains
up to ``1e12``.

The ``transcribed_*`` functions are literal transcriptions of the long
expanded expressions (with ``tau_A = 1``).  They suffer from cancellation and
removable singularities and serve only as cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, _check_time, signal_slope
from .errors import DivergenceError, DomainError


@dataclass(frozen=True)
class FisherPoint:
    """Fisher information ``value`` at accumulation time ``T`` and ``rate = value/T``.

    Scalar ``T`` gives floats; an array of times gives arrays of the same shape.
    """

    value: float | np.ndarray
    rate: float | np.ndarray
    T: float | np.ndarray

    @classmethod
    def make(cls, value, T):
        value, T = np.broadcast_arrays(np.asarray(value, dtype=float), np.asarray(T, dtype=float))
        if value.ndim == 0:
            return cls(float(value), float(value / T), float(T))
        return cls(value.copy(), value / T, T.copy())


# -- F factors (Fisher information per unit squared signal slope) -------------


def factor_vac(n_t):
    """Photon-counting optimal vacuum factor ``1/(N_T (1 + N_T))``."""
    if n_t <= 0:
        raise DivergenceError("the vacuum QFI diverges for N_T = 0")
    return 1.0 / (n_t * (1.0 + n_t))


def factor_vac_hom(n_t):
    """Homodyne on a thermal output: ``2/(2 N_T + 1)^2``."""
    return 2.0 / (2.0 * n_t + 1.0) ** 2


def factor_smss(T, gamma_tau, n_t, gain):
    """SMSS factor at ``G >= 1`` (vectorized in ``T``).

    With ``x0 = 2N+1``, ``a = x0 (eta G + 1 - eta)``, ``b = x0 (eta/G + 1 - eta)``
    (twice the output quadrature variances)::

        F = 2 [ (a^2 + b^2)/(ab(ab+1)) + (a+b)^2/(ab((ab)^2 - 1)) ]

    and ``ab - 1 = 4N(N+1) + x0^2 eta (1-eta) (G-1)^2/G`` is evaluated as written.
    """
    t = np.asarray(T, dtype=float)
    x0 = 2.0 * n_t + 1.0
    eta = np.exp(-gamma_tau * t)
    eps = -np.expm1(-gamma_tau * t)
    a = x0 * (eta * gain + eps)
    b = x0 * (eta / gain + eps)
    ab = a * b
    abm1 = 4.0 * n_t * (n_t + 1.0) + x0 * x0 * eta * eps * (gain - 1.0) ** 2 / gain
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2.0 * ((a * a + b * b) / (ab * (ab + 1.0)) + (a + b) ** 2 / (ab * abm1 * (ab + 1.0)))
    return out


def factor_tmss(T, gamma_tau, gamma_idler_tau, n_t, gain):
    """TMSS factor at ``G >= 1`` (vectorized in ``T``).

    The output is in standard form ``[[a I, c Z], [c Z, b I]]`` (twice the
    covariance) with ``a = x0 (1 + eta_s (G-1))``, ``b = x0 (1 + eta_i (G-1))``,
    ``c = x0 sqrt(eta_s eta_i (G^2-1))``.  With ``D = ab - c^2``::

        F = 4 [(D-1)(b^2+1) + 2b(b-a)] / [(D+1)(D-1-(a-b))(D-1+(a-b))]

    where ``D - 1 +- (a - b)`` and the numerator are expanded into manifestly
    non-negative sums.
    """
    t = np.asarray(T, dtype=float)
    x0 = 2.0 * n_t + 1.0
    es = np.exp(-gamma_tau * t)
    eps_s = -np.expm1(-gamma_tau * t)
    ei = np.exp(-gamma_idler_tau * t)
    eps_i = -np.expm1(-gamma_idler_tau * t)
    gm1 = gain - 1.0
    nn = 4.0 * n_t * (n_t + 1.0)
    a = x0 * (1.0 + es * gm1)
    b = x0 * (1.0 + ei * gm1)
    mix = es * eps_i + ei * eps_s
    dm1 = nn + x0 * x0 * gm1 * mix
    amb = x0 * gm1 * (eps_i - eps_s)  # a - b
    low = nn + x0 * gm1 * (2.0 * ei * eps_s + 2.0 * n_t * mix)  # D - 1 - (a - b)
    up = nn + x0 * gm1 * (2.0 * es * eps_i + 2.0 * n_t * mix)  # D - 1 + (a - b)
    num = np.where(amb >= 0, low * (b * b + 1.0) + amb * (b - 1.0) ** 2, dm1 * (b * b + 1.0) - 2.0 * b * amb)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 4.0 * num / ((dm1 + 2.0) * low * up)
    return out


def _check_gain(gain):
    if not np.isfinite(gain) or gain < 1:
        raise DomainError("squeezing gain must be >= 1")


def _slope2(T, cavity, detuning_tau):
    return np.asarray(signal_slope(T, cavity, detuning_tau)) ** 2


# -- public closed forms ---------------------------------------------------------


def k_vac_hom(T, cavity: CavityParams, detuning_tau: float = 0.0) -> FisherPoint:
    """Vacuum probe with homodyne readout (either quadrature)."""
    _check_time(T)
    return FisherPoint.make(_slope2(T, cavity, detuning_tau) * factor_vac_hom(cavity.n_t), T)


def k_vac(T, cavity: CavityParams, detuning_tau: float = 0.0) -> FisherPoint:
    """Vacuum-probe QFI ``(d n_A^eff/dN_A)^2 / (N_T (1 + N_T))``."""
    _check_time(T)
    return FisherPoint.make(_slope2(T, cavity, detuning_tau) * factor_vac(cavity.n_t), T)


def k_smss(T, cavity: CavityParams, detuning_tau: float = 0.0, G: float = 1.0) -> FisherPoint:
    """SMSS QFI at detuning ``detuning_tau`` and quadrature gain ``G``."""
    _check_time(T)
    _check_gain(G)
    f = factor_smss(T, cavity.gamma_tau, cavity.n_t, G)
    return FisherPoint.make(_slope2(T, cavity, detuning_tau) * f, T)


def k_tmss_onres(T, cavity: CavityParams, G: float = 1.0) -> FisherPoint:
    """On-resonance TMSS QFI with idler storage rate ``gamma_idler_tau``."""
    return k_tmss_general(T, cavity, 0.0, G, method="closed")


def k_tmss_general(T, cavity: CavityParams, detuning_tau: float = 0.0, G: float = 1.0,
                   method: str = "pipeline") -> FisherPoint:
    """TMSS QFI at arbitrary detuning.

    ``method="pipeline"`` (default, scalar ``T`` only) evaluates the general
    Gaussian QFI of the assembled two-mode output state.
    ``method="closed"`` uses ``s(omega)^2 * factor_tmss`` (vectorized); the
    detuning only enters through the signal slope because the axion acts as
    additive noise, so both methods agree.
    """
    _check_time(T)
    _check_gain(G)
    if method == "pipeline":
        from .pipeline import qfi_pipeline
        from .cavity import SourceSpec
        return FisherPoint.make(qfi_pipeline(SourceSpec.tmss(G), float(T), cavity, detuning_tau), T)
    if method != "closed":
        raise DomainError(f"unknown method {method!r}")
    f = factor_tmss(T, cavity.gamma_tau, cavity.gamma_idler_tau, cavity.n_t, G)
    return FisherPoint.make(_slope2(T, cavity, detuning_tau) * f, T)


def j_sv(eta, n_t):
    """Saturated QFI of the additive noise for an infinitely squeezed probe.

    ``2 / ((1 - eta)^2 (1 + 2 N_T)^2)`` for a thermal-loss channel of
    transmissivity ``eta`` whose input squeezed state was built from thermal
    photons ``N_T``.
    """
    return 2.0 / ((1.0 - eta) ** 2 * (1.0 + 2.0 * n_t) ** 2)


# -- literal transcriptions (tau_A = 1) -----------------------------------------------


def transcribed_g(t, gam, w):
    """Axion gain as the printed expanded expression (singular at ``Gamma = 2``, ``w = 0``)."""
    p = 4 * w * w + gam * gam
    dp = p + 4 * gam + 4
    dm = p - 4 * gam + 4
    num = 4 * ((gam - 2) * dp + np.exp(gam * t) * (gam + 2) * dm
               - 2 * gam * np.exp(0.5 * t * (gam - 2)) * ((p - 4) * np.cos(t * w) + 8 * w * np.sin(t * w)))
    return num / ((np.exp(gam * t) - 1) * dm * dp)


def transcribed_k_vac_hom(t, gam, w, n_t):
    """General-detuning vacuum-homodyne Fisher information, expanded form."""
    w2 = w * w
    br = (gam * (gam ** 2 + 4 * w2 + 8j * w - 4) * np.exp(0.5 * t * (-2 + gam - 2j * w))
          - np.exp(gam * t) * (gam + 2) * (gam * (gam - 4) + 4 * w2 + 4)
          + gam * (gam - 2j * w - 2) * (gam + 2j * w + 2) * np.exp(0.5 * t * (-2 + gam + 2j * w))
          - (gam - 2) * (gam * (gam + 4) + 4 * w2 + 4))
    den = gam ** 2 * (2 * n_t + 1) ** 2 * ((gam ** 2 + 4 * w2) ** 2 - 8 * (gam ** 2 - 4 * w2) + 16) ** 2
    return np.real(32 * np.exp(-2 * gam * t) * br ** 2) / den


def transcribed_k_vac_hom_onres(t, gam, n_t):
    br = -2 * gam * np.exp(0.5 * t * (gam - 2)) + np.exp(gam * t) * (gam - 2) + gam + 2
    return 32 * np.exp(-2 * gam * t) * br ** 2 / (gam ** 2 * (2 * n_t + 1) ** 2 * (gam ** 2 - 4) ** 2)


def transcribed_k_vac(t, gam, w, n_t):
    w2 = w * w
    br = ((gam - 2) * (gam * (gam + 4) + 4 * w2 + 4)
          - 2 * gam * np.exp(0.5 * t * (gam - 2)) * ((gam ** 2 + 4 * w2 - 4) * np.cos(t * w) + 8 * w * np.sin(t * w))
          + (gam + 2) * np.exp(gam * t) * (gam * (gam - 4) + 4 * w2 + 4))
    den = gam ** 2 * n_t * (n_t + 1) * ((gam ** 2 + 4 * w2) ** 2 - 8 * (gam ** 2 - 4 * w2) + 16) ** 2
    return 16 * np.exp(-2 * gam * t) * br ** 2 / den


def transcribed_k_smss(t, gam, w, n_t, G):
    x = 2 * n_t + 1
    w2 = w * w
    e = np.exp(gam * t)
    first = (x ** 2 / (2 * G ** 2) + G * x ** 2 * (e - 1) + x ** 2 * (e - 1) / G + 0.5 * (2 * G * n_t + G) ** 2
             + (4 * n_t ** 2 + 4 * n_t + 2) * e ** 2 - 2 * x ** 2 * e + x ** 2)
    br = (gam * (gam ** 2 + 4 * w2 - 8j * w - 4) * np.exp(0.5 * t * (gam - 2 + 2j * w))
          + gam * (gam ** 2 + 4 * w2 + 8j * w - 4) * np.exp(0.5 * t * (gam - 2 - 2j * w))
          - (gam + 2) * e * (gam ** 2 - 4 * gam + 4 * w2 + 4)
          - (gam - 2) * (gam ** 2 + 4 * gam + 4 * w2 + 4))
    num = 64 * G ** 2 * first * br ** 2
    den1 = (gam ** 2 * (-gam + 2j * w + 2) ** 2 * (gam - 2j * w + 2) ** 2
            * (gam + 2j * w - 2) ** 2 * (gam + 2j * w + 2) ** 2)
    den2 = (8 * G ** 2 * n_t * (2 * n_t ** 3 + 4 * n_t ** 2 + 3 * n_t + 1) * e ** 4
            + (G - 1) ** 2 * (G ** 2 - 4 * G + 1) * x ** 4 * e ** 2 - 2 * (G - 1) ** 4 * x ** 4 * e
            + 2 * (G - 1) ** 2 * G * x ** 4 * e ** 3 + (G - 1) ** 4 * x ** 4)
    return np.real(num / (den1 * den2))


def transcribed_k_tmss_onres(t, gam, gam_i, n_t, G):
    x = 2 * n_t + 1
    es, ei = np.exp(gam * t), np.exp(gam_i * t)
    A = G + es - 1
    B = G + ei - 1
    P = 2 * (G - 1) * x ** 2 * ei + (G - 1) ** 2 * x ** 2 + 4 * n_t * (n_t + 1) * ei ** 2
    pre = 16 * np.exp(t * (gam_i - gam)) * (gam - 2 * gam * np.exp(0.5 * t * (gam - 2)) + es * (gam - 2) + 2) ** 2
    br = (4 * x ** 2 * A * np.exp(-t * (gam + 3 * gam_i)) * B * P
          - 4 * ((G ** 2 - 1) * x ** 2 * np.exp(-t * (gam + gam_i))
                 + x ** 2 * np.exp(-t * (gam + 3 * gam_i)) * B ** 2 * ((G ** 2 - 1) * x ** 2 - np.exp(t * (gam + gam_i)))
                 + 1))
    d1 = (G - 1) * x ** 2 * ei + (G - 1) * x ** 2 * es - 2 * (G - 1) * x ** 2 + (4 * n_t ** 2 + 4 * n_t + 2) * es * ei
    e2 = np.exp(-2 * t * (gam + gam_i))
    d2 = ((G ** 2 - 1) ** 2 * x ** 4 * e2 - 2 * (G ** 2 - 1) * x ** 4 * A * e2 * B
          + 2 * (G ** 2 - 1) * x ** 2 * np.exp(-t * (gam + gam_i)) - x ** 2 * np.exp(-2 * t * gam_i) * B ** 2
          + x ** 2 * A ** 2 * e2 * P + 1)
    return pre * br / (gam ** 2 * (gam ** 2 - 4) ** 2 * d1 * d2)
