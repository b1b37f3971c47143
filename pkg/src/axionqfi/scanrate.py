"""Broadband figures of merit: in-cavity scan rate K, input-output scan rate J.

``K = int dw K(w, T)/T``.  Because ``K(w, T) = s(w, T)^2 F(T)`` with only
the axion gain depending on ``w``, the integral reduces to ``int g(w)^2 dw``,
which is even in ``w`` and evaluated on ``[0, inf)`` decade by decade.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .cavity import CavityParams, SourceSpec, _gain, _check_time
from .errors import AccuracyError, DivergenceError, DomainError
from .optimize import default_t_range, optimize_t
from .protocols import fisher_factor, rate

TAIL_RTOL = 1e-6
QUAD_RTOL = 1e-10
MAX_DECADES = 40


@dataclass(frozen=True)
class ScanRateResult:
    """Scan rate ``value`` in units of ``(gamma_A tau_A)^2 / tau_A^2`` and diagnostic ``(w, rate)`` samples."""

    value: float
    integrand_samples: tuple = field(default_factory=tuple)
    T: float = float("nan")


def _integrate_even(f, scale, rtol=QUAD_RTOL, tail_rtol=TAIL_RTOL):
    """``2 int_0^inf f`` by quadrature over ``[0, scale]`` and successive decades."""
    total, _ = quad(f, 0.0, scale, epsrel=rtol, epsabs=0.0, limit=500)
    lo = scale
    for _ in range(MAX_DECADES):
        hi = 10.0 * lo
        part, _ = quad(f, lo, hi, epsrel=rtol, epsabs=0.1 * tail_rtol * abs(total), limit=500)
        total += part
        lo = hi
        if abs(part) <= tail_rtol * abs(total):
            return 2.0 * total
    raise AccuracyError("frequency integral did not converge")


def gain_squared_integral(T: float, cavity: CavityParams, rtol=QUAD_RTOL) -> float:
    """``int_{-inf}^{inf} g(T, w)^2 dw``."""
    t = float(_check_time(T))
    gam = cavity.gamma_tau
    scale = max(1.0, 0.5 * gam, 1.0 / t)

    def f(w):
        return float(_gain(np.array([t]), gam, w)[0]) ** 2

    return _integrate_even(f, scale, rtol)


def scan_rate_incavity(source: SourceSpec, T, cavity: CavityParams, receiver="qfi",
                       per_omega_t: bool = False, n_samples: int = 32, rtol=QUAD_RTOL) -> ScanRateResult:
    """In-cavity scan rate ``K = int dw K(w, T)/T``.

    ``T=None`` uses the on-resonance optimal accumulation time of the source.
    With ``per_omega_t`` the accumulation time is re-optimized at every
    detuning instead (``T`` is then ignored).
    """
    gam = cavity.gamma_tau
    if per_omega_t:
        t_range = default_t_range(cavity)

        def f(w):
            return optimize_t(lambda t: rate(source, receiver, t, cavity, w), t_range, n_grid=200).rate_star

        value = _integrate_even(f, max(1.0, 0.5 * gam), rtol=1e-7, tail_rtol=TAIL_RTOL)
        t_used = float("nan")
    else:
        if T is None:
            T = optimize_t(lambda t: rate(source, receiver, t, cavity), default_t_range(cavity)).t_star
        t_used = float(_check_time(T))
        pref = (cavity.coupling_prefactor * (-np.expm1(-gam * t_used)) / gam) ** 2
        factor = float(fisher_factor(source, receiver, t_used, cavity))
        value = pref * factor * gain_squared_integral(t_used, cavity, rtol) / t_used
    ws = np.concatenate([[0.0], np.logspace(-2, 2, n_samples - 1) * max(1.0, 0.5 * gam)])
    if per_omega_t:
        samples = tuple((float(w), float(f(w))) for w in ws[:8])
    else:
        samples = tuple((float(w), float(rate(source, receiver, t_used, cavity, w))) for w in ws)
    return ScanRateResult(float(value), samples, t_used)


def scan_rate_inputoutput(cavity: CavityParams, gamma_l_tau: float | None = None,
                          weak_coupling: bool = True) -> ScanRateResult:
    """Optimal input-output (linear amplifier) scan rate ``16 pi gamma_A^2 / (27 N_T (N_T+1)(gamma_A + gamma_l))``.

    ``gamma_l_tau`` defaults to ``Gamma tau_A``.  With ``weak_coupling`` the
    ``gamma_A`` term of the denominator is dropped (``gamma_A << gamma_l``),
    which keeps the result proportional to ``(gamma_A tau_A)^2`` like the
    in-cavity figures of merit.
    """
    gl = cavity.gamma_tau if gamma_l_tau is None else float(gamma_l_tau)
    if not gl > 0:
        raise DomainError("gamma_l tau_A must be > 0")
    n = cavity.n_t
    if n <= 0:
        raise DivergenceError("the input-output scan rate diverges for N_T = 0")
    c = cavity.coupling_prefactor
    denom = gl if weak_coupling else c + gl
    return ScanRateResult(16.0 * np.pi * c * c / (27.0 * n * (n + 1.0) * denom))


def min_scan_time(scan_rate, snr2: float, bandwidth: float) -> float:
    """Minimum scanning time ``SNR^2 B / scan_rate``."""
    value = scan_rate.value if isinstance(scan_rate, ScanRateResult) else float(scan_rate)
    if not snr2 > 0 or not bandwidth > 0:
        raise DomainError("snr2 and bandwidth must be > 0")
    if not value > 0:
        raise DivergenceError("zero scan rate")
    return snr2 * bandwidth / value
