"""Accumulation-time and gain optimization, plus leading-order asymptotic predictors.

The rate ``K(T)/T`` can have two competing local maxima in ``T`` separated by
orders of magnitude, so the search always scans a log-spaced grid first and
then refines every bracketed local maximum.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import lambertw

from .cavity import CavityParams, SourceSpec
from .errors import DomainError, RangeError

N_GRID = 400
T_RTOL = 1e-6

# leading-order asymptotic constants
SMSS_LINEAR = 2.455
SMSS_SATURATED = 0.665
TMSS_LINEAR = 1.283
TMSS_SATURATED = 0.347
TMSS_IDEAL_LINEAR = 0.321


def lambert_w_m1(x: float) -> float:
    """Lower real branch ``W_{-1}(x)`` for ``x`` in ``[-1/e, 0)``.

    Evaluated with :func:`scipy.special.lambertw` (``k=-1``) and polished by
    Halley steps until ``|w e^w - x| < 1e-12``.
    """
    x = float(x)
    if not (-np.exp(-1.0) - 1e-15 <= x < 0.0):
        raise DomainError("W_{-1} is real only for x in [-1/e, 0)")
    if x <= -np.exp(-1.0):
        return -1.0
    w = float(np.real(lambertw(x, -1)))
    for _ in range(4):
        ew = np.exp(w)
        f = w * ew - x
        if abs(f) < 1e-15:
            break
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    return w


def vacuum_t_star_constant() -> float:
    """``Gamma T*`` of the vacuum probe in the good-cavity limit: ``-W_{-1}(-1/(2 sqrt e)) - 1/2``."""
    return -lambert_w_m1(-0.5 * np.exp(-0.5)) - 0.5


@dataclass(frozen=True)
class RateOptimum:
    """Result of a 1-D rate maximization.

    ``t_star`` is in the units of the optimized variable (``T/tau_A`` for
    accumulation times).  ``at_boundary`` flags a maximum on the edge of the
    search range, i.e. no interior optimum was found there.
    """

    t_star: float
    rate_star: float
    all_local_maxima: tuple = field(default_factory=tuple)
    at_boundary: bool = False


def default_t_range(cavity: CavityParams):
    """Accumulation times scanned by default: ``[1e-4 min(tau_A, 1/Gamma), 50/Gamma]``."""
    g = cavity.gamma_tau
    return 1e-4 * min(1.0, 1.0 / g), 50.0 / g


def _eval(fn, xs, vectorized):
    if vectorized:
        try:
            out = np.asarray(fn(xs), dtype=float)
            if out.shape == xs.shape:
                return out
        except (TypeError, ValueError):
            pass
    return np.array([float(fn(float(x))) for x in xs])


def optimize_t(rate_fn, t_range=None, n_grid: int = N_GRID, rtol: float = T_RTOL,
               vectorized: bool = True) -> RateOptimum:
    """Global maximum of ``rate_fn`` over ``t_range`` (log-grid scan + bounded refinement).

    Every interior local maximum of the grid is refined with a bounded scalar
    search in ``log t`` to relative tolerance ``rtol``; all of them are
    returned in ``all_local_maxima`` sorted by ``t``.
    """
    if t_range is None:
        raise DomainError("t_range is required")
    lo, hi = float(t_range[0]), float(t_range[1])
    if not (0 < lo < hi) or not np.isfinite(hi):
        raise DomainError("t_range must satisfy 0 < lo < hi < inf")
    u = np.linspace(np.log(lo), np.log(hi), int(n_grid))
    xs = np.exp(u)
    vals = _eval(rate_fn, xs, vectorized)
    finite = np.isfinite(vals)
    if not np.any(finite):
        raise RangeError("rate function is not finite anywhere on the range")
    v = np.where(finite, vals, -np.inf)

    def neg(uu):
        r = float(np.asarray(rate_fn(np.exp(uu))))
        return -r if np.isfinite(r) else np.inf

    maxima = []
    for i in range(1, len(v) - 1):
        if v[i] >= v[i - 1] and v[i] > v[i + 1] and np.isfinite(v[i]):
            res = minimize_scalar(neg, bounds=(u[i - 1], u[i + 1]), method="bounded",
                                  options={"xatol": rtol * 0.5})
            if np.isfinite(res.fun) and -res.fun >= v[i]:
                maxima.append((float(np.exp(res.x)), float(-res.fun)))
            else:
                maxima.append((float(xs[i]), float(v[i])))
    at_boundary = False
    if v[0] > v[1]:
        maxima.append((float(xs[0]), float(v[0])))
    if v[-1] > v[-2]:
        maxima.append((float(xs[-1]), float(v[-1])))
    if not maxima:
        # plateau: take the largest grid value
        i = int(np.argmax(v))
        maxima.append((float(xs[i]), float(v[i])))
    maxima.sort()
    best = max(maxima, key=lambda p: p[1])
    at_boundary = best[0] in (float(xs[0]), float(xs[-1]))
    if not np.isfinite(best[1]):
        raise RangeError("no finite maximum in range")
    return RateOptimum(best[0], best[1], tuple(maxima), at_boundary)


@dataclass(frozen=True)
class GainOptimum:
    g_star: float
    rate: float
    flat: bool
    all_local_maxima: tuple = ()

    def __iter__(self):
        return iter((self.g_star, self.rate))


def optimize_g(rate_star_fn, g_range, n_grid: int = 61, rtol: float = 1e-4) -> GainOptimum:
    """Maximize ``rate_star_fn(G)`` over ``g_range`` on a log grid with bounded refinement.

    ``flat`` is set when the sampled values vary by less than ``1e-12``
    (relative); the right endpoint is then returned.
    """
    lo, hi = float(g_range[0]), float(g_range[1])
    if not (1.0 <= lo <= hi):
        raise DomainError("gain range must satisfy 1 <= lo <= hi")
    if lo == hi:
        return GainOptimum(lo, float(rate_star_fn(lo)), True, ((lo, float(rate_star_fn(lo))),))
    opt = optimize_t(lambda g: rate_star_fn(float(g)), (lo, hi), n_grid=n_grid, rtol=rtol, vectorized=False)
    vals = [r for _, r in opt.all_local_maxima]
    probe = [float(rate_star_fn(lo)), float(rate_star_fn(hi))]
    spread = max(vals + probe) - min(vals + probe)
    flat = spread <= 1e-12 * max(abs(max(vals + probe)), 1e-300)
    if flat:
        return GainOptimum(hi, probe[1], True, opt.all_local_maxima)
    return GainOptimum(opt.t_star, opt.rate_star, False, opt.all_local_maxima)


# -- asymptotic predictors ---------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Leading-order predictions for a squeezed source.

    ``advantage_pred`` and ``t_star_pred`` are evaluated at the requested gain
    (``nan`` if no gain was given); ``regime`` names the formula set used.
    """

    g_th: float
    g_sat: float
    t_star_pred: float
    advantage_pred: float
    regime: str
    advantage_linear: float = float("nan")
    advantage_saturated: float = float("nan")


def asymptotics_smss(cavity: CavityParams, G: float | None = None) -> AsymptoticPrediction:
    """SMSS threshold ``1/N_T``, saturation ``2 sqrt(2 N_T)/(Gamma tau_A)`` and advantages."""
    n, g = cavity.n_t, cavity.gamma_tau
    if n <= 0:
        raise DomainError("the asymptotic predictions need N_T > 0")
    g_th = 1.0 / n
    g_sat = 2.0 * np.sqrt(2.0 * n) / g
    sat = SMSS_SATURATED * n / g
    if G is None:
        return AsymptoticPrediction(g_th, g_sat, float("nan"), float("nan"), "smss", float("nan"), sat)
    lin = SMSS_LINEAR * G * n
    t_pred = max(2.0 * np.sqrt(2.0 * n) / (g * G), 1.0)
    adv = lin if G < g_sat else sat
    return AsymptoticPrediction(g_th, g_sat, t_pred, adv, "smss", lin, sat)


def tmss_lossy_idler(cavity: CavityParams) -> bool:
    """True in the lossy-idler regime ``Gamma_idler/Gamma > N_T``."""
    return cavity.gamma_idler_tau / cavity.gamma_tau > cavity.n_t


def asymptotics_tmss(cavity: CavityParams, G: float | None = None) -> AsymptoticPrediction:
    """TMSS predictions; the lossy- or ideal-idler set is chosen by :func:`tmss_lossy_idler`."""
    n, g, gi = cavity.n_t, cavity.gamma_tau, cavity.gamma_idler_tau
    if tmss_lossy_idler(cavity):
        if n <= 0:
            raise DomainError("the lossy-idler predictions need N_T > 0")
        ratio = gi / g
        g_th = 1.0 / (n * (1.0 + 1.0 / ratio))
        shape = np.sqrt(1.0 + ratio ** 2) / (1.0 + ratio)
        g_sat = 2.0 * np.sqrt(n) / g * shape
        sat = TMSS_SATURATED * n / gi
        if G is None:
            return AsymptoticPrediction(g_th, g_sat, float("nan"), float("nan"), "tmss-lossy", float("nan"), sat)
        lin = TMSS_LINEAR * G * n * (1.0 + 1.0 / ratio)
        t_pred = max(2.0 * np.sqrt(n) / (g * G) * shape, 1.0)
        return AsymptoticPrediction(g_th, g_sat, t_pred, lin if G < g_sat else sat, "tmss-lossy", lin, sat)
    g_th = 1.0 / TMSS_IDEAL_LINEAR
    g_sat = 2.0 / g
    sat = TMSS_SATURATED / g
    if G is None:
        return AsymptoticPrediction(g_th, g_sat, 1.0, float("nan"), "tmss-ideal", float("nan"), sat)
    lin = TMSS_IDEAL_LINEAR * G
    return AsymptoticPrediction(g_th, g_sat, 1.0, lin if G < g_sat else sat, "tmss-ideal", lin, sat)


def result1_region(cavity: CavityParams, G: float) -> dict:
    """Quantum-advantage predicates with quality factors ``Q_axion ~ tau_A``, ``Q_cav ~ 1/Gamma``,
    ``Q_idler ~ 1/Gamma_idler`` (proportionality constants set to 1).

    SMSS: ``Gamma tau_A <= N_T`` and ``G N_T >= 1``.
    TMSS, lossy idler: ``Gamma_idler tau_A <= N_T`` and ``G N_T >= Gamma_idler/Gamma``.
    TMSS, ideal idler: ``Gamma tau_A <= 1`` and ``G > 1``.
    """
    n, g, gi = cavity.n_t, cavity.gamma_tau, cavity.gamma_idler_tau
    smss = bool(g <= n and G * n >= 1.0)
    if tmss_lossy_idler(cavity):
        tmss = bool(gi <= n and G * n >= gi / g)
    else:
        tmss = bool(g <= 1.0 and G > 1.0)
    return {"smss_advantage": smss, "tmss_advantage": tmss}


# -- optimized protocol rates --------------------------------------------------------------------------


def rate_star(source: SourceSpec, receiver, cavity: CavityParams, detuning_tau: float = 0.0,
              t_range=None, n_grid: int = N_GRID) -> RateOptimum:
    """``T``-optimized Fisher rate of a (source, receiver) pair with a closed-form Fisher factor."""
    from .protocols import rate
    t_range = default_t_range(cavity) if t_range is None else t_range
    return optimize_t(lambda t: rate(source, receiver, t, cavity, detuning_tau), t_range, n_grid)


def advantage(source: SourceSpec, cavity: CavityParams, receiver="qfi", fixed_t: float | None = None,
              baseline: RateOptimum | None = None) -> float:
    """``R*(source)/R*_VAC`` with both rates ``T``-optimized (or the source at ``fixed_t``)."""
    from .protocols import rate
    base = rate_star(SourceSpec.vacuum(), "qfi", cavity) if baseline is None else baseline
    if fixed_t is not None:
        return float(rate(source, receiver, fixed_t, cavity)) / base.rate_star
    return rate_star(source, receiver, cavity).rate_star / base.rate_star
