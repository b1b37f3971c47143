"""Measurement models for the axion-noise and random-phase displacement problems.

Gaussian readouts (homodyne, heterodyne, Bell) are handled by their 1-D/2-D
Gaussian outcome distributions.  The nulling receiver anti-squeezes the
output and counts photons; its distribution comes from :mod:`.photon`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cavity import AxionParams, CavityParams, SourceKind, SourceSpec, output_state, signal_slope
from .errors import AccuracyError, CutoffError, DomainError, MeasurementModelError, NumericalInstabilityError
from .gaussian import (
    GaussianState,
    SymplecticOp,
    apply_symplectic,
    cfi_gaussian_readout,
    qfi_from_moments,
    richardson_derivative,
)
from .photon import (
    DEFAULT_TAIL_EPS,
    PhotonDistribution,
    abc_from_moments,
    joint_pn_two_mode,
    marian_pn,
    state_pn,
)

PROB_FLOOR = 1e-15
ISOTROPY_TOL = 1e-12


G_STAR_RULES = ("isotropic", "matched", "best")


@dataclass(frozen=True)
class NullingConfig:
    """Anti-squeezing gain ``G*`` of the nulling receiver and whether the idler is counted.

    ``antisqueeze_gain`` fixes ``G*`` explicitly.  Otherwise ``rule`` picks it:
    ``"isotropic"`` makes the counted mode(s) phase-insensitive at ``N_A = 0``
    (:func:`choose_antisqueeze_gain`), ``"matched"`` undoes the source
    squeezer (``G* = G``), and ``"best"`` keeps whichever of the two gives the
    larger Fisher information.
    """

    antisqueeze_gain: float | None = None
    count_idler: bool = True
    rule: str = "isotropic"

    def __post_init__(self):
        if self.antisqueeze_gain is not None and (
                not np.isfinite(self.antisqueeze_gain) or self.antisqueeze_gain < 1):
            raise DomainError("anti-squeezing gain must be finite and >= 1")
        if self.rule not in G_STAR_RULES:
            raise DomainError(f"rule must be one of {G_STAR_RULES}")


@dataclass(frozen=True)
class PhaseModelParams:
    """Random-phase displacement model.

    ``kappa``: transmissivity; ``n_b``: added thermal photons; ``n_s``: probe
    squeezing photons; ``alpha``: displacement amplitude; ``n_s2``: photons of
    the receiver anti-squeezer (``None`` means matched, ``n_s2 = n_s``).
    The channel maps ``V -> kappa V + (1 - kappa)/2 + n_b`` and ``mu -> sqrt(kappa) mu``.
    """

    kappa: float
    n_b: float
    n_s: float
    alpha: float
    n_s2: float | None = None

    def __post_init__(self):
        if not (0 < self.kappa <= 1):
            raise DomainError("kappa must lie in (0, 1]")
        if self.n_b < 0 or self.n_s < 0 or self.alpha < 0:
            raise DomainError("n_b, n_s and alpha must be >= 0")
        if self.n_s2 is not None and self.n_s2 < 0:
            raise DomainError("n_s2 must be >= 0")

    @property
    def receiver_photons(self) -> float:
        return self.n_s if self.n_s2 is None else self.n_s2


# -- nulling receiver ----------------------------------------------------------------------


def _cross_coupling(state: GaussianState):
    v = state.cov
    a = 0.5 * (v[0, 0] + v[1, 1])
    b = 0.5 * (v[2, 2] + v[3, 3])
    cross = v[0:2, 2:4]
    c = 0.5 * (cross[0, 0] - cross[1, 1])
    resid = np.max(np.abs(cross - np.diag([c, -c]))) + abs(v[0, 0] - v[1, 1]) + abs(v[2, 2] - v[3, 3])
    resid += abs(v[0, 1]) + abs(v[2, 3])
    if resid > 1e-9 * max(a, b):
        raise MeasurementModelError("two-mode state is not in standard (TMSS-like) form")
    return a, b, c


def choose_antisqueeze_gain(state_at_null: GaussianState) -> float:
    """Anti-squeezing gain that makes the counted mode(s) isotropic at ``N_A = 0``.

    One mode: ``G* = sqrt(lambda_max / lambda_min)`` of the covariance (the
    ratio of quadrature standard deviations for an axis-aligned state).
    Two modes in standard form ``[[a I, c Z], [c Z, b I]]``: the two-mode
    anti-squeezer with ``G* = (a + b)/sqrt((a + b)^2 - 4 c^2)`` removes the
    correlations, leaving each mode isotropic.
    """
    if state_at_null.n_modes == 1:
        lam = np.linalg.eigvalsh(state_at_null.cov)
        g = float(np.sqrt(lam[1] / lam[0]))
        return 1.0 if g - 1.0 < ISOTROPY_TOL else g
    if state_at_null.n_modes == 2:
        a, b, c = _cross_coupling(state_at_null)
        if c <= 0:
            return 1.0
        s = a + b
        return float(s / np.sqrt((s - 2 * c) * (s + 2 * c)))
    raise MeasurementModelError("nulling is defined for one- or two-mode states")


def _null_op(state: GaussianState, g_star: float):
    """Inverse squeezer aligned with the major axis (one mode) or inverse two-mode squeezer."""
    if state.n_modes == 1:
        w, u = np.linalg.eigh(state.cov)
        major = u[:, 1]
        theta = float(np.arctan2(major[1], major[0]))
        rot = SymplecticOp.rotation(-theta)
        inv = SymplecticOp.squeezer(g_star).inverse()
        return [(rot, [0]), (inv, [0])]
    return [(SymplecticOp.two_mode_squeezer(g_star).inverse(), [0, 1])]


def apply_nulling(state: GaussianState, g_star: float, reference: GaussianState | None = None) -> GaussianState:
    """Apply the anti-squeezer of gain ``g_star``; orientation taken from ``reference`` (default ``state``)."""
    ref = state if reference is None else reference
    out = state
    for op, modes in _null_op(ref, g_star):
        out = apply_symplectic(out, op, modes)
    return out


def _nulled_parts(source, T, cavity, detuning_tau, g_star):
    """Nulled ``N_A = 0`` state and the nulled covariance added per unit ``N_A``.

    The output covariance is affine in ``N_A`` (``+ s N_A`` on the signal
    block), so the two pieces are transformed separately; adding the small
    axion term only after anti-squeezing avoids losing it against the large
    anti-squeezed variances.
    """
    null_state = output_state(source, T, cavity, AxionParams(detuning_tau, 0.0))
    if g_star is None:
        g_star = choose_antisqueeze_gain(null_state)
    base = apply_nulling(null_state, g_star, null_state)
    proj = np.zeros_like(null_state.cov)
    proj[0:2, 0:2] = np.eye(2)
    probe = GaussianState(np.zeros(null_state.cov.shape[0]), proj)
    per_na = apply_nulling(probe, g_star, null_state).cov * float(signal_slope(T, cavity, detuning_tau))
    return base, per_na, g_star


def nulling_distribution(source: SourceSpec, T: float, cavity: CavityParams, axion: AxionParams,
                         cfg: NullingConfig | None = None, n_max=None, eps=DEFAULT_TAIL_EPS) -> PhotonDistribution:
    """Photon-count distribution after anti-squeezing the output state.

    ``cfg=None`` chooses ``G*`` with :func:`choose_antisqueeze_gain` on the
    ``N_A = 0`` state.  For TMSS with ``count_idler`` the joint (signal,
    idler) distribution is returned, otherwise the signal marginal.
    """
    g_cfg = None
    if cfg is not None:
        if cfg.antisqueeze_gain is not None:
            g_cfg = cfg.antisqueeze_gain
        elif cfg.rule == "matched":
            g_cfg = source.gain
        elif cfg.rule == "best":
            raise MeasurementModelError("rule 'best' is resolved by cfi_nulling; pass an explicit gain or rule")
    base, per_na, g_star = _nulled_parts(source, T, cavity, axion.detuning_tau, g_cfg)
    count_idler = True if cfg is None else cfg.count_idler
    st = GaussianState(base.mean, base.cov + axion.n_a * per_na)
    if st.n_modes == 2 and count_idler:
        return joint_pn_two_mode(st, n_max, eps)
    return state_pn(st, 0, n_max, eps)


# -- Fisher information from distributions -----------------------------------------------------------


def _pad(p, shape):
    out = np.zeros(shape)
    out[tuple(slice(0, s) for s in p.shape)] = p
    return out


def cfi_from_distribution(dist_family: Callable[[float], PhotonDistribution], n_a0: float, dN: float,
                          one_sided: bool = False) -> float:
    """``sum_n (dp/dtheta)^2 / p`` over ``p > 1e-15``.

    The derivative uses central (or, with ``one_sided``, second-order
    forward) differences with step ``dN`` and one Richardson check.  All
    distributions are zero-padded to a common cutoff; the padded mass is below
    their certified tail bounds.
    """
    far = dist_family(n_a0 + (2 * dN if one_sided else dN))
    base = dist_family(n_a0)
    shape = tuple(max(x, y) for x, y in zip(far.pmf.shape, base.pmf.shape))
    cache = {}

    def f(theta):
        key = float(theta)
        if key not in cache:
            d = dist_family(theta)
            p = d.pmf
            if any(s > t for s, t in zip(p.shape, shape)):
                p = p[tuple(slice(0, t) for t in shape)]
            cache[key] = _pad(p, shape).reshape(-1)
        return cache[key]

    dp = richardson_derivative(f, n_a0, dN, one_sided=one_sided)
    p0 = _pad(base.pmf, shape).reshape(-1)
    mask = p0 > PROB_FLOOR
    return float(np.sum(dp[mask] ** 2 / p0[mask]))


def _nulling_step(source, T, cavity, axion, g_star):
    base, per_na, _ = _nulled_parts(source, T, cavity, axion.detuning_tau, g_star)
    gain = 0.5 * float(np.trace(per_na))  # photons added per unit N_A
    if gain == 0:
        raise MeasurementModelError("the signal slope vanishes; the Fisher information is zero")
    m0 = 0.5 * (np.trace(base.cov) - base.n_modes)
    return 0.05 * max(m0, 1e-8) / abs(gain)


def default_nulling_rule(source: SourceSpec) -> str:
    """``"best"`` for single-mode sources, ``"isotropic"`` (decorrelating) for TMSS.

    For SMSS at large gain the matched anti-squeezer reaches the QFI while the
    isotropic one does not; for TMSS the decorrelating anti-squeezer is the
    better one, so the (expensive two-mode) comparison is skipped.
    """
    return "best" if source.n_modes == 1 else "isotropic"


def _cfi_nulling_fixed(source, T, cavity, axion, g_star, count_idler):
    cfg = NullingConfig(g_star, count_idler)
    h = _nulling_step(source, T, cavity, axion, g_star)
    one_sided = axion.n_a < 2 * h

    def fam(n_a):
        return nulling_distribution(source, T, cavity, AxionParams(axion.detuning_tau, n_a), cfg)

    last = None
    for _ in range(5):
        try:
            return cfi_from_distribution(fam, axion.n_a, h, one_sided=one_sided)
        except NumericalInstabilityError as exc:
            last = exc
            h *= 0.25
    raise last


def cfi_nulling(source: SourceSpec, T: float, cavity: CavityParams, axion: AxionParams | None = None,
                cfg: NullingConfig | None = None) -> float:
    """Classical Fisher information on ``N_A`` of the nulling receiver (at ``N_A`` given, default 0).

    ``cfg=None`` uses :func:`default_nulling_rule`.  With rule ``"best"`` a
    candidate whose photon distribution exceeds the cutoff cap is skipped.
    """
    axion = AxionParams() if axion is None else axion
    cfg = NullingConfig(rule=default_nulling_rule(source)) if cfg is None else cfg
    null_state = output_state(source, T, cavity, AxionParams(axion.detuning_tau, 0.0))
    if cfg.antisqueeze_gain is not None:
        return _cfi_nulling_fixed(source, T, cavity, axion, cfg.antisqueeze_gain, cfg.count_idler)
    iso = choose_antisqueeze_gain(null_state)
    if cfg.rule == "isotropic":
        return _cfi_nulling_fixed(source, T, cavity, axion, iso, cfg.count_idler)
    if cfg.rule == "matched":
        return _cfi_nulling_fixed(source, T, cavity, axion, source.gain, cfg.count_idler)
    values, errors = [], []
    for g in sorted({iso, source.gain}):
        try:
            values.append(_cfi_nulling_fixed(source, T, cavity, axion, g, cfg.count_idler))
        except CutoffError as exc:
            errors.append(exc)
    if not values:
        raise errors[0]
    return max(values)


def _readout_step(source, T, cavity, axion):
    """Step in ``N_A`` that perturbs the covariance by ``1e-2`` of its largest entry.

    The readout moments are affine in ``N_A``, so a large step costs no
    truncation error while keeping the difference well above rounding of
    the (possibly strongly squeezed) covariance.
    """
    s = abs(float(signal_slope(T, cavity, axion.detuning_tau)))
    if s == 0:
        raise MeasurementModelError("the signal slope vanishes; the Fisher information is zero")
    scale = float(np.max(np.abs(output_state(source, T, cavity, axion).cov)))
    return 1e-2 * scale / (s * s)


def cfi_homodyne(source: SourceSpec, T: float, cavity: CavityParams, axion: AxionParams | None = None,
                 quadrature: str = "best") -> float:
    """Homodyne Fisher information on ``N_A`` of the signal mode's ``q`` or ``p`` quadrature.

    ``quadrature="best"`` returns the larger of the two.
    """
    axion = AxionParams() if axion is None else axion
    if quadrature == "best":
        return max(cfi_homodyne(source, T, cavity, axion, "q"), cfi_homodyne(source, T, cavity, axion, "p"))
    if quadrature not in ("q", "p"):
        raise DomainError("quadrature must be 'q', 'p' or 'best'")
    k = 0 if quadrature == "q" else 1

    def fam(n_a):
        st = output_state(source, T, cavity, AxionParams(axion.detuning_tau, n_a))
        return st.mean[k], st.cov[k, k]

    return cfi_gaussian_readout(fam, axion.n_a, _readout_step(source, T, cavity, axion))


def cfi_heterodyne(T: float, cavity: CavityParams, axion: AxionParams | None = None,
                   source: SourceSpec | None = None) -> float:
    """Heterodyne (both quadratures, each with an extra half vacuum unit of noise)."""
    axion = AxionParams() if axion is None else axion
    source = SourceSpec.vacuum() if source is None else source

    def fam(n_a):
        st = output_state(source, T, cavity, AxionParams(axion.detuning_tau, n_a))
        return st.mean[:2], st.cov[:2, :2] + 0.5 * np.eye(2)

    return cfi_gaussian_readout(fam, axion.n_a, _readout_step(source, T, cavity, axion))


def cfi_bell(T: float, cavity: CavityParams, axion: AxionParams | None = None, G: float = 1.0) -> float:
    """TMSS signal and idler on a balanced beamsplitter, homodyne on both output ports.

    The two pairings (``q`` of port 1 with ``p`` of port 2, and the reverse)
    are evaluated and the larger Fisher information is returned; for the
    TMSS correlation sign used here the informative pairing measures the
    quadrature combinations whose correlations cancel.
    """
    axion = AxionParams() if axion is None else axion
    src = SourceSpec.tmss(G)
    bs = SymplecticOp.beamsplitter()
    h = _readout_step(src, T, cavity, axion)
    best = 0.0
    for idx in ((0, 3), (1, 2)):
        def fam(n_a, idx=idx):
            st = apply_symplectic(output_state(src, T, cavity, AxionParams(axion.detuning_tau, n_a)), bs, [0, 1])
            ii = np.array(idx)
            return st.mean[ii], st.cov[np.ix_(ii, ii)]

        best = max(best, cfi_gaussian_readout(fam, axion.n_a, h))
    return best


# -- random-phase displacement model ----------------------------------------------------------


def _gain_from_photons(n):
    return float((np.sqrt(n) + np.sqrt(n + 1.0)) ** 2)


def phase_conditional_state(params: PhaseModelParams, phi: float) -> GaussianState:
    """Nulled Gaussian state conditioned on the displacement phase ``phi`` (single-mode probe)."""
    g = _gain_from_photons(params.n_s)
    g2 = _gain_from_photons(params.receiver_photons)
    sq = SymplecticOp.squeezer(g).matrix
    k = params.kappa
    cov = k * 0.5 * sq @ sq.T + ((1 - k) * 0.5 + params.n_b) * np.eye(2)
    mean = np.sqrt(2.0 * k) * params.alpha * np.array([np.cos(phi), np.sin(phi)])
    inv = SymplecticOp.squeezer(g2).inverse().matrix
    return GaussianState(inv @ mean, inv @ cov @ inv.T)


def _printed_parameters(params: PhaseModelParams, phi: float):
    """``zeta_1, zeta_2, d, xi, x`` exactly as in the conditional-distribution formula (``N_T`` = ``n_b``)."""
    k, nt, ns, al = params.kappa, params.n_b, params.n_s, params.alpha
    r = np.sqrt(ns * (ns + 1))
    num1 = 2 * k * nt * ns + nt ** 2 + nt - (k - 1) * k * ns
    zeta1 = num1 / (2 * nt * (k * ns + ns + 1) + nt ** 2 + k ** 2 * (-ns) + 2 * k * ns ** 2 + 2 * k * ns
                    - 2 * k * np.sqrt(ns ** 2 * (ns + 1) ** 2) + ns + 1)
    zeta2 = abs(-r * k + 2 * nt * r + r) / (2 * num1)
    d = (2 * nt * ((k + 1) * ns + 1) + nt ** 2 + 2 * k * ns ** 2 + (1 - (k - 2) * k) * ns
         - 2 * k * np.sqrt(ns ** 2 * (ns + 1) ** 2) + 1)
    xi = al ** 2 * k * (nt - ((k + 1) * r * np.cos(2 * phi)) + k * ns + ns + 1) / (
        2 * nt * ((k + 1) * ns + 1) + nt ** 2 + (-k ** 2 + 2 * k + 1) * ns + 2 * k * ns ** 2
        - 2 * k * np.sqrt(ns ** 2 * (ns + 1) ** 2) + 1)
    e2 = np.exp(2j * phi)
    br = (np.sqrt(ns) * (nt + k * ns) + e2 * nt * np.sqrt(ns + 1) + k * e2 * ns * np.sqrt(ns + 1)
          - k * e2 * np.sqrt(ns ** 2 * (ns + 1)) - k * np.sqrt(ns * (ns + 1) ** 2) + e2 * np.sqrt(ns + 1))
    x = (-1.0 / (np.sqrt(2) * r * (-2 * nt + k - 1)) * al * np.exp(-1j * phi)
         * np.sqrt(complex(k * r * (2 * nt - k + 1) / d)) * br)
    return zeta1, zeta2, d, xi, x


def _printed_formula_ok(params: PhaseModelParams) -> bool:
    if params.n_s2 is not None and params.n_s2 != params.n_s:
        return False
    if params.n_s < 1e-8:
        return False
    # x carries 1/(2 n_b - kappa + 1); zeta_2 carries 1/zeta_1-numerator
    if abs(2 * params.n_b - params.kappa + 1) < 1e-8:
        return False
    num1 = 2 * params.kappa * params.n_b * params.n_s + params.n_b ** 2 + params.n_b - (params.kappa - 1) * params.kappa * params.n_s
    return num1 > 1e-12


def phase_conditional_pn(params: PhaseModelParams, phi: float, n_max: int, method: str = "auto") -> PhotonDistribution:
    """Photon-count distribution of the nulled output conditioned on the phase ``phi``.

    ``method="formula"`` evaluates the closed-form ``zeta_1, zeta_2, d, xi, x``
    parametrization; ``"gaussian"`` builds the conditional Gaussian state and
    uses :func:`photon.marian_pn`.  ``"auto"`` uses the formula except where
    its parametrization degenerates (unsqueezed probe, ``2 n_b - kappa + 1 = 0``,
    mismatched receiver squeezer).
    """
    if method == "auto":
        method = "formula" if _printed_formula_ok(params) else "gaussian"
    if method == "gaussian":
        st = phase_conditional_state(params, phi)
        return marian_pn(*abc_from_moments(st.cov, st.mean), n_max)
    if method != "formula":
        raise DomainError(f"unknown method {method!r}")
    if not _printed_formula_ok(params):
        raise DomainError("the closed-form parametrization is singular at these parameters")
    zeta1, zeta2, d, xi, x = _printed_parameters(params, phi)
    from .photon import _binomial_transform
    # v_q = (zeta1 zeta2)^(q/2) H_q(x) / sqrt(q!)
    c = 2.0 * x * np.sqrt(zeta1 * zeta2)
    b = 2.0 * zeta1 * zeta2
    v = np.zeros(n_max + 1, dtype=complex)
    v[0] = 1.0
    if n_max >= 1:
        v[1] = c
    for q in range(1, n_max):
        v[q + 1] = (c * v[q] - b * np.sqrt(q) * v[q - 1]) / np.sqrt(q + 1.0)
    p = np.exp(-xi) / np.sqrt(d) * _binomial_transform(np.abs(v) ** 2, zeta1, n_max)
    st = phase_conditional_state(params, phi)
    from .photon import chernoff_tail
    return PhotonDistribution(p, n_max, chernoff_tail(st.cov, st.mean, n_max))


def _tmss_phase_state(params: PhaseModelParams, phi: float, g_star: float | None = None) -> GaussianState:
    """TMSS probe (``n_s`` photons per mode), signal displaced and attenuated, idler kept, then nulled."""
    g = 2.0 * params.n_s + 1.0  # cosh(2r)
    k = params.kappa
    from .gaussian import thermal
    st = apply_symplectic(thermal(0.0, 2), SymplecticOp.two_mode_squeezer(g), [0, 1])
    cov = st.cov.copy()
    cov[0:2, :] *= np.sqrt(k)
    cov[:, 0:2] *= np.sqrt(k)
    cov[0:2, 0:2] += ((1 - k) * 0.5 + params.n_b) * np.eye(2)
    mean = np.zeros(4)
    mean[0:2] = np.sqrt(2.0 * k) * params.alpha * np.array([np.cos(phi), np.sin(phi)])
    state = GaussianState(mean, cov)
    if g_star is None:
        g_star = choose_antisqueeze_gain(GaussianState(np.zeros(4), cov))
    return apply_symplectic(state, SymplecticOp.two_mode_squeezer(g_star).inverse(), [0, 1])


def phase_averaged_pn(params: PhaseModelParams, n_max: int, n_phi: int = 32, probe: str = "smss",
                      tol: float = 1e-8) -> PhotonDistribution:
    """Unconditional distribution ``p(n) = (1/2 pi) int p(n|phi) dphi`` by the periodic trapezoid rule.

    ``n_phi`` is doubled until the distribution changes by at most ``tol``
    (at most 6 doublings); otherwise :class:`AccuracyError` is raised.
    """
    if probe not in ("smss", "tmss"):
        raise DomainError("probe must be 'smss' or 'tmss'")

    def cond(phi):
        if probe == "smss":
            return phase_conditional_pn(params, phi, n_max)
        return joint_pn_two_mode(_tmss_phase_state(params, phi), n_max, eps=None)

    def average(m):
        phis = 2.0 * np.pi * np.arange(m) / m
        dists = [cond(p) for p in phis]
        acc = np.zeros_like(dists[0].pmf)
        for d in dists:  # fixed summation order
            acc = acc + d.pmf
        return acc / m, max(d.tail_bound for d in dists)

    if params.alpha == 0:
        p, tail = average(1)
        return PhotonDistribution(p, n_max, tail)
    m = max(int(n_phi), 2)
    prev, tail = average(m)
    for _ in range(6):
        m *= 2
        cur, tail = average(m)
        if np.max(np.abs(cur - prev)) <= tol:
            return PhotonDistribution(cur, n_max, tail)
        prev = cur
    raise AccuracyError(f"phase average not converged with {m} nodes")


def phase_averaged_fisher(params: PhaseModelParams, n_max: int, n_phi: int = 32, probe: str = "smss",
                          d_alpha: float | None = None) -> float:
    """Fisher information on ``alpha`` of photon counting after phase averaging."""
    if d_alpha is None:
        d_alpha = 1e-2 * max(params.alpha, 1e-3)
    one_sided = params.alpha < 2 * d_alpha

    def fam(a):
        p = PhaseModelParams(params.kappa, params.n_b, params.n_s, a, params.n_s2)
        return phase_averaged_pn(p, n_max, n_phi, probe)

    return cfi_from_distribution(fam, params.alpha, d_alpha, one_sided=one_sided)


def gaussian_model_qfi(params: PhaseModelParams, probe: str = "smss") -> float:
    """QFI on ``alpha`` when the random-phase displacement is replaced by its Gaussian moment match.

    Phase averaging a displacement ``alpha e^{i phi}`` adds ``alpha^2`` thermal
    photons; after the channel this is ``kappa alpha^2`` on the signal mode,
    so ``dV/dalpha = 2 kappa alpha I`` on that mode.
    """
    k, a = params.kappa, params.alpha
    if probe == "vacuum":
        cov = (0.5 + params.n_b + k * a * a) * np.eye(2)
        dcov = 2 * k * a * np.eye(2)
        return qfi_from_moments(cov, np.zeros(2), dcov)
    if probe == "smss":
        sq = SymplecticOp.squeezer(_gain_from_photons(params.n_s)).matrix
        cov = k * 0.5 * sq @ sq.T + ((1 - k) * 0.5 + params.n_b + k * a * a) * np.eye(2)
        return qfi_from_moments(cov, np.zeros(2), 2 * k * a * np.eye(2))
    if probe == "tmss":
        st = _tmss_phase_state(PhaseModelParams(k, params.n_b, params.n_s, 0.0), 0.0, g_star=1.0)
        cov = st.cov.copy()
        cov[0:2, 0:2] += k * a * a * np.eye(2)
        dcov = np.zeros((4, 4))
        dcov[0:2, 0:2] = 2 * k * a * np.eye(2)
        return qfi_from_moments(cov, np.zeros(4), dcov)
    raise DomainError("probe must be 'vacuum', 'smss' or 'tmss'")


def vacuum_homodyne_normalizer(params: PhaseModelParams) -> float:
    """Vacuum-probe homodyne Fisher information on ``alpha`` under the Gaussian moment-matched model."""
    k, a = params.kappa, params.alpha
    return 0.5 * (2 * k * a) ** 2 / (0.5 + params.n_b + k * a * a) ** 2
