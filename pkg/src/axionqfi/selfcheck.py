"""Oracle cross-check suite behind ``axionqfi selfcheck``.

Each check returns ``(name, passed, detail)``.  The default run uses more
random points than ``fast=True``; both are deterministic (fixed seeds).
"""
from __future__ import annotations

import numpy as np

from .cavity import CavityParams, SourceSpec, axion_gain_g, n_a_eff_lowloss, signal_slope
from .closed_forms import k_smss, k_tmss_onres, k_vac, k_vac_hom
from .gaussian import apply_symplectic, thermal, SymplecticOp
from .optimize import default_t_range, lambert_w_m1, optimize_t, vacuum_t_star_constant
from .oracles import displaced_squeezed_thermal, fock_moments, g_quadrature, phase_model_fock_pn
from .photon import abc_from_moments, joint_pn_two_mode, marian_pn, state_pn
from .pipeline import qfi_pipeline
from .protocols import rate
from .receivers import PhaseModelParams, cfi_homodyne, phase_conditional_pn


def random_cavity_point(rng):
    """Random physical point spanning good/bad cavities, noise levels and gains."""
    gam = 10 ** rng.uniform(-8, 1)
    gam_i = 10 ** rng.uniform(-12, 1)
    n_t = 10 ** rng.uniform(-4, 0)
    gain = 10 ** rng.uniform(0, 5)
    T = min(10 ** rng.uniform(-3, 1) / max(gam, 1e-2) * rng.uniform(0.1, 1), 50 / gam)
    w = rng.uniform(-3, 3)
    return CavityParams(gam, gam_i, n_t), gain, T, w


def check_closed_forms(n_points, seed=11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        cav, gain, T, w = random_cavity_point(rng)
        pairs = [
            (k_vac(T, cav, w).value, qfi_pipeline(SourceSpec.vacuum(), T, cav, w)),
            (k_smss(T, cav, w, gain).value, qfi_pipeline(SourceSpec.smss(gain), T, cav, w)),
            (k_tmss_onres(T, cav, gain).value, qfi_pipeline(SourceSpec.tmss(gain), T, cav, 0.0)),
            (k_vac_hom(T, cav, w).value, cfi_homodyne(SourceSpec.vacuum(), T, cav, _axion(w), "q")),
        ]
        for closed, ref in pairs:
            worst = max(worst, abs(closed / ref - 1.0))
    return worst


def _axion(w):
    from .cavity import AxionParams
    return AxionParams(w, 0.0)


def check_g_quadrature(n_points, seed=12):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        gam = 10 ** rng.uniform(-3, 0.5)
        T = rng.uniform(0.05, 5.0) / max(gam, 0.2)
        w = rng.uniform(-3, 3)
        worst = max(worst, abs(axion_gain_g(T, CavityParams(gam), w) / g_quadrature(T, gam, w) - 1.0))
    return worst


def check_g_lowloss(gamma_tau=1e-6):
    cav = CavityParams(gamma_tau)
    ts = np.logspace(-2, 1, 13)
    return float(np.max(np.abs(signal_slope(ts, cav) / n_a_eff_lowloss(ts, cav, 1.0) - 1.0)))


def check_marian_fock(n_points, seed=13, dim=200, n_cmp=100):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        n_th = rng.uniform(0, 0.5)
        xi = rng.uniform(-1, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        beta = rng.uniform(0, 1.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        rho = displaced_squeezed_thermal(n_th, xi, beta, dim)
        cov, mean = fock_moments(rho)
        p = marian_pn(*abc_from_moments(cov, mean), n_cmp - 1).pmf
        worst = max(worst, float(np.max(np.abs(p - np.diag(rho).real[:n_cmp]))))
    return worst


def check_phase_fock(n_points, seed=14, n_cmp=80):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        kappa = rng.uniform(0.3, 1.0)
        n_b = 10 ** rng.uniform(-4, -1)
        n_s = rng.uniform(0.1, 2.0)
        alpha = rng.uniform(0, 1.2)
        phi = rng.uniform(0, 2 * np.pi)
        gain = (np.sqrt(n_s) + np.sqrt(n_s + 1)) ** 2
        ref = phase_model_fock_pn(kappa, n_b, gain, alpha, phi)[:n_cmp]
        got = phase_conditional_pn(PhaseModelParams(kappa, n_b, n_s, alpha), phi, n_cmp - 1).pmf
        worst = max(worst, float(np.max(np.abs(ref - got))))
    return worst


def check_joint_marginals(seed=15):
    rng = np.random.default_rng(seed)
    st = apply_symplectic(thermal(rng.uniform(0, 0.3), 2), SymplecticOp.two_mode_squeezer(3.0))
    joint = joint_pn_two_mode(st, 64, eps=None).pmf
    m0 = state_pn(st, 0, 64, eps=None).pmf
    m1 = state_pn(st, 1, 64, eps=None).pmf
    return float(max(np.max(np.abs(joint.sum(1) - m0)), np.max(np.abs(joint.sum(0) - m1))))


def check_vacuum_t_star():
    cav = CavityParams(1e-6, 0.0, 1e-2)  # the optimal time does not depend on N_T
    opt = optimize_t(lambda t: rate(SourceSpec.vacuum(), "qfi", t, cav), default_t_range(cav))
    return abs(opt.t_star * cav.gamma_tau / vacuum_t_star_constant() - 1.0)


def run_checks(fast: bool = False):
    n = 10 if fast else 100
    results = []

    def add(name, value, tol):
        results.append((name, bool(value <= tol), f"{value:.3g} (tol {tol:g})"))

    add("closed forms vs Gaussian pipeline (rel)", check_closed_forms(n), 1e-8)
    add("g closed form vs double quadrature (rel)", check_g_quadrature(5 if fast else 20), 1e-6)
    add("g good-cavity limit (rel)", check_g_lowloss(), 1e-4)
    add("marian_pn vs Fock oracle (abs)", check_marian_fock(2 if fast else 10), 1e-7)
    add("phase_conditional_pn vs Fock oracle (abs)", check_phase_fock(1 if fast else 5), 1e-7)
    add("joint pmf marginals (abs)", check_joint_marginals(), 1e-12)
    add("Lambert W_-1(-0.1) residual", abs(lambert_w_m1(-0.1) * np.exp(lambert_w_m1(-0.1)) + 0.1), 1e-12)
    add("vacuum optimal time (rel)", check_vacuum_t_star(), 1e-5)
    return results
