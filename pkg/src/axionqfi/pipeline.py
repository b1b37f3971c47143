"""Generic Gaussian-pipeline QFI of the assembled cavity output state.

This path uses no closed-form Fisher factors: the output state is built from
Gaussian channel matrices (source squeezer -> thermal loss with additive
axion noise -> idler storage) and the QFI is the general moment formula.

At large squeezing gain the lab-frame covariance has entries ``~G`` whose
relevant structure is ``O(1)``, and the moment formula loses all precision.
The QFI is invariant under any parameter-independent symplectic map, so by
double-precision path can also evaluate the state in the *decoding frame*
(channel composed as ``S^-1 L S``), which keeps the numbers ``O(1)`` when
loss is weak.  Neither frame is reliable when one arm of a strongly
squeezed two-mode state is nearly lossless and the other is not, so the
default path works in extended precision (mpmath).
"""
from __future__ import annotations

import mpmath as mp
import numpy as np

from .cavity import CavityParams, SourceKind, SourceSpec, signal_slope, _check_time
from .errors import ConfigurationError
from .gaussian import SymplecticOp, qfi_from_moments, symplectic_form, thermal

EXTENDED_DPS = 30


def working_dps(source: SourceSpec, T: float, cavity: CavityParams) -> int:
    """Digits needed by the extended-precision path.

    The moment formula cancels lab-frame entries ``~G`` down to structure of
    order ``(1 - eta) / G`` on the least lossy arm, i.e. it loses about
    ``2 log10 G + log10(1/(Gamma T))`` digits; ``EXTENDED_DPS`` digits are
    kept on top of that.
    """
    gain = 1.0 if source.kind is SourceKind.VACUUM else source.gain
    rates = [cavity.gamma_tau]
    if source.kind is SourceKind.TMSS:
        rates.append(cavity.gamma_idler_tau)
    loss = min(-np.expm1(-g * T) for g in rates)
    lost = 2.0 * np.log10(gain) + (max(0.0, -np.log10(loss)) if loss > 0 else 0.0)
    return EXTENDED_DPS + int(np.ceil(lost))


def _source_op(source: SourceSpec) -> np.ndarray:
    if source.kind is SourceKind.VACUUM:
        return np.eye(2)
    if source.kind is SourceKind.SMSS:
        return SymplecticOp.squeezer(source.gain).matrix
    return SymplecticOp.two_mode_squeezer(source.gain).matrix


def _loss_matrices(source: SourceSpec, t: float, cavity: CavityParams):
    """``(X, Y)`` of the storage channel ``V -> X V X^T + Y`` at ``N_A = 0``."""
    etas = [np.exp(-cavity.gamma_tau * t)]
    if source.kind is SourceKind.TMSS:
        etas.append(np.exp(-cavity.gamma_idler_tau * t))
    x = np.diag(np.repeat(np.sqrt(etas), 2))
    y = np.diag(np.repeat([(1.0 - e) * (cavity.n_t + 0.5) for e in etas], 2))
    return x, y


def output_moments(source: SourceSpec, T: float, cavity: CavityParams, detuning_tau: float = 0.0,
                   n_a0: float = 0.0, frame: str = "auto"):
    """``(cov, d cov / d N_A)`` of the output state at ``N_A = n_a0``.

    ``frame="lab"`` returns the physical covariance; ``frame="decoding"``
    returns it transformed by the inverse source squeezer; ``frame="auto"``
    returns whichever of the two has the better-conditioned covariance
    (heavy loss favours the lab frame, weak loss the decoding frame).
    """
    if frame == "auto":
        lab = output_moments(source, T, cavity, detuning_tau, n_a0, "lab")
        if source.kind is SourceKind.VACUUM:
            return lab
        dec = output_moments(source, T, cavity, detuning_tau, n_a0, "decoding")
        return min(lab, dec, key=lambda m: np.linalg.cond(m[0]))
    t = float(_check_time(T))
    s_op = _source_op(source)
    x_l, y_l = _loss_matrices(source, t, cavity)
    d_y = np.zeros_like(y_l)
    d_y[0, 0] = d_y[1, 1] = float(signal_slope(t, cavity, detuning_tau))
    y_l = y_l + n_a0 * d_y
    cov_in = thermal(cavity.n_t, s_op.shape[0] // 2).cov
    if frame == "lab":
        x = x_l @ s_op
        cov = x @ cov_in @ x.T + y_l
        dcov = d_y
    elif frame == "decoding":
        omega = symplectic_form(s_op.shape[0] // 2)
        s_inv = -omega @ s_op.T @ omega  # exact symplectic inverse
        x = s_inv @ x_l @ s_op
        cov = x @ cov_in @ x.T + s_inv @ y_l @ s_inv.T
        dcov = s_inv @ d_y @ s_inv.T
    else:
        raise ConfigurationError(f"unknown frame {frame!r}")
    return 0.5 * (cov + cov.T), 0.5 * (dcov + dcov.T)


def _mp_source_op(source: SourceSpec):
    if source.kind is SourceKind.VACUUM:
        return mp.eye(2)
    g = mp.mpf(source.gain)
    if source.kind is SourceKind.SMSS:
        return mp.diag([mp.sqrt(g), 1 / mp.sqrt(g)])
    ch, sh = mp.sqrt((g + 1) / 2), mp.sqrt((g - 1) / 2)
    return mp.matrix([[ch, 0, sh, 0], [0, ch, 0, -sh], [sh, 0, ch, 0], [0, -sh, 0, ch]])


def _mp_qfi(source, t, cavity, slope, n_a0):
    """Lab-frame moments and the moment-formula QFI in extended precision."""
    s_op = _mp_source_op(source)
    dim = s_op.rows
    half = mp.mpf(1) / 2
    n_t = mp.mpf(cavity.n_t)
    etas = [mp.exp(-mp.mpf(cavity.gamma_tau) * t)]
    if dim == 4:
        etas.append(mp.exp(-mp.mpf(cavity.gamma_idler_tau) * t))
    x = mp.diag([mp.sqrt(e) for e in etas for _ in range(2)]) * s_op
    y = mp.diag([(1 - e) * (n_t + half) for e in etas for _ in range(2)])
    y[0, 0] += slope * n_a0
    y[1, 1] += slope * n_a0
    sigma = 2 * (x * mp.diag([n_t + half] * dim) * x.T + y)
    dsigma = mp.zeros(dim, dim)
    dsigma[0, 0] = dsigma[1, 1] = 2 * slope
    omega = mp.zeros(dim, dim)
    for k in range(dim // 2):
        omega[2 * k, 2 * k + 1], omega[2 * k + 1, 2 * k] = 1, -1
    m = mp.matrix(dim * dim, dim * dim)
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    m[dim * i + k, dim * j + l] = sigma[i, j] * sigma[k, l] - omega[i, j] * omega[k, l]
    vec = mp.matrix([dsigma[i, j] for i in range(dim) for j in range(dim)])
    return (vec.T * mp.lu_solve(m, vec))[0] / 2


def qfi_pipeline(source: SourceSpec, T: float, cavity: CavityParams, detuning_tau: float = 0.0,
                 n_a0: float = 0.0, frame: str = "auto", precision: str = "extended",
                 dps: int | None = None) -> float:
    """QFI of ``N_A`` for the assembled output state (any source, any detuning).

    ``precision="extended"`` (default) builds the lab-frame moments and solves
    the moment formula with ``dps`` significant digits (by default
    :func:`working_dps`, which grows with the gain and shrinks with the loss),
    so it stays reliable at any squeezing gain.  ``precision="double"`` uses numpy in the frame chosen
    by ``frame``; it is fast but loses accuracy for strongly squeezed,
    nearly pure two-mode outputs.
    """
    if precision == "double":
        cov, dcov = output_moments(source, T, cavity, detuning_tau, n_a0, frame)
        return qfi_from_moments(cov, np.zeros(cov.shape[0]), dcov)
    if precision != "extended":
        raise ConfigurationError(f"unknown precision {precision!r}")
    t = float(_check_time(T))
    slope = float(signal_slope(t, cavity, detuning_tau))
    if dps is None:
        dps = working_dps(source, t, cavity)
    with mp.workdps(dps):
        return float(_mp_qfi(source, mp.mpf(t), cavity, mp.mpf(slope), mp.mpf(n_a0)))
