"""Transient cavity channel and axion signal accumulation.

All times are in units of the axion coherence time (``tau_A = 1``), so the
public inputs are the dimensionless groups ``Gamma*tau_A``, ``omega_A*tau_A``
and ``T/tau_A``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .gaussian import GaussianState, SymplecticOp, ThermalLossChannel, apply_loss, apply_symplectic, thermal


@dataclass(frozen=True)
class CavityParams:
    """Dimensionless cavity configuration.

    Attributes
    ----------
    gamma_tau : float
        Signal-cavity energy decay rate times ``tau_A`` (> 0).
    gamma_idler_tau : float
        Idler storage decay rate times ``tau_A`` (>= 0); only used by TMSS.
    n_t : float
        Thermal occupation of the initial modes and of the environments.
    coupling_prefactor : float
        ``gamma_A * tau_A``; every Fisher information scales with its square.
        The default 1 reports values in units of ``(gamma_A tau_A)^2``.

    The weak-coupling assumption ``gamma_A << Gamma`` is not enforced.
    """

    gamma_tau: float
    gamma_idler_tau: float = 0.0
    n_t: float = 0.0
    coupling_prefactor: float = 1.0

    def __post_init__(self):
        for name in ("gamma_tau", "gamma_idler_tau", "n_t", "coupling_prefactor"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if not self.gamma_tau > 0:
            raise DomainError("gamma_tau must be > 0")
        if self.gamma_idler_tau < 0:
            raise DomainError("gamma_idler_tau must be >= 0")
        if self.n_t < 0:
            raise DomainError("n_t must be >= 0")
        if not self.coupling_prefactor > 0:
            raise DomainError("coupling_prefactor must be > 0")


@dataclass(frozen=True)
class AxionParams:
    """Axion detuning ``omega_A tau_A`` and mean per-mode occupation ``N_A``."""

    detuning_tau: float = 0.0
    n_a: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.detuning_tau) or not np.isfinite(self.n_a):
            raise DomainError("axion parameters must be finite")


class SourceKind(str, Enum):
    VACUUM = "vacuum"
    SMSS = "smss"
    TMSS = "tmss"


@dataclass(frozen=True)
class SourceSpec:
    """Probe source: vacuum, single-mode (SMSS) or two-mode (TMSS) squeezed, gain ``G >= 1``."""

    kind: SourceKind
    gain: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SourceKind(self.kind))
        if not np.isfinite(self.gain) or self.gain < 1:
            raise DomainError("squeezing gain must be a finite number >= 1")

    @classmethod
    def vacuum(cls):
        return cls(SourceKind.VACUUM, 1.0)

    @classmethod
    def smss(cls, gain):
        return cls(SourceKind.SMSS, gain)

    @classmethod
    def tmss(cls, gain):
        return cls(SourceKind.TMSS, gain)

    @property
    def n_modes(self) -> int:
        return 2 if self.kind is SourceKind.TMSS else 1


def transmissivity(t_norm):
    """Cavity transmissivity ``eta = exp(-Gamma T)`` as a function of ``Gamma T``."""
    t = np.asarray(t_norm, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    out = np.exp(-t)
    return float(out) if out.ndim == 0 else out


# -- stable evaluation of the axion gain -----------------------------------------

_N_SERIES = 20
_SERIES_RADIUS = 0.5


def _phi(z):
    """(e^z - 1)/z, accurate near 0 (complex input)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < _SERIES_RADIUS
    if np.any(small):
        zs = z[small]
        acc = np.ones_like(zs) / _factorial(_N_SERIES)
        for k in range(_N_SERIES - 1, 0, -1):
            acc = acc * zs + 1.0 / _factorial(k)
        out[small] = acc
    big = ~small
    if np.any(big):
        out[big] = np.expm1(z[big]) / z[big]
    return out


def _psi(z):
    """(e^z - 1 - z)/z^2 for |z| < 0.5 (series)."""
    z = np.asarray(z, dtype=complex)
    acc = np.ones_like(z) / _factorial(_N_SERIES + 1)
    for k in range(_N_SERIES, 1, -1):
        acc = acc * z + 1.0 / _factorial(k)
    return acc


def _factorial(k):
    return float(np.prod(np.arange(1, k + 1, dtype=float))) if k > 1 else 1.0


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)) or np.any(~np.isfinite(t)):
        raise DomainError("accumulation time T must be finite and > 0")
    return t


def _gain(t, gamma, omega):
    """Vectorized axion gain ``g(T)`` for ``tau_A = 1`` (no argument checks)."""
    t = np.asarray(t, dtype=float)
    a = gamma / 2.0 - 1.0 - 1j * omega
    b = gamma / 2.0 + 1.0 + 1j * omega
    gt = gamma * t
    at = a * t
    one_minus_x = np.empty(t.shape, dtype=complex)
    small = (np.abs(gt) < _SERIES_RADIUS) & (np.abs(at) < _SERIES_RADIUS)
    if np.any(small):
        gs, as_ = gt[small], at[small]
        one_minus_x[small] = (gs * _psi(gs) - as_ * _psi(as_)) / _phi(gs)
    big = ~small
    if np.any(big):
        tb = t[big]
        if a.real <= 0:
            e = np.exp(-gamma * tb) * tb * _phi(a * tb)
        else:
            e = np.exp(-b * tb) * tb * _phi(-a * tb)
        one_minus_x[big] = 1.0 - gamma * e / (-np.expm1(-gamma * tb))
    return 2.0 * np.real(one_minus_x / b)


def axion_gain_g(T, cavity: CavityParams, detuning_tau: float = 0.0):
    """Dimensionless axion gain ``g(T, Gamma, omega_A, tau_A)``.

    ``<a_A^dag a_A> = N_A g``.  Evaluated in a form free of the removable
    singularities of the textbook expression (``Gamma tau_A = 2`` on
    resonance, ``T -> 0``): with ``a = Gamma/2 - 1 - i w`` and
    ``b = Gamma/2 + 1 + i w``,

    ``g = 2 Re[(1 - phi(aT)/phi(Gamma T)) / b]``,  ``phi(z) = (e^z - 1)/z``,

    with series expansions for small arguments and exponentials kept in
    decaying form for large ``Gamma T``.
    """
    t = _check_time(T)
    out = _gain(t, cavity.gamma_tau, float(detuning_tau))
    return float(out) if out.ndim == 0 else out


def signal_slope(T, cavity: CavityParams, detuning_tau: float = 0.0):
    """``d n_A^eff / d N_A = gamma_A tau_A (1 - eta) g / (Gamma tau_A)``.

    ``n_A^eff`` is affine (in fact linear) in ``N_A``, so this derivative is
    independent of ``N_A``.
    """
    t = _check_time(T)
    gam = cavity.gamma_tau
    out = cavity.coupling_prefactor * (-np.expm1(-gam * t)) / gam * _gain(t, gam, float(detuning_tau))
    return float(out) if out.ndim == 0 else out


def n_a_eff(T, cavity: CavityParams, axion: AxionParams):
    """Effective axion photon number mixed into the cavity mode at time ``T``."""
    if axion.n_a < 0:
        raise DomainError("N_A must be >= 0")
    out = np.asarray(signal_slope(T, cavity, axion.detuning_tau)) * axion.n_a
    return float(out) if out.ndim == 0 else out


def n_a_eff_lowloss(T, cavity: CavityParams, n_a: float):
    """Good-cavity limit ``Gamma -> 0``: ``2 gamma_A N_A (e^{-T} - 1 + T)`` (tau_A = 1)."""
    t = _check_time(T)
    out = 2.0 * cavity.coupling_prefactor * n_a * (np.expm1(-t) + t)
    return float(out) if out.ndim == 0 else out


def input_state(source: SourceSpec, n_t: float) -> GaussianState:
    """Squeezed probe generated from thermal background states."""
    if source.kind is SourceKind.VACUUM:
        return thermal(n_t, 1)
    if source.kind is SourceKind.SMSS:
        return apply_symplectic(thermal(n_t, 1), SymplecticOp.squeezer(source.gain), [0])
    return apply_symplectic(thermal(n_t, 2), SymplecticOp.two_mode_squeezer(source.gain), [0, 1])


def output_state(source: SourceSpec, T: float, cavity: CavityParams, axion: AxionParams) -> GaussianState:
    """Pre-measurement state after accumulating for time ``T``.

    Signal: thermal-loss channel ``(eta(T), N_T)`` plus additive thermal noise
    ``n_A^eff``.  Idler (TMSS only): thermal loss ``(exp(-Gamma_idler T), N_T)``.
    """
    t = float(_check_time(T))
    st = input_state(source, cavity.n_t)
    eta = float(np.exp(-cavity.gamma_tau * t))
    # N_A < 0 is tolerated here so that finite-difference stencils around N_A = 0 work
    n_add = float(signal_slope(t, cavity, axion.detuning_tau)) * axion.n_a
    st = apply_loss(st, ThermalLossChannel(eta, cavity.n_t, n_add), 0)
    if source.kind is SourceKind.TMSS:
        eta_i = float(np.exp(-cavity.gamma_idler_tau * t))
        st = apply_loss(st, ThermalLossChannel(eta_i, cavity.n_t, 0.0), 1)
    return st
