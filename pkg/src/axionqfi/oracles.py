"""Independent reference computations used to cross-check the production code.

* :func:`g_quadrature` -- the axion gain from the defining double integral
  over the two-time correlation of the randomly phase-jumping drive.
* Truncated Fock-space constructions of displaced squeezed thermal states and
  of the random-phase displacement model (squeeze -> displace -> noisy loss
  -> anti-squeeze), read out on the diagonal.

None of these routines share code with the closed forms or the photon
statistics module; they are slow and meant for tests and ``selfcheck``.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import dblquad
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import DomainError


def g_quadrature(T: float, gamma_tau: float, detuning_tau: float = 0.0, rtol: float = 1e-11) -> float:
    """``g`` from the double integral of ``Gamma eta/(1-eta) e^{Gamma(t+t')/2} E[a*(t) a(t')]`` (``tau_A = 1``).

    The integrand is symmetric, so the triangle ``t < t'`` is integrated and
    doubled; the real part of ``e^{i w (t'-t)}`` is ``cos(w (t'-t))``.
    The factor ``eta e^{Gamma(t+t')/2}`` is combined into one decaying exponent.
    """
    if not T > 0:
        raise DomainError("T must be > 0")
    gam, w = float(gamma_tau), float(detuning_tau)

    def f(tp, t):  # inner variable first (dblquad convention): t' in [0, t]
        u = t - tp
        return np.exp(gam * (t + tp) / 2.0 - gam * T - u) * np.cos(w * u)

    val, _ = dblquad(f, 0.0, T, 0.0, lambda t: t, epsabs=0.0, epsrel=rtol)
    pref = gam / (-np.expm1(-gam * T)) if gam > 0 else 1.0 / T
    return float(2.0 * pref * val)


# -- truncated Fock space ----------------------------------------------------------------------


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def thermal_dm(n_mean: float, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if n_mean == 0:
        p = (n == 0).astype(float)
    else:
        p = (n_mean / (n_mean + 1.0)) ** n / (n_mean + 1.0)
    return np.diag(p / p.sum()).astype(complex)


def squeeze_unitary(xi: complex, dim: int) -> np.ndarray:
    """``exp((xi* a^2 - xi a^dag^2)/2)``; real ``xi > 0`` squeezes ``q``."""
    a = annihilation(dim)
    ad = a.conj().T
    return expm(0.5 * (np.conj(xi) * a @ a - xi * ad @ ad))


def displace_unitary(beta: complex, dim: int) -> np.ndarray:
    """``exp(beta a^dag - beta* a)``; ``<q> = sqrt(2) Re beta``, ``<p> = sqrt(2) Im beta``."""
    a = annihilation(dim)
    return expm(beta * a.conj().T - np.conj(beta) * a)


def _conj(u, rho):
    return u @ rho @ u.conj().T


def pure_loss(rho: np.ndarray, eta: float) -> np.ndarray:
    """Pure-loss channel of transmissivity ``eta`` via its Kraus operators."""
    if not 0 < eta <= 1:
        raise DomainError("eta must lie in (0, 1]")
    if eta == 1:
        return rho.copy()
    dim = rho.shape[0]
    n = np.arange(dim)
    out = np.zeros_like(rho)
    for l in range(dim):
        k = np.zeros((dim, dim))
        m = n[l:]
        logc = gammaln(m + 1) - gammaln(l + 1) - gammaln(m - l + 1)
        k[m - l, m] = np.exp(0.5 * logc + 0.5 * (m - l) * np.log(eta) + 0.5 * l * np.log1p(-eta))
        out += k @ rho @ k.T
    return out


def amplifier(rho: np.ndarray, gain: float) -> np.ndarray:
    """Quantum-limited phase-insensitive amplifier of gain ``gain >= 1`` (Kraus form, truncated)."""
    if gain < 1:
        raise DomainError("gain must be >= 1")
    dim = rho.shape[0]
    if gain == 1:
        return rho.copy()
    out = np.zeros_like(rho)
    n = np.arange(dim)
    for l in range(dim):
        m = n[: dim - l]
        logc = gammaln(m + l + 1) - gammaln(l + 1) - gammaln(m + 1)
        w = np.exp(0.5 * logc - 0.5 * (m + 1) * np.log(gain) + 0.5 * l * np.log1p(-1.0 / gain))
        k = np.zeros((dim, dim))
        k[m + l, m] = w
        out += k @ rho @ k.T
    return out


def fock_moments(rho: np.ndarray):
    """Quadrature covariance (vacuum = I/2) and mean of a truncated density matrix."""
    a = annihilation(rho.shape[0])
    q = (a + a.conj().T) / np.sqrt(2.0)
    p = (a - a.conj().T) / (1j * np.sqrt(2.0))
    ops = [q, p]
    mean = np.array([np.trace(rho @ o).real for o in ops])
    cov = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            sym = 0.5 * (ops[i] @ ops[j] + ops[j] @ ops[i])
            cov[i, j] = np.trace(rho @ sym).real - mean[i] * mean[j]
    return cov, mean


def displaced_squeezed_thermal(n_th: float, xi: complex, beta: complex, dim: int = 200) -> np.ndarray:
    """Density matrix of ``D(beta) S(xi) rho_th S(xi)^dag D(beta)^dag``."""
    rho = thermal_dm(n_th, dim)
    rho = _conj(squeeze_unitary(xi, dim), rho)
    return _conj(displace_unitary(beta, dim), rho)


def phase_model_fock_pn(kappa: float, n_b: float, gain: float, alpha: float, phi: float,
                        receiver_gain: float | None = None, dim: int = 160) -> np.ndarray:
    """Counting distribution of the random-phase displacement model, conditioned on ``phi``.

    Probe: vacuum anti-squeezed along ``q`` by ``gain``; displacement
    ``alpha e^{i phi}``; channel ``V -> kappa V + (1-kappa)/2 + n_b`` realized
    as pure loss ``kappa/g`` followed by an amplifier ``g = 1 + n_b``; then the
    receiver undoes an anti-squeezing of ``receiver_gain`` (default ``gain``).
    """
    g2 = gain if receiver_gain is None else receiver_gain
    g_amp = 1.0 + n_b
    if kappa / g_amp > 1:
        raise DomainError("kappa/(1 + n_b) must be <= 1")
    rho = thermal_dm(0.0, dim)
    rho = _conj(squeeze_unitary(-0.5 * np.log(gain), dim), rho)
    rho = _conj(displace_unitary(alpha * np.exp(1j * phi), dim), rho)
    rho = pure_loss(rho, kappa / g_amp)
    rho = amplifier(rho, g_amp)
    rho = _conj(squeeze_unitary(0.5 * np.log(g2), dim), rho)
    return np.clip(np.diag(rho).real, 0.0, None)
