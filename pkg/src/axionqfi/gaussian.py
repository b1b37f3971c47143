"""Minimal Gaussian-state toolbox for one and two bosonic modes.

Conventions
-----------
Quadratures are ``q = (a + a^dag)/sqrt(2)`` and ``p = (a - a^dag)/(i sqrt(2))``
and are ordered mode by mode, ``(q1, p1, q2, p2)``.  The covariance matrix is
``V_ij = <{dx_i, dx_j}>/2`` so that the vacuum has ``V = I/2`` and a thermal
state of mean photon number ``N`` has ``V = (N + 1/2) I``.

Ladder-basis covariance matrices of the form ``diag(N + 1, N)`` (i.e.
``<a a^dag>`` and ``<a^dag a>`` on the diagonal) are converted with
:func:`from_ladder_thermal`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from .errors import (
    ConfigurationError,
    DomainError,
    MeasurementModelError,
    NumericalInstabilityError,
    StateError,
)

#: tolerance on the eigenvalues of ``V + i Omega / 2`` for physicality checks
PHYSICALITY_TOL = 1e-10
#: symplectic eigenvalues are clamped to at least ``1/2 + PURITY_CLAMP``
PURITY_CLAMP = 1e-12
#: maximum relative change allowed between the two Richardson levels
RICHARDSON_RTOL = 1e-6


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form ``Omega`` for ``(q1,p1,q2,p2,...)``."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j)


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of a one- or two-mode Gaussian state.

    Parameters
    ----------
    mean : array_like, shape (2n,)
        Quadrature means ``(q1, p1, ...)``.
    cov : array_like, shape (2n, 2n)
        Symmetric covariance matrix, vacuum ``= I/2``.

    Notes
    -----
    Construction only checks shapes and symmetry.  Physicality (the uncertainty
    relation ``V + i Omega/2 >= 0``) is checked by :meth:`check_physical`, since
    finite-difference stencils legitimately evaluate moments slightly outside
    the physical set.
    """

    mean: np.ndarray
    cov: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ConfigurationError(f"covariance must be 2n x 2n, got {cov.shape}")
        n = cov.shape[0] // 2
        if n not in (1, 2):
            raise ConfigurationError("only one- and two-mode states are supported")
        if mean.shape != (2 * n,):
            raise ConfigurationError(f"mean must have length {2 * n}, got {mean.shape}")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise StateError("moments must be finite")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise StateError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "n_modes", n)

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        """True if ``V + i Omega/2`` is positive semidefinite up to ``tol``."""
        omega = symplectic_form(self.n_modes)
        ev = np.linalg.eigvalsh(self.cov + 0.5j * omega)
        return bool(ev.min() >= -tol)

    def check_physical(self, tol: float = PHYSICALITY_TOL) -> "GaussianState":
        if not self.is_physical(tol):
            raise StateError("covariance violates the uncertainty principle")
        return self

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.cov)

    def reduced(self, mode: int) -> "GaussianState":
        """Reduced state of a single mode."""
        if not 0 <= mode < self.n_modes:
            raise ConfigurationError(f"mode index {mode} out of range")
        sl = slice(2 * mode, 2 * mode + 2)
        return GaussianState(self.mean[sl], self.cov[sl, sl])

    def mean_photon_number(self, mode: int = 0) -> float:
        r = self.reduced(mode)
        return float(0.5 * (np.trace(r.cov) - 1.0) + 0.5 * np.dot(r.mean, r.mean))


def vacuum(n_modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def thermal(n_mean: float, n_modes: int = 1) -> GaussianState:
    """Thermal state(s) with mean photon number ``n_mean`` in every mode."""
    if n_mean < 0:
        raise DomainError("thermal photon number must be >= 0")
    return GaussianState(np.zeros(2 * n_modes), (n_mean + 0.5) * np.eye(2 * n_modes))


def coherent(q: float, p: float) -> GaussianState:
    return GaussianState(np.array([q, p]), 0.5 * np.eye(2))


def from_ladder_thermal(v_ladder) -> np.ndarray:
    """Convert a ladder-basis thermal covariance ``diag(N+1, N)`` to ``(N+1/2) I``.

    The ladder form lists ``<a a^dag>`` and ``<a^dag a>``; the quadrature
    variance is their average.
    """
    v = np.asarray(v_ladder, dtype=float)
    if v.shape != (2, 2) or abs(v[0, 1]) > 0 or abs(v[1, 0]) > 0:
        raise ConfigurationError("expected a diagonal 2x2 ladder covariance")
    if not np.isclose(v[0, 0] - v[1, 1], 1.0):
        raise ConfigurationError("ladder covariance must satisfy <aa^dag> - <a^dag a> = 1")
    return 0.5 * (v[0, 0] + v[1, 1]) * np.eye(2)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues (vacuum = 1/2), sorted ascending, one per mode."""
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ cov))
    ev = np.sort(ev)
    return 0.5 * (ev[0::2] + ev[1::2])


def williamson(cov: np.ndarray):
    """Williamson decomposition ``cov = S diag(nu_1, nu_1, nu_2, nu_2, ...) S^T``.

    Returns
    -------
    nu : ndarray, shape (n,)
    s : ndarray, shape (2n, 2n), symplectic
    """
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    omega = symplectic_form(n)
    evals, evecs = np.linalg.eigh(cov)
    if evals.min() <= 0:
        raise StateError("covariance is not positive definite")
    sqrt_v = (evecs * np.sqrt(evals)) @ evecs.T
    inv_sqrt_v = (evecs / np.sqrt(evals)) @ evecs.T
    m = inv_sqrt_v @ omega @ inv_sqrt_v
    t, o = linalg.schur(m, output="real")
    nu = np.empty(n)
    for k in range(n):
        blk = t[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]
        tk = 0.5 * (blk[0, 1] - blk[1, 0])
        if tk < 0:
            o[:, [2 * k, 2 * k + 1]] = o[:, [2 * k + 1, 2 * k]]
            tk = -tk
        nu[k] = 1.0 / tk
    d_inv_sqrt = np.repeat(1.0 / np.sqrt(nu), 2)
    s = sqrt_v @ o * d_inv_sqrt
    return nu, s


def _clamped_cov(cov: np.ndarray) -> np.ndarray:
    """Raise symplectic eigenvalues below ``1/2 + PURITY_CLAMP`` to that floor."""
    nu = symplectic_eigenvalues(cov)
    floor = 0.5 + PURITY_CLAMP
    if nu.min() >= floor * (1 + 1e-9):
        return cov
    nu_w, s = williamson(cov)
    shift = np.repeat(np.maximum(floor - nu_w, 0.0), 2)
    return cov + (s * shift) @ s.T


# --------------------------------------------------------------------------
# symplectic operations and channels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticOp:
    """A named symplectic matrix acting on one or two modes.

    Use the constructors :meth:`squeezer`, :meth:`two_mode_squeezer`,
    :meth:`beamsplitter` and :meth:`rotation`.
    """

    kind: str
    matrix: np.ndarray
    param: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    @classmethod
    def squeezer(cls, gain: float) -> "SymplecticOp":
        """Single-mode squeezer ``S(G)``: q-variance times ``G``, p-variance over ``G``."""
        if not gain > 0:
            raise DomainError("squeezing gain must be positive")
        r = np.sqrt(gain)
        return cls("squeezer", np.diag([r, 1.0 / r]), float(gain))

    @classmethod
    def two_mode_squeezer(cls, gain: float) -> "SymplecticOp":
        """Two-mode squeezer ``S2(G)`` with ``cosh(2r) = G``.

        Applied to two vacua it yields local quadrature variances ``G/2``: each
        arm's quadrature variance is scaled by ``G``, the two-mode analogue of
        the single-mode gain.  ``G < 1`` is not allowed; the inverse operation
        is :meth:`inverse`.
        """
        if gain < 1:
            raise DomainError("two-mode squeezing gain must be >= 1")
        ch = np.sqrt((gain + 1.0) / 2.0)  # cosh r
        sh = np.sqrt((gain - 1.0) / 2.0)  # sinh r
        z = np.diag([1.0, -1.0])
        m = np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
        return cls("two_mode_squeezer", m, float(gain))

    @classmethod
    def beamsplitter(cls) -> "SymplecticOp":
        """Balanced beamsplitter: ``a1 -> (a1 + a2)/sqrt2``, ``a2 -> (a2 - a1)/sqrt2``."""
        h = np.sqrt(0.5)
        m = np.block([[h * np.eye(2), h * np.eye(2)], [-h * np.eye(2), h * np.eye(2)]])
        return cls("beamsplitter", m, 0.5)

    @classmethod
    def rotation(cls, theta: float) -> "SymplecticOp":
        """Phase rotation ``a -> a e^{-i theta}``."""
        c, s = np.cos(theta), np.sin(theta)
        return cls("rotation", np.array([[c, s], [-s, c]]), float(theta))

    def inverse(self) -> "SymplecticOp":
        omega = symplectic_form(self.n_modes)
        inv = -omega @ self.matrix.T @ omega
        return SymplecticOp(self.kind + "_inverse", inv, self.param)

    def is_symplectic(self, tol: float = 1e-12) -> bool:
        omega = symplectic_form(self.n_modes)
        m = self.matrix
        return bool(np.max(np.abs(m.T @ omega @ m - omega)) <= tol * max(1.0, np.max(np.abs(m)) ** 2))


@dataclass(frozen=True)
class ThermalLossChannel:
    """Thermal-loss channel with extra classical additive noise.

    ``V -> eta V + (1 - eta)(n_env + 1/2) I + n_add I`` and ``mean -> sqrt(eta) mean``.
    """

    eta: float
    n_env: float = 0.0
    n_add: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0):
            raise DomainError(f"transmissivity must lie in [0, 1], got {self.eta}")
        if self.n_env < 0:
            raise DomainError("environment photon number must be >= 0")


def _embed(op_matrix, n_total, modes):
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    full = np.eye(2 * n_total)
    full[np.ix_(idx, idx)] = op_matrix
    return full


def apply_symplectic(state: GaussianState, op: SymplecticOp, modes: Sequence[int] | None = None) -> GaussianState:
    """Apply ``op`` to the listed modes: ``mean -> S mean``, ``cov -> S cov S^T``."""
    if modes is None:
        modes = list(range(op.n_modes))
    modes = list(modes)
    if len(modes) != op.n_modes or len(set(modes)) != len(modes):
        raise ConfigurationError(f"operation acts on {op.n_modes} mode(s), got modes {modes}")
    if any(m < 0 or m >= state.n_modes for m in modes):
        raise ConfigurationError(f"modes {modes} out of range for a {state.n_modes}-mode state")
    s = _embed(op.matrix, state.n_modes, modes)
    cov = s @ state.cov @ s.T
    return GaussianState(s @ state.mean, 0.5 * (cov + cov.T))


def apply_loss(state: GaussianState, ch: ThermalLossChannel, mode: int = 0) -> GaussianState:
    """Send ``mode`` through the thermal-loss channel ``ch``.

    ``eta = 0`` (full replacement by the environment) is accepted.
    """
    if not 0 <= mode < state.n_modes:
        raise ConfigurationError(f"mode index {mode} out of range")
    eta = ch.eta
    scale = np.ones(2 * state.n_modes)
    scale[2 * mode : 2 * mode + 2] = np.sqrt(eta)
    cov = state.cov * np.outer(scale, scale)
    sl = slice(2 * mode, 2 * mode + 2)
    cov[sl, sl] += ((1.0 - eta) * (ch.n_env + 0.5) + ch.n_add) * np.eye(2)
    return GaussianState(state.mean * scale, cov)


# --------------------------------------------------------------------------
# Fisher information
# --------------------------------------------------------------------------


def richardson_derivative(f: Callable[[float], np.ndarray], x0: float, h: float,
                          rtol: float = RICHARDSON_RTOL, one_sided: bool = False) -> np.ndarray:
    """Derivative of an array-valued ``f`` at ``x0`` with one Richardson check.

    Central differences (or second-order forward differences when
    ``one_sided``) at steps ``h``, ``h/2`` and ``h/4`` are combined into two
    Richardson estimates; if they disagree by more than ``rtol`` (relative to
    the largest entry) :class:`NumericalInstabilityError` is raised.
    """
    if not h > 0:
        raise DomainError("finite-difference step must be positive")
    f0 = np.asarray(f(x0), dtype=float) if one_sided else None

    def diff(step):
        if one_sided:
            return (-3.0 * f0 + 4.0 * np.asarray(f(x0 + step)) - np.asarray(f(x0 + 2 * step))) / (2 * step)
        return (np.asarray(f(x0 + step), dtype=float) - np.asarray(f(x0 - step), dtype=float)) / (2 * step)

    d1, d2, d4 = diff(h), diff(h / 2), diff(h / 4)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d4 - d2) / 3.0
    scale = np.max(np.abs(r2))
    err = np.max(np.abs(r1 - r2))
    if err > rtol * scale and err > 1e-300:
        raise NumericalInstabilityError(
            f"derivative did not converge: Richardson levels differ by {err / max(scale, 1e-300):.3g} (relative)"
        )
    return r2


def qfi_from_moments(cov: np.ndarray, dmean: np.ndarray, dcov: np.ndarray) -> float:
    """Exact single-parameter Gaussian QFI from moments and their derivatives.

    ``F = 1/2 vec(dS)^T (S (x) S - Om (x) Om)^{-1} vec(dS) + dmu^T V^{-1} dmu``
    with ``S = 2V``.  Symplectic eigenvalues at the pure-state boundary are
    clamped to ``1/2 + PURITY_CLAMP`` first.
    """
    cov = _clamped_cov(np.asarray(cov, dtype=float))
    n = cov.shape[0] // 2
    omega = symplectic_form(n)
    sigma = 2.0 * cov
    dsigma = 2.0 * np.asarray(dcov, dtype=float)
    dmean = np.asarray(dmean, dtype=float)
    m = np.kron(sigma, sigma) - np.kron(omega, omega)
    vec = dsigma.reshape(-1)
    try:
        cov_term = 0.5 * vec @ np.linalg.solve(m, vec)
        mean_term = dmean @ np.linalg.solve(cov, dmean)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - clamp prevents this
        raise StateError("singular covariance in QFI evaluation") from exc
    return float(cov_term + mean_term)


def qfi_gaussian(family: Callable[[float], GaussianState], theta0: float, dtheta: float | None = None) -> float:
    """Quantum Fisher information of a one-parameter Gaussian family at ``theta0``.

    Derivatives of the moments are taken by Richardson-refined central
    differences with step ``dtheta`` (default ``1e-5 max(|theta0|, 1)``).
    """
    if dtheta is None:
        dtheta = 1e-5 * max(abs(theta0), 1.0)
    st = family(theta0)
    st.check_physical()
    n = st.n_modes

    def moments(th):
        s = family(th)
        if s.n_modes != n:
            raise ConfigurationError("family changed its number of modes")
        return np.concatenate([s.mean, s.cov.reshape(-1)])

    d = richardson_derivative(moments, theta0, dtheta)
    dmean, dcov = d[: 2 * n], d[2 * n :].reshape(2 * n, 2 * n)
    return qfi_from_moments(st.cov, dmean, 0.5 * (dcov + dcov.T))


def gaussian_readout_fisher(cov: np.ndarray, dmean: np.ndarray, dcov: np.ndarray) -> float:
    """Fisher information of a Gaussian readout: ``mu'^T S^-1 mu' + Tr[(S^-1 S')^2]/2``."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    dcov = np.atleast_2d(np.asarray(dcov, dtype=float))
    dmean = np.atleast_1d(np.asarray(dmean, dtype=float))
    if np.linalg.cond(cov) > 1e14 or np.linalg.det(cov) <= 0:
        raise MeasurementModelError("readout covariance is singular")
    a = np.linalg.solve(cov, dcov)
    return float(dmean @ np.linalg.solve(cov, dmean) + 0.5 * np.trace(a @ a))


def cfi_gaussian_readout(family: Callable[[float], tuple], theta0: float, dtheta: float | None = None) -> float:
    """Classical Fisher information of a Gaussian readout distribution.

    ``family(theta)`` returns ``(mean, cov)`` of the (1- or 2-variable) readout.
    """
    if dtheta is None:
        dtheta = 1e-5 * max(abs(theta0), 1.0)
    mean0, cov0 = family(theta0)
    mean0 = np.atleast_1d(np.asarray(mean0, dtype=float))
    k = mean0.size

    def moments(th):
        mu, c = family(th)
        return np.concatenate([np.atleast_1d(mu).astype(float), np.atleast_2d(c).astype(float).reshape(-1)])

    d = richardson_derivative(moments, theta0, dtheta)
    return gaussian_readout_fisher(cov0, d[:k], d[k:].reshape(k, k))
