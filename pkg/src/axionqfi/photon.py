"""Photon-number statistics of Gaussian states.

Single-mode distributions use the Hermite-polynomial sum over the
characteristic-function parameters ``(A, B, C)`` of

    chi(l) = exp(-(A + 1/2)|l|^2 - [B* l^2 + B l*^2]/2 + C* l - C l*),

i.e. ``A = <da^dag da>``, ``B = -<da^2>``, ``C = <a>``.  Writing
``Delta = (A+1)^2 - |B|^2``::

    A~ = (A(A+1) - |B|^2)/Delta,  B~ = B/Delta,  C~ = ((A+1) C + B C*)/Delta
    p(n) = pi Q(0) sum_q binom(n, q) A~^(n-q) |w_q|^2

where ``w_q = (B~/2)^(q/2) H_q(C~/sqrt(2 B~)) / sqrt(q!)`` obeys the
branch-free recurrence ``w_{q+1} = (C~ w_q - B~ sqrt(q) w_{q-1})/sqrt(q+1)``.

Tail mass beyond the cutoff is bounded with a Chernoff bound on the
probability generating function (PGF)
``G(z) = det(I + V_P L)^(-1/2) exp(-mu^T L (I + V_P L)^(-1) mu / 2)``,
``V_P = V - I/2``, ``L = diag(1 - z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .errors import CutoffError, DomainError
from .gaussian import GaussianState

NEG_CLAMP = 1e-14
NORM_TOL = 1e-9
DEFAULT_TAIL_EPS = 1e-10
N_MAX_START = 32
N_MAX_CAP = 4096


@dataclass(frozen=True)
class PhotonDistribution:
    """Photon-count distribution ``p(0..n_max)`` and a bound on the missing tail mass.

    ``pmf`` is 1-D for a single counted mode and 2-D (signal, idler) for joint counting.
    """

    pmf: np.ndarray
    n_max: int
    tail_bound: float

    def __post_init__(self):
        p = np.asarray(self.pmf, dtype=float)
        if np.any(p < -NEG_CLAMP):
            raise DomainError(f"photon probabilities below -{NEG_CLAMP}: min {p.min():.3g}")
        object.__setattr__(self, "pmf", np.clip(p, 0.0, None))

    @property
    def total(self) -> float:
        return float(self.pmf.sum())

    def normalization_ok(self, tol: float = NORM_TOL) -> bool:
        s = self.total
        return (1.0 - tol <= s + self.tail_bound) and (s <= 1.0 + tol)

    def mean(self) -> float:
        if self.pmf.ndim != 1:
            raise DomainError("mean() is defined for single-mode distributions")
        return float(np.arange(self.pmf.size) @ self.pmf)


# -- moments -> characteristic-function parameters --------------------------------------


def abc_from_moments(cov, mean):
    """``(A, B, C)`` of a single mode from its quadrature covariance ``V`` and mean ``(q, p)``."""
    cov = np.asarray(cov, dtype=float)
    mean = np.asarray(mean, dtype=float)
    A = 0.5 * (cov[0, 0] + cov[1, 1] - 1.0)
    B = -0.5 * (cov[0, 0] - cov[1, 1] + 2j * cov[0, 1])
    C = (mean[0] + 1j * mean[1]) / np.sqrt(2.0)
    return float(A), complex(B), complex(C)


def _binomial_transform(y, a_t, n_max):
    """``out[n] = sum_q binom(n,q) a_t^(n-q) y[q]`` for ``n <= n_max`` (log-space weights)."""
    y = np.asarray(y, dtype=float)
    out = np.zeros(n_max + 1)
    if a_t <= 0.0:
        out[:] = y[: n_max + 1]
        return out
    la = np.log(a_t)
    q = np.arange(n_max + 1)
    lgq = gammaln(q + 1.0)
    block = 256
    for start in range(0, n_max + 1, block):
        n = np.arange(start, min(start + block, n_max + 1))[:, None]
        k = n - q[None, :]
        valid = k >= 0
        kk = np.where(valid, k, 0)
        lw = gammaln(n + 1.0) - lgq[None, :] - gammaln(kk + 1.0) + kk * la
        w = np.where(valid, np.exp(np.where(valid, lw, -np.inf)), 0.0)
        out[start : start + n.shape[0]] = w @ y
    return out


def _hermite_weights(c_t, b_t, n_max):
    """``|w_q|^2`` for ``q <= n_max`` from the scaled Hermite recurrence."""
    w = np.zeros(n_max + 1, dtype=complex)
    w[0] = 1.0
    if n_max >= 1:
        w[1] = c_t
    for q in range(1, n_max):
        w[q + 1] = (c_t * w[q] - b_t * np.sqrt(q) * w[q - 1]) / np.sqrt(q + 1.0)
    return np.abs(w) ** 2


def _marian_raw(A, B, C, n_max):
    A = float(A)
    B = complex(B)
    C = complex(C)
    delta = (A + 1.0) ** 2 - abs(B) ** 2
    if not np.isfinite(A) or A < -1e-12 or delta <= 0 or A * (A + 1.0) - abs(B) ** 2 < -1e-9 * (1 + A * A):
        raise DomainError("(A, B) do not describe a physical Gaussian state")
    a_t = max((A * (A + 1.0) - abs(B) ** 2) / delta, 0.0)
    b_t = B / delta
    c_t = ((A + 1.0) * C + B * np.conj(C)) / delta
    expo = (2.0 * (A + 1.0) * abs(C) ** 2 + (C * C * np.conj(B) + B * np.conj(C) ** 2).real) / (2.0 * delta)
    p0 = np.exp(-expo) / np.sqrt(delta)  # pi Q(0)
    y = _hermite_weights(c_t, b_t, n_max)
    return p0 * _binomial_transform(y, a_t, n_max)


def _moments_from_abc(A, B, C):
    cov = np.array([[A + 0.5 - B.real, -B.imag], [-B.imag, A + 0.5 + B.real]])
    mean = np.sqrt(2.0) * np.array([C.real, C.imag])
    return cov, mean


# -- PGF and tail bounds ---------------------------------------------------------------


def pgf(cov, mean, z):
    """Photon-number PGF ``E[prod_j z_j^{n_j}]`` of a Gaussian state (``z`` one entry per mode)."""
    cov = np.asarray(cov, dtype=float)
    mean = np.asarray(mean, dtype=float)
    z = np.atleast_1d(np.asarray(z))
    lam = np.diag(np.repeat(1.0 - z, 2))
    m = np.eye(cov.shape[0]) + (cov - 0.5 * np.eye(cov.shape[0])) @ lam
    det = np.linalg.det(m)
    arg = mean @ lam @ np.linalg.solve(m, mean)
    return np.exp(-0.5 * arg) / np.sqrt(det)


def chernoff_tail(cov, mean, n_max) -> float:
    """Upper bound on ``P(sum_j n_j > n_max)`` via ``min_z G(z,..,z)/z^(n_max+1)``, ``z > 1``."""
    cov = np.asarray(cov, dtype=float)
    k = cov.shape[0]
    vp = cov - 0.5 * np.eye(k)
    lmax = float(np.max(np.linalg.eigvalsh(0.5 * (vp + vp.T))))
    if lmax <= 1e-300:
        # coherent state: Poisson tail, use its own Chernoff form
        lmax = 1e-300
    z_hi = 1.0 + 1.0 / lmax
    z_hi = min(z_hi, 1e6)

    def log_bound(u):
        z = 1.0 + (z_hi - 1.0) * u
        lam = (1.0 - z) * np.eye(k)
        m = np.eye(k) + vp @ lam
        sign, logdet = np.linalg.slogdet(m)
        if sign <= 0:
            return np.inf
        arg = mean @ lam @ np.linalg.solve(m, mean)
        return -0.5 * arg - 0.5 * logdet - (n_max + 1) * np.log(z)

    grid = np.linspace(1e-6, 1.0 - 1e-9, 64)
    vals = np.array([log_bound(u) for u in grid])
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(log_bound, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    best = min(vals[i], res.fun if np.isfinite(res.fun) else np.inf)
    return float(min(1.0, np.exp(best)))


# -- public distributions ------------------------------------------------------------------


def marian_pn(A, B, C, n_max, eps=None) -> PhotonDistribution:
    """Photon-number distribution from characteristic-function parameters.

    ``eps``: when given, raise :class:`CutoffError` if the certified tail
    bound exceeds it (with a suggested larger cutoff).
    """
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    p = _marian_raw(A, B, C, n_max)
    cov, mean = _moments_from_abc(float(A), complex(B), complex(C))
    tail = chernoff_tail(cov, mean, n_max)
    tail = max(tail, 0.0) if tail < 1.0 else max(0.0, 1.0 - p.sum())
    tail = min(tail, 1.0)
    if eps is not None and tail > eps:
        suggested = _suggest_n_max(cov, mean, eps, n_max)
        raise CutoffError(f"tail bound {tail:.3g} exceeds {eps:.3g} at n_max={n_max}", suggested)
    return PhotonDistribution(p, n_max, tail)


def _suggest_n_max(cov, mean, eps, start):
    n = max(int(start), N_MAX_START)
    while n < 64 * N_MAX_CAP:
        n *= 2
        if chernoff_tail(cov, mean, n) <= eps:
            return n
    return n


def state_pn(state: GaussianState, mode: int = 0, n_max=None, eps=DEFAULT_TAIL_EPS) -> PhotonDistribution:
    """Counting distribution of one mode of a Gaussian state.

    With ``n_max=None`` the cutoff starts at 32 and doubles until the tail
    bound drops below ``eps`` (cap 4096).
    """
    red = state.reduced(mode) if state.n_modes > 1 else state
    A, B, C = abc_from_moments(red.cov, red.mean)
    if n_max is not None:
        return marian_pn(A, B, C, n_max, eps)
    n = N_MAX_START
    while True:
        tail = chernoff_tail(red.cov, red.mean, n)
        if tail <= eps or n >= N_MAX_CAP:
            break
        n *= 2
    if tail > eps:
        raise CutoffError(f"tail bound {tail:.3g} > {eps:.3g} at the cap n_max={N_MAX_CAP}",
                          _suggest_n_max(red.cov, red.mean, eps, n))
    return marian_pn(A, B, C, n)


def joint_pn_two_mode(state: GaussianState, n_max=None, eps=DEFAULT_TAIL_EPS) -> PhotonDistribution:
    """Joint photon counts of a two-mode Gaussian state, ``pmf[n1, n2]``.

    The PGF is sampled on the unit torus and inverted with a 2-D FFT; the
    square root of the determinant is continued along radial paths from
    ``z = 0`` so that no branch jump enters.  Aliasing is bounded by the
    tail mass beyond the FFT size.
    """
    if state.n_modes != 2:
        raise DomainError("joint counting needs a two-mode state")
    cov, mean = state.cov, state.mean
    if n_max is None:
        n_max = N_MAX_START
        while chernoff_tail(cov, mean, n_max) > eps and n_max < 512:
            n_max *= 2
    tail = chernoff_tail(cov, mean, n_max)
    if eps is not None and tail > eps:
        raise CutoffError(f"joint tail bound {tail:.3g} > {eps:.3g}", _suggest_n_max(cov, mean, eps, n_max))
    m = 1
    while m < 2 * (n_max + 1):
        m *= 2
    theta = 2.0 * np.pi * np.arange(m) / m
    z1, z2 = np.meshgrid(np.exp(1j * theta), np.exp(1j * theta), indexing="ij")
    vp = cov - 0.5 * np.eye(4)
    phase, logabs = _continued_log_det(vp, z1, z2)
    l1 = 1.0 - z1
    l2 = 1.0 - z2
    quad = _mean_form_grid(vp, mean, l1, l2)
    g = np.exp(-0.5 * quad - 0.5 * (logabs + 1j * phase))
    coeff = np.fft.fft2(g) / (m * m)
    p = np.real(coeff[: n_max + 1, : n_max + 1])
    return PhotonDistribution(np.where(np.abs(p) < NEG_CLAMP, np.abs(p), p), n_max, tail)


def _det_poly(vp):
    """Coefficients ``c[i, j]`` with ``det(I + V_P diag(l1, l1, l2, l2)) = sum c[i,j] l1^i l2^j``."""
    nodes = np.array([0.0, 1.0, -1.0])
    vals = np.empty((3, 3))
    for i, x in enumerate(nodes):
        for j, y in enumerate(nodes):
            vals[i, j] = np.linalg.det(np.eye(4) + vp @ np.diag([x, x, y, y]))
    van = np.vander(nodes, 3, increasing=True)
    inv = np.linalg.inv(van)
    return inv @ vals @ inv.T


def _continued_log_det(vp, z1, z2, n_steps=16):
    """``log det(I + V_P L(t z))`` continued from ``t = 0`` (where it is 0) to ``t = 1``.

    Steps are doubled until no increment of the argument exceeds ``pi/4``.
    """
    c = _det_poly(vp)

    def det(t):
        l1 = 1.0 - t * z1
        l2 = 1.0 - t * z2
        p1 = np.stack([np.ones_like(l1), l1, l1 * l1])
        p2 = np.stack([np.ones_like(l2), l2, l2 * l2])
        return np.einsum("ij,i...,j...->...", c, p1, p2)

    while True:
        phase = np.zeros(z1.shape)
        prev = np.zeros(z1.shape)
        worst = 0.0
        for t in np.linspace(0.0, 1.0, n_steps + 1)[1:]:
            d = det(t)
            ang = np.angle(d)
            step = np.angle(np.exp(1j * (ang - prev)))
            worst = max(worst, float(np.max(np.abs(step))))
            phase = phase + step
            prev = ang
        if worst < np.pi / 4 or n_steps >= 1024:
            return phase, np.log(np.abs(d))
        n_steps *= 2


def _lam_grid(l1, l2):
    lam = np.zeros(l1.shape + (4, 4), dtype=complex)
    lam[..., 0, 0] = l1
    lam[..., 1, 1] = l1
    lam[..., 2, 2] = l2
    lam[..., 3, 3] = l2
    return lam


def _mean_form_grid(vp, mean, l1, l2):
    if not np.any(mean):
        return np.zeros(l1.shape)
    lam = _lam_grid(l1, l2)
    m = np.eye(4) + vp @ lam
    sol = np.linalg.solve(m, np.broadcast_to(mean, l1.shape + (4,))[..., None])[..., 0]
    return np.einsum("i,...ij,...j->...", mean, lam, sol)
