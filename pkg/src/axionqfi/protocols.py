"""Vectorized Fisher informations per (source, receiver) pair and their rates.

Every Gaussian-readout Fisher information is ``s^2 * F`` with ``F`` a
function of the output variances.  In units where the vacuum variance is 1
(``a, b`` = twice the signal/idler variances, ``c`` = twice the correlation):

* homodyne on the signal quadrature with doubled variance ``v``: ``F = 2/v^2``;
* heterodyne on a thermal signal: ``F = 1/(N_T + 1)^2``;
* Bell (balanced beamsplitter, homodyne on both ports, best pairing):
  ``F = 4/(a + b - 2|c|)^2``.

Nulling has no closed form and is evaluated through the photon-counting
pipeline in :mod:`.receivers` at selected times only.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .cavity import AxionParams, CavityParams, SourceKind, SourceSpec, signal_slope
from .closed_forms import factor_smss, factor_tmss, factor_vac, factor_vac_hom
from .errors import MeasurementModelError


class Receiver(str, Enum):
    QFI = "qfi"
    HOM = "hom"
    HET = "het"
    BELL = "bell"
    NULL = "null"


VALID = {
    SourceKind.VACUUM: {Receiver.QFI, Receiver.HOM, Receiver.HET, Receiver.NULL},
    SourceKind.SMSS: {Receiver.QFI, Receiver.HOM, Receiver.NULL},
    SourceKind.TMSS: {Receiver.QFI, Receiver.BELL, Receiver.NULL, Receiver.HOM},
}


def check_pair(source: SourceSpec, receiver) -> Receiver:
    receiver = Receiver(receiver)
    if receiver not in VALID[source.kind]:
        raise MeasurementModelError(f"receiver {receiver.value!r} is not defined for source {source.kind.value!r}")
    return receiver


def _variances(T, cavity: CavityParams, G):
    t = np.asarray(T, dtype=float)
    x0 = 2.0 * cavity.n_t + 1.0
    es = np.exp(-cavity.gamma_tau * t)
    eps_s = -np.expm1(-cavity.gamma_tau * t)
    return t, x0, es, eps_s


def fisher_factor(source: SourceSpec, receiver, T, cavity: CavityParams):
    """``F(T)`` with ``K = s^2 F`` for a Gaussian-readout or QFI pair (vectorized in ``T``)."""
    receiver = check_pair(source, receiver)
    if receiver is Receiver.NULL:
        raise MeasurementModelError("nulling has no closed-form factor; use receivers.cfi_nulling")
    G = source.gain
    n = cavity.n_t
    t, x0, es, eps_s = _variances(T, cavity, G)
    kind = source.kind
    if kind is SourceKind.VACUUM:
        if receiver is Receiver.QFI:
            return np.full(t.shape, factor_vac(n))
        if receiver is Receiver.HOM:
            return np.full(t.shape, factor_vac_hom(n))
        return np.full(t.shape, 1.0 / (n + 1.0) ** 2)
    if kind is SourceKind.SMSS:
        if receiver is Receiver.QFI:
            return factor_smss(t, cavity.gamma_tau, n, G)
        v_anti = x0 * (es * G + eps_s)
        v_sq = x0 * (es / G + eps_s)
        return np.maximum(2.0 / v_anti ** 2, 2.0 / v_sq ** 2)
    # TMSS
    if receiver is Receiver.QFI:
        return factor_tmss(t, cavity.gamma_tau, cavity.gamma_idler_tau, n, G)
    a = x0 * (1.0 + es * (G - 1.0))
    if receiver is Receiver.HOM:
        return 2.0 / a ** 2
    ei = np.exp(-cavity.gamma_idler_tau * t)
    b = x0 * (1.0 + ei * (G - 1.0))
    c = x0 * np.sqrt(es * ei) * np.sqrt((G - 1.0) * (G + 1.0))
    # a + b - 2c written without cancellation: x0 [(sqrt(es(G-1)) - sqrt(ei(G+1)))^2 + ...]
    u = np.sqrt(es * (G - 1.0)) - np.sqrt(ei * (G + 1.0))
    w = np.sqrt(es * (G + 1.0)) - np.sqrt(ei * (G - 1.0))
    resid = x0 * (0.5 * (u * u + w * w) + eps_s + (-np.expm1(-cavity.gamma_idler_tau * t)))
    resid = np.where(np.isfinite(resid), resid, a + b - 2.0 * c)
    return 4.0 / resid ** 2


def fisher(source: SourceSpec, receiver, T, cavity: CavityParams, detuning_tau: float = 0.0):
    """Fisher information ``K(T)`` (vectorized in ``T``)."""
    receiver = check_pair(source, receiver)
    if receiver is Receiver.NULL:
        from .receivers import cfi_nulling
        t = np.atleast_1d(np.asarray(T, dtype=float))
        out = np.array([cfi_nulling(source, float(ti), cavity, AxionParams(detuning_tau, 0.0)) for ti in t])
        return out.reshape(np.shape(T))
    s = np.asarray(signal_slope(T, cavity, detuning_tau))
    return s * s * fisher_factor(source, receiver, T, cavity)


def rate(source: SourceSpec, receiver, T, cavity: CavityParams, detuning_tau: float = 0.0):
    """Fisher-information rate ``K(T)/T``."""
    return fisher(source, receiver, T, cavity, detuning_tau) / np.asarray(T, dtype=float)
