"""Jacobi elliptic functions cn, sn and the complete integral K.

Evaluation uses the descending Landen (arithmetic-geometric mean)
transformation with the phase recursion of DLMF 22.20(ii), after reducing
the argument by the quarter-period symmetries.  Moduli within 1e-12 of 1
switch to the hyperbolic closed forms, where the AGM ladder loses accuracy.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

_AGM_TOL = 1e-15
_UNIT_MODULUS_GUARD = 1e-12


def _check_modulus(k: float) -> float:
    k = float(k)
    if not 0.0 <= k <= 1.0 or math.isnan(k):
        raise DomainError(f"elliptic modulus must satisfy 0 <= k <= 1, got {k}")
    return k


def complete_k(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = agm quadrature.

    Diverges logarithmically as k -> 1; k = 1 raises DomainError.
    """
    k = _check_modulus(k)
    if k == 1.0:
        raise DomainError("K(k) diverges at k = 1")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    while abs(a - b) > _AGM_TOL * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def _agm_ladder(k: float):
    """a_n and c_n sequences of the descending Landen transformation."""
    a_seq = [1.0]
    c_seq = [k]
    b = math.sqrt((1.0 - k) * (1.0 + k))
    while abs(c_seq[-1]) > _AGM_TOL * a_seq[-1]:
        a, c = 0.5 * (a_seq[-1] + b), 0.5 * (a_seq[-1] - b)
        b = math.sqrt(a_seq[-1] * b)
        a_seq.append(a)
        c_seq.append(c)
        if len(a_seq) > 60:  # quadratic convergence makes this unreachable
            raise DomainError(f"AGM failed to converge for k={k}")
    return a_seq, c_seq


def _sn_cn_reduced(u: np.ndarray, k: float):
    """sn and cn for arguments already reduced to [0, K]."""
    a_seq, c_seq = _agm_ladder(k)
    n = len(a_seq) - 1
    phi = (2.0**n) * a_seq[n] * u
    for m in range(n, 0, -1):
        ratio = c_seq[m] / a_seq[m]
        phi = 0.5 * (phi + np.arcsin(np.clip(ratio * np.sin(phi), -1.0, 1.0)))
    return np.sin(phi), np.cos(phi)


def _sn_cn(u, k: float):
    """Vectorized sn(u, k), cn(u, k) for 0 <= k <= 1."""
    k = _check_modulus(k)
    u = np.asarray(u, dtype=float)
    if k >= 1.0 - _UNIT_MODULUS_GUARD:
        return np.tanh(u), 1.0 / np.cosh(u)
    if k == 0.0:
        return np.sin(u), np.cos(u)

    big_k = complete_k(k)
    # Reduce to r in [0, K] with sign bookkeeping:
    #   sn odd, cn even; sn(u+2K) = -sn(u), cn(u+2K) = -cn(u);
    #   sn(2K-u) = sn(u), cn(2K-u) = -cn(u).
    sign_sn = np.where(u < 0, -1.0, 1.0)
    r = np.abs(u) % (4.0 * big_k)
    flip = r > 2.0 * big_k
    r = np.where(flip, r - 2.0 * big_k, r)
    sign_sn = np.where(flip, -sign_sn, sign_sn)
    sign_cn = np.where(flip, -1.0, 1.0)
    mirror = r > big_k
    r = np.where(mirror, 2.0 * big_k - r, r)
    sign_cn = np.where(mirror, -sign_cn, sign_cn)

    sn, cn = _sn_cn_reduced(r, k)
    return sign_sn * sn, sign_cn * cn


def jacobi_sn(u, k: float):
    """sn(u, k); sn(u, 0) = sin u, sn(u, 1) = tanh u."""
    sn, _ = _sn_cn(u, k)
    return sn if sn.ndim else float(sn)


def jacobi_cn(u, k: float):
    """cn(u, k); cn(u, 0) = cos u, cn(u, 1) = sech u."""
    _, cn = _sn_cn(u, k)
    return cn if cn.ndim else float(cn)
