"""Compiled cyclic pentadiagonal solver for the inner stepping loop.

The no-pivot banded LU is only used when the assembled system is strictly
diagonally dominant (checked by the caller), which holds for the production
time steppers; anything else falls back to the pivoted scipy path.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _forward_backward(f1, f2, inv_c0, c1, c2, g, x, start):
    """Apply the stored LU factors to one right-hand side (g is clobbered).

    start skips the forward sweep up to the first nonzero of g.
    """
    n = g.shape[0]
    for i in range(start, n - 2):
        g[i + 1] -= f1[i + 1] * g[i]
        g[i + 2] -= f2[i + 2] * g[i]
    if start <= n - 2:
        g[n - 1] -= f1[n - 1] * g[n - 2]
    x[n - 1] = g[n - 1] * inv_c0[n - 1]
    x[n - 2] = (g[n - 2] - c1[n - 2] * x[n - 1]) * inv_c0[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (g[i] - c1[i] * x[i + 1] - c2[i] * x[i + 2]) * inv_c0[i]


@njit(cache=True)
def cyclic_penta_solve(dm2, dm1, d0, dp1, dp2, rhs):
    """Cyclic pentadiagonal solve via banded LU plus rank-4 Woodbury update.

    Diagonals are row-indexed cyclically (dp1[i] multiplies x_{(i+1) mod n});
    the six wrap-around couplings live in the otherwise unused end slots and
    are handled by the correction columns.
    """
    n = d0.shape[0]
    c0 = d0.copy()
    c1 = dp1.copy()
    c2 = dp2.copy()
    l1 = dm1.copy()
    f1 = np.zeros(n)
    f2 = np.zeros(n)
    for i in range(n - 2):
        piv = c0[i]
        r1 = l1[i + 1] / piv
        f1[i + 1] = r1
        c0[i + 1] -= r1 * c1[i]
        c1[i + 1] -= r1 * c2[i]
        r2 = dm2[i + 2] / piv
        f2[i + 2] = r2
        c0[i + 2] -= r2 * c2[i]
        l1[i + 2] -= r2 * c1[i]
    r1 = l1[n - 1] / c0[n - 2]
    f1[n - 1] = r1
    c0[n - 1] -= r1 * c1[n - 2]
    inv_c0 = 1.0 / c0

    z = np.empty((5, n))
    g = rhs.copy()
    _forward_backward(f1, f2, inv_c0, c1, c2, g, z[0], 0)
    starts = (0, 1, n - 2, n - 1)
    for col in range(4):
        g = np.zeros(n)
        g[starts[col]] = 1.0
        _forward_backward(f1, f2, inv_c0, c1, c2, g, z[col + 1], starts[col])

    # corner couplings: row 0 -> cols n-2, n-1; row 1 -> n-1;
    # row n-2 -> 0; row n-1 -> 0, 1
    cap = np.eye(4)
    vz = np.empty(4)
    for r in range(4):
        if r == 0:
            a, b_, cda, cdb = n - 2, n - 1, dm2[0], dm1[0]
        elif r == 1:
            a, b_, cda, cdb = n - 1, -1, dm2[1], 0.0
        elif r == 2:
            a, b_, cda, cdb = 0, -1, dp2[n - 2], 0.0
        else:
            a, b_, cda, cdb = 0, 1, dp1[n - 1], dp2[n - 1]
        vz[r] = cda * z[0, a] + (cdb * z[0, b_] if b_ >= 0 else 0.0)
        for c in range(4):
            cap[r, c] += cda * z[c + 1, a] + (cdb * z[c + 1, b_] if b_ >= 0 else 0.0)
    y = np.linalg.solve(cap, vz)
    x = np.empty(n)
    for i in range(n):
        x[i] = z[0, i] - (z[1, i] * y[0] + z[2, i] * y[1] + z[3, i] * y[2] + z[4, i] * y[3])
    return x
