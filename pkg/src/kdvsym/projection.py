"""Invariant evolution-projection: Lagrange interpolation back onto a grid.

Polynomial interpolation commutes with the whole KdV symmetry group (the
Lagrange basis sums to one, so adding a constant to the data adds the same
constant to the interpolant), which is what makes the evolution-projection
strategy invariant.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ExtrapolationError
from .mesh import Boundary, DirichletFromExact, MeshLayer, Periodic, extend

_HULL_SLACK = 1e-12  # relative tolerance when testing hull membership


def lagrange_interpolate(xs, ys, x: float) -> float:
    """Value at x of the Lagrange polynomial through (xs, ys).

    Exact for polynomial data of degree <= len(xs) - 1.  Raises
    ExtrapolationError outside [xs[0], xs[-1]] and DomainError for
    duplicate sample nodes.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise DomainError("need at least two sample points")
    if np.any(np.diff(xs) <= 0.0):
        raise DomainError("sample nodes must be distinct and increasing")
    slack = _HULL_SLACK * (xs[-1] - xs[0])
    if x < xs[0] - slack or x > xs[-1] + slack:
        raise ExtrapolationError(f"x = {x} outside hull [{xs[0]}, {xs[-1]}]")
    total = 0.0
    for i in range(xs.size):
        li = 1.0
        for j in range(xs.size):
            if j != i:
                li *= (x - xs[j]) / (xs[i] - xs[j])
        total += li * ys[i]
    return float(total)


def _stencil_windows(x_src, targets, centers, order: int, variant: str):
    """Start index and stride of each target's stencil in the source grid."""
    npts = order + 1
    if variant == "spread" and order == 2:
        stride = 2
    elif variant in ("contiguous", "spread"):
        stride = 1  # spread falls back to contiguous for order != 2
    else:
        raise DomainError(f"unknown stencil variant: {variant!r}")
    half = (npts - 1) * stride // 2
    lo = centers - half
    lo = np.clip(lo, 0, x_src.size - 1 - (npts - 1) * stride)
    return lo, stride


def _interp_many(x_src, u_src, targets, centers, order: int, variant: str):
    """Vectorized Lagrange interpolation of many targets at once."""
    lo, stride = _stencil_windows(x_src, targets, centers, order, variant)
    npts = order + 1
    idx = lo[:, None] + stride * np.arange(npts)[None, :]
    xs = x_src[idx]
    ys = u_src[idx]
    out = np.zeros_like(targets)
    for i in range(npts):
        li = np.ones_like(targets)
        for j in range(npts):
            if j != i:
                li *= (targets - xs[:, j]) / (xs[:, i] - xs[:, j])
        out += li * ys[:, i]
    return out


def project_layer(
    advanced: MeshLayer,
    target_nodes,
    order: int = 2,
    variant: str = "contiguous",
    boundary: Boundary = None,
) -> MeshLayer:
    """Interpolate an advanced layer back onto target nodes.

    Stencils are centered at the advanced node nearest each target
    (clipped near boundaries); periodic boundaries unwrap node
    coordinates across the seam so the drifted mesh can be queried
    anywhere in one period.
    """
    targets = np.asarray(target_nodes, dtype=float)
    if order < 1:
        raise DomainError("interpolation order must be at least 1")
    if isinstance(boundary, Periodic):
        pad = max(order + 1, 4)
        x_src, u_src = extend(advanced.nodes, advanced.values, boundary, advanced.time, nghost=pad)
        # fold targets into the window covered by the advanced mesh
        L = boundary.period
        targets_f = advanced.nodes[0] + (targets - advanced.nodes[0]) % L
        targets_f = np.where(targets_f > x_src[-1], targets_f - L, targets_f)
        query = targets_f
    elif isinstance(boundary, DirichletFromExact):
        x_src, u_src = extend(advanced.nodes, advanced.values, boundary, advanced.time)
        query = targets
    else:
        x_src, u_src = advanced.nodes, advanced.values
        query = targets
        slack = _HULL_SLACK * (x_src[-1] - x_src[0])
        if np.any(query < x_src[0] - slack) or np.any(query > x_src[-1] + slack):
            raise ExtrapolationError("target nodes outside hull of advanced nodes")

    centers = np.searchsorted(x_src, query)
    centers = np.clip(centers, 0, x_src.size - 1)
    left = np.clip(centers - 1, 0, x_src.size - 1)
    use_left = np.abs(x_src[left] - query) <= np.abs(x_src[centers] - query)
    centers = np.where(use_left, left, centers)

    values = _interp_many(x_src, u_src, query, centers, order, variant)
    return MeshLayer(time=advanced.time, nodes=targets, values=values)
