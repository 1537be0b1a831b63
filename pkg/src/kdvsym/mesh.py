"""Mesh layers, Lagrangian node motion and equidistribution.

A MeshLayer is one time level of a simulation: the time value, strictly
increasing node positions and the nodal solution values.  Monitors and the
equidistribution solve implement the adaptive mesh strategies; boundary
kinds supply the ghost nodes and values that the difference stencils need
near the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, TanglingError
from .solutions import KdvSolution

TANGLING_REL_TOL = 1e-12  # spacings below this fraction of the mean count as tangled


@dataclass(frozen=True)
class MeshLayer:
    """One time level: time t, nodes x_i (strictly increasing), values u_i."""

    time: float
    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if nodes.ndim != 1 or values.shape != nodes.shape:
            raise DomainError("nodes and values must be 1-d arrays of equal length")
        if nodes.size < 5:
            raise DomainError("a mesh layer needs at least five nodes")
        if not np.all(np.diff(nodes) > 0.0):
            bad = int(np.argmin(np.diff(nodes)))
            raise TanglingError(f"nodes not strictly increasing at cell {bad}", index=bad)

    @property
    def n(self) -> int:
        return self.nodes.size

    def spacings(self, boundary=None) -> np.ndarray:
        """Cell widths h_i; periodic boundaries append the wrap-around cell."""
        h = np.diff(self.nodes)
        if isinstance(boundary, Periodic):
            wrap = self.nodes[0] + boundary.period - self.nodes[-1]
            h = np.append(h, wrap)
        return h


@dataclass(frozen=True)
class Periodic:
    """Periodic domain of length period; node coordinates wrap modulo it."""

    period: float

    def __post_init__(self):
        if self.period <= 0.0:
            raise DomainError("period must be positive")


@dataclass(frozen=True)
class DirichletFromExact:
    """Ghost nodes and values supplied by a reference solution."""

    reference: KdvSolution


Boundary = Union[Periodic, DirichletFromExact]


@dataclass(frozen=True)
class ArcLengthInvariant:
    """rho_i = sqrt(1 + alpha (dt Du_i)^2); built from difference invariants."""

    alpha: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise DomainError("monitor strength alpha must be >= 0")


@dataclass(frozen=True)
class CurvatureNonInvariant:
    """Curvature-based monitor; breaks the dilation symmetry by design."""

    alpha: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise DomainError("monitor strength alpha must be >= 0")


MonitorKind = Union[ArcLengthInvariant, CurvatureNonInvariant]


def check_spacings(nodes: np.ndarray, boundary=None, period_start=None) -> None:
    """Raise TanglingError if any spacing is non-positive or below tolerance."""
    h = np.diff(nodes)
    if isinstance(boundary, Periodic):
        h = np.append(h, nodes[0] + boundary.period - nodes[-1])
    mean = (h.sum()) / h.size
    if mean <= 0.0 or np.any(h <= TANGLING_REL_TOL * mean):
        bad = int(np.argmin(h))
        raise TanglingError(f"mesh tangled at cell {bad} (h = {h[bad]:.3e})", index=bad)


def extend(nodes: np.ndarray, values: np.ndarray, boundary: Boundary, time: float, nghost: int = 2):
    """Nodes and values with nghost ghost points appended on each side.

    Periodic ghosts wrap by the period; Dirichlet ghosts extend the mesh
    linearly with the edge spacing and take values from the reference
    solution at the given time.
    """
    if isinstance(boundary, Periodic):
        L = boundary.period
        x = np.concatenate([nodes[-nghost:] - L, nodes, nodes[:nghost] + L])
        u = np.concatenate([values[-nghost:], values, values[:nghost]])
        return x, u
    if isinstance(boundary, DirichletFromExact):
        h0 = nodes[1] - nodes[0]
        h1 = nodes[-1] - nodes[-2]
        left = nodes[0] - h0 * np.arange(nghost, 0, -1)
        right = nodes[-1] + h1 * np.arange(1, nghost + 1)
        x = np.concatenate([left, nodes, right])
        ref = boundary.reference
        u = np.concatenate([ref.evaluate(time, left), values, ref.evaluate(time, right)])
        return x, u
    raise DomainError(f"unknown boundary kind: {boundary!r}")


def extend_nodes(nodes: np.ndarray, boundary: Boundary, nghost: int = 2) -> np.ndarray:
    """Ghost-extended node positions only (values not needed)."""
    if isinstance(boundary, Periodic):
        L = boundary.period
        return np.concatenate([nodes[-nghost:] - L, nodes, nodes[:nghost] + L])
    h0 = nodes[1] - nodes[0]
    h1 = nodes[-1] - nodes[-2]
    left = nodes[0] - h0 * np.arange(nghost, 0, -1)
    right = nodes[-1] + h1 * np.arange(1, nghost + 1)
    return np.concatenate([left, nodes, right])


def lagrangian_advance(layer: MeshLayer, dt: float) -> np.ndarray:
    """New node positions x_i + dt u_i (grid velocity = physical velocity).

    There is no mechanism preventing node crossing; a tangled result
    raises TanglingError carrying the first offending cell.
    """
    if dt <= 0.0:
        raise DomainError("time step must be positive")
    x_new = layer.nodes + dt * layer.values
    h = np.diff(x_new)
    mean = h.mean()
    if mean <= 0.0 or np.any(h <= TANGLING_REL_TOL * abs(mean)):
        bad = int(np.argmin(h))
        raise TanglingError(f"Lagrangian advance tangled mesh at cell {bad}", index=bad)
    return x_new


def monitor_values(layer: MeshLayer, dt: float, kind: MonitorKind, boundary: Boundary = None) -> np.ndarray:
    """Mesh density rho_i >= 1 for every node of the layer.

    The arc-length monitor uses the invariant combination dt * Du_i; the
    curvature monitor needs the wider i-2..i+2 stencil.  Without a boundary
    the edge entries reuse the nearest interior value.
    """
    n = layer.n
    if boundary is not None:
        x, u = extend(layer.nodes, layer.values, boundary, layer.time)
        lo = 2
    else:
        x, u = layer.nodes, layer.values
        lo = 0

    if isinstance(kind, ArcLengthInvariant):
        du = dt * np.diff(u) / np.diff(x)
        rho = np.sqrt(1.0 + kind.alpha * du**2)
        if boundary is None:
            rho = np.append(rho, rho[-1])  # no cell to the right of the last node
        else:
            rho = rho[lo : lo + n]
        return rho

    if isinstance(kind, CurvatureNonInvariant):
        if boundary is None:
            # extend the grid and data linearly past the edges
            h0 = x[1] - x[0]
            h1 = x[-1] - x[-2]
            xp = np.concatenate([[x[0] - 2 * h0, x[0] - h0], x, [x[-1] + h1, x[-1] + 2 * h1]])
            up = np.concatenate(
                [[3 * u[0] - 2 * u[1], 2 * u[0] - u[1]], u, [2 * u[-1] - u[-2], 3 * u[-1] - 2 * u[-2]]]
            )
            x, u, lo = xp, up, 2
        i = np.arange(lo, lo + n)
        num = 2.0 * (u[i + 2] - u[i]) / (x[i + 2] - x[i]) - 2.0 * (u[i + 1] - u[i - 1]) / (x[i + 1] - x[i - 1])
        den = x[i + 2] - x[i] + x[i + 1] - x[i - 2]
        rho = np.sqrt(1.0 + kind.alpha * (dt * num / den) ** 2)
        return rho

    raise DomainError(f"unknown monitor kind: {kind!r}")


def equidistribute(layer: MeshLayer, rho: np.ndarray, boundary: Boundary, start: float = None) -> np.ndarray:
    """Node positions solving the discrete equidistribution relation.

    The averaged weights (rho_i + rho_{i+1})/2 make every cell carry the
    same monitor mass.  Dirichlet domains keep the current endpoints;
    periodic domains keep the total span equal to the period and place
    node 0 at `start` (default: its current position).  Output spacings
    are positive by construction.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.shape != layer.nodes.shape:
        raise DomainError("rho must have one value per node")
    if np.any(rho <= 0.0):
        raise DomainError("monitor values must be positive")
    x = layer.nodes
    if isinstance(boundary, DirichletFromExact) or boundary is None:
        w = 2.0 / (rho[:-1] + rho[1:])
        span = x[-1] - x[0]
        spacing = span * w / w.sum()
        out = np.empty_like(x)
        out[0] = x[0]
        out[1:] = x[0] + np.cumsum(spacing)
        out[-1] = x[-1]  # pin exactly despite cumsum roundoff
        check_spacings(out)
        return out
    if isinstance(boundary, Periodic):
        rho_wrap = np.append(rho, rho[0])
        w = 2.0 / (rho_wrap[:-1] + rho_wrap[1:])
        spacing = boundary.period * w / w.sum()
        x0 = x[0] if start is None else float(start)
        out = np.empty_like(x)
        out[0] = x0
        out[1:] = x0 + np.cumsum(spacing[:-1])
        check_spacings(out, boundary)
        return out
    raise DomainError(f"unknown boundary kind: {boundary!r}")


def equidistribution_residual(nodes: np.ndarray, rho: np.ndarray, boundary: Boundary = None) -> float:
    """Largest violation of the discrete equidistribution relation."""
    if isinstance(boundary, Periodic):
        rho_w = np.append(rho, rho[0])
        h = np.append(np.diff(nodes), nodes[0] + boundary.period - nodes[-1])
        mass = 0.5 * (rho_w[:-1] + rho_w[1:]) * h
        return float(np.max(np.abs(np.diff(np.append(mass, mass[0])))))
    h = np.diff(nodes)
    mass = 0.5 * (rho[:-1] + rho[1:]) * h
    return float(np.max(np.abs(np.diff(mass))))
