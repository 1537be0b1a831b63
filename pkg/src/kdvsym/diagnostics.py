"""Error norms, discrete momentum, convergence orders, boost discrepancy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .mesh import Boundary, MeshLayer, Periodic
from .solutions import GroupElement, KdvSolution, transform


@dataclass(frozen=True)
class ErrorReport:
    """Norms and run metadata for one measurement."""

    rmse: float
    linf: float
    momentum_drift: float
    n: int
    dt: float
    wall_time: float = 0.0

    def __post_init__(self):
        if np.isfinite(self.rmse) and np.isfinite(self.linf) and self.rmse > self.linf * (1 + 1e-12):
            raise DomainError("rmse cannot exceed the maximum error")


def rmse(numerical, reference) -> float:
    """Root-mean-square difference sqrt(sum (u - ref)^2 / N)."""
    numerical = np.asarray(numerical, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if numerical.shape != reference.shape:
        raise DomainError("rmse needs equal-length inputs")
    if numerical.size == 0:
        raise DomainError("rmse needs at least one sample")
    return float(np.sqrt(np.mean((numerical - reference) ** 2)))


def linf_error(numerical, reference) -> float:
    """Maximum absolute difference at the sample points."""
    numerical = np.asarray(numerical, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if numerical.shape != reference.shape:
        raise DomainError("linf needs equal-length inputs")
    if numerical.size == 0:
        raise DomainError("linf needs at least one sample")
    return float(np.max(np.abs(numerical - reference)))


def discrete_momentum(layer: MeshLayer, boundary: Boundary = None) -> float:
    """M = sum u_i (h_i + h_{i-1}) / 2, the conserved cell-measure sum.

    Periodic domains wrap the end cells; otherwise the end nodes carry
    one-sided half cells, which makes M the trapezoid rule exactly.
    """
    u = layer.values
    h = np.diff(layer.nodes)
    if isinstance(boundary, Periodic):
        wrap = layer.nodes[0] + boundary.period - layer.nodes[-1]
        hh = np.concatenate([[wrap], h, [wrap]])
        return float(0.5 * np.sum(u * (hh[1:] + hh[:-1])))
    weights = np.zeros_like(u)
    weights[:-1] += 0.5 * h
    weights[1:] += 0.5 * h
    return float(np.sum(u * weights))


def convergence_order(points) -> float:
    """Least-squares slope of log(error) against log(N)."""
    pts = [(float(n), float(err)) for n, err in points]
    if len(pts) < 2:
        raise DomainError("need at least two (N, error) points")
    ns = np.array([p[0] for p in pts])
    errs = np.array([p[1] for p in pts])
    if np.any(errs <= 0.0) or np.any(ns <= 0.0):
        raise DomainError("convergence fit needs positive sizes and errors")
    if np.all(ns == ns[0]):
        raise DomainError("degenerate fit: all N equal")
    slope, _ = np.polyfit(np.log(ns), np.log(errs), 1)
    return float(slope)


def galilean_discrepancy(spec, solution: KdvSolution, c: float, t_final: float) -> float:
    """RMSE between a rest-frame run and a boosted run mapped back.

    Runs the experiment spec once with the given initial solution and once
    with its boost by c, maps the boosted result back to the rest frame
    (u -> u - c at x - c T) and compares at the rest run's nodes,
    interpolating when the meshes differ.
    """
    from .harness import run_experiment  # local import; harness depends on us

    from .projection import project_layer

    rest_spec = spec.with_updates(initial=solution, t_final=t_final)
    rest = run_experiment(rest_spec)
    if rest.aborted:
        raise DomainError(f"rest-frame run aborted: {rest.aborted}")
    if c == 0.0:
        boosted_sol = solution
    else:
        boosted_sol = transform(solution, GroupElement(v=c))
    boosted_spec = spec.with_updates(initial=boosted_sol, t_final=t_final)
    boosted = run_experiment(boosted_spec)
    if boosted.aborted:
        raise DomainError(f"boosted run aborted: {boosted.aborted}")

    final_rest = rest.final_layer
    final_boost = boosted.final_layer
    mapped = MeshLayer(
        time=final_boost.time,
        nodes=final_boost.nodes - c * t_final,
        values=final_boost.values - c,
    )
    projected = project_layer(mapped, final_rest.nodes, order=2, boundary=rest_spec.boundary)
    return rmse(projected.values, final_rest.values)
