import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvsym.errors import BlowupError, DomainError, SolverError, TanglingError
from kdvsym.mesh import DirichletFromExact, MeshLayer, Periodic
from kdvsym.schemes import (
    Adaptive,
    Fixed,
    Lagrangian,
    SchemeConfig,
    SchemeKind,
    advance,
    compute_invariants,
    solve_banded_cyclic,
    step_explicit_six,
    step_momentum_conserving,
    step_standard_ftcs,
    step_trapezoidal_ten,
)
from kdvsym.diagnostics import discrete_momentum
from kdvsym.mesh import ArcLengthInvariant
from kdvsym.solutions import GalileanRamp, GroupElement, SolitonBoosted

ALL_MOVING = [
    SchemeKind.INVARIANT_EXPLICIT_SIX,
    SchemeKind.INVARIANT_EXPLICIT_FIVE,
    SchemeKind.INVARIANT_IMPLICIT_SIX,
    SchemeKind.INVARIANT_TRAPEZOIDAL_TEN,
    SchemeKind.MOMENTUM_CONSERVING,
    SchemeKind.MOMENTUM_CONSERVING_TRAPEZOIDAL,
]


def periodic_layer(rng, n=14, time=1.2):
    nodes = np.cumsum(0.5 + rng.random(n))
    nodes -= nodes[0]
    period = nodes[-1] + 0.9
    values = np.sin(2 * np.pi * nodes / period) + 0.2 * rng.standard_normal(n)
    return MeshLayer(time, nodes, values), Periodic(period)


def transform_layer(layer, g):
    t2, x2, u2 = g.apply_point(layer.time, layer.nodes, layer.values)
    return MeshLayer(float(np.ravel(t2)[0]), x2, u2)


# ---------------------------------------------------------------------------
# difference invariants


def test_invariants_uniform_stationary_zero():
    n = 9
    nodes = np.arange(float(n))
    lay0 = MeshLayer(0.0, nodes, np.zeros(n))
    lay1 = MeshLayer(0.1, nodes, np.zeros(n))
    inv = compute_invariants(lay0, lay1, 4)
    vals = inv.as_array()
    assert np.allclose(vals[:7], 1.0, atol=1e-15)
    assert inv.i8 == pytest.approx(1.0 / 0.1)
    assert np.allclose(vals[8:], 0.0, atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    eps=st.floats(-2, 2),
    d=st.floats(-0.5, 0.5),
    x0=st.floats(-2, 2),
)
def test_invariants_under_group_action(seed, eps, d, x0):
    rng = np.random.default_rng(seed)
    lay0, per = periodic_layer(rng)
    dt = 2e-3
    lay1 = MeshLayer(lay0.time + dt, lay0.nodes + 1e-3 * rng.standard_normal(lay0.n), lay0.values + 0.01 * rng.standard_normal(lay0.n))
    base = compute_invariants(lay0, lay1, 5, per).as_array()
    g = GroupElement(d=d, v=eps, x0=x0)
    ed = math.exp(d)
    gl0 = transform_layer(lay0, g)
    gl1 = transform_layer(lay1, g)
    out = compute_invariants(gl0, gl1, 5, Periodic(per.period * ed)).as_array()
    assert np.max(np.abs(out - base) / np.maximum(1.0, np.abs(base))) < 1e-13


def test_invariant_i10_direct_formula():
    rng = np.random.default_rng(8)
    lay0, per = periodic_layer(rng)
    dt = 1e-3
    lay1 = MeshLayer(lay0.time + dt, lay0.nodes + 1e-4, lay0.values + 0.01 * rng.standard_normal(lay0.n))
    i = 6
    inv = compute_invariants(lay0, lay1, i, per)
    h = lay0.nodes[i + 1] - lay0.nodes[i]
    expected = (lay1.values[i] - lay0.values[i]) * h**2
    assert inv.i10 == pytest.approx(expected, abs=1e-15)


# ---------------------------------------------------------------------------
# banded solver


def test_cyclic_solver_identity():
    n = 9
    bands = {0: np.ones(n)}
    rhs = np.arange(float(n))
    assert np.array_equal(solve_banded_cyclic(bands, rhs), rhs)


@pytest.mark.parametrize("n", [8, 13, 64])
def test_cyclic_solver_vs_dense(n):
    rng = np.random.default_rng(n)
    bands = {m: rng.standard_normal(n) for m in range(-2, 3)}
    bands[0] = bands[0] + 9.0
    rhs = rng.standard_normal(n)
    x = solve_banded_cyclic(bands, rhs)
    dense = np.zeros((n, n))
    for m, c in bands.items():
        for i in range(n):
            dense[i, (i + m) % n] += c[i]
    assert np.max(np.abs(x - np.linalg.solve(dense, rhs))) < 1e-11
    assert np.max(np.abs(dense @ x - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_cyclic_solver_singular():
    n = 8
    bands = {0: np.zeros(n), 1: np.zeros(n)}
    with pytest.raises(SolverError):
        solve_banded_cyclic(bands, np.ones(n))


# ---------------------------------------------------------------------------
# steppers


@pytest.mark.parametrize("kind", ALL_MOVING)
def test_constant_preserved(kind):
    rng = np.random.default_rng(1)
    nodes = np.cumsum(0.5 + rng.random(12))
    nodes -= nodes[0]
    per = Periodic(nodes[-1] + 0.8)
    lay = MeshLayer(0.0, nodes, np.full(12, 2.3))
    x_next = nodes + 0.01 * rng.standard_normal(12)
    cfg = SchemeConfig(kind=kind, dt=1e-3, boundary=per, mesh_strategy=Lagrangian())
    out = advance(lay, x_next, cfg)
    assert np.max(np.abs(out - 2.3)) < 1e-13


def test_ftcs_equals_explicit_six_on_uniform_mesh():
    n, period = 32, 2.0
    nodes = period * np.arange(n) / n
    u0 = np.sin(2 * np.pi * nodes / period) + 0.3
    lay = MeshLayer(0.0, nodes, u0)
    per = Periodic(period)
    a = step_standard_ftcs(lay, SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=1e-6, boundary=per))
    cfg = SchemeConfig(kind=SchemeKind.INVARIANT_EXPLICIT_SIX, dt=1e-6, boundary=per, mesh_strategy=Fixed())
    b = step_explicit_six(lay, nodes, cfg, xdot=np.zeros(n))
    assert np.max(np.abs(a - b)) < 1e-14


def test_ftcs_against_scalar_oracle():
    n, period, dt = 48, 8.0, 1e-6
    nodes = period * np.arange(n) / n
    u0 = np.asarray(SolitonBoosted(2.0).evaluate(0.0, nodes - 4.0))
    lay = MeshLayer(0.0, nodes, u0)
    out = step_standard_ftcs(lay, SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=dt, boundary=Periodic(period)))
    h = period / n
    oracle = np.empty(n)
    for i in range(n):
        um2, um1 = u0[(i - 2) % n], u0[(i - 1) % n]
        up1, up2 = u0[(i + 1) % n], u0[(i + 2) % n]
        oracle[i] = u0[i] - dt * (u0[i] * (up1 - um1) / (2 * h) + (up2 - 2 * up1 + 2 * um1 - um2) / (2 * h**3))
    assert np.max(np.abs(out - oracle)) < 1e-14


def test_explicit_six_one_step_oracle():
    # straight-line scalar reimplementation of the six-point update
    n, period, dt = 32, 4.0, 1e-6
    nodes = period * np.arange(n) / n
    u0 = np.sin(2 * np.pi * nodes / period)
    lay = MeshLayer(0.0, nodes, u0)
    x_next = nodes + dt * 0.3
    cfg = SchemeConfig(kind=SchemeKind.INVARIANT_EXPLICIT_SIX, dt=dt, boundary=Periodic(period), mesh_strategy=Lagrangian())
    out = step_explicit_six(lay, x_next, cfg)

    def wrap_x(i):
        return nodes[i % n] + (i // n) * period if i >= 0 else nodes[i % n] - period * ((-i + n - 1) // n)

    oracle = np.empty(n)
    for i in range(n):
        xs = np.array([wrap_x(j) for j in range(i - 2, i + 3)])
        us = np.array([u0[j % n] for j in range(i - 2, i + 3)])
        h = np.diff(xs)
        du = np.diff(us) / h
        xdot = (x_next[i] - nodes[i]) / dt
        adv = (u0[i] - xdot) * (du[2] + du[1]) / 2.0
        t_i = (2 * (du[3] - du[2]) / (h[3] + h[2]) - 2 * (du[2] - du[1]) / (h[2] + h[1])) / (2 * h[2])
        t_im = (2 * (du[2] - du[1]) / (h[2] + h[1]) - 2 * (du[1] - du[0]) / (h[1] + h[0])) / (2 * h[1])
        oracle[i] = u0[i] - dt * (adv + t_i + t_im)
    assert np.max(np.abs(out - oracle)) < 1e-14


def test_trapezoidal_vs_dense_assembly():
    rng = np.random.default_rng(6)
    n = 16
    nodes = np.cumsum(0.2 + rng.random(n))
    nodes -= nodes[0]
    period = nodes[-1] + 0.4
    u0 = np.sin(2 * np.pi * nodes / period) * 0.7 + 0.1 * rng.standard_normal(n)
    lay = MeshLayer(0.0, nodes, u0)
    cfg = SchemeConfig(kind=SchemeKind.INVARIANT_TRAPEZOIDAL_TEN, dt=1e-4, boundary=Periodic(period), mesh_strategy=Fixed())
    u_band = step_trapezoidal_ten(lay, nodes, cfg, xdot=np.zeros(n))
    # dense oracle: probe the linear update u0 -> u1 through unit vectors of
    # the residual form F(u1) = A u1 - b = 0 assembled independently below
    from kdvsym.mesh import extend

    x_ext, u_ext = extend(nodes, u0, cfg.boundary, 0.0)
    h = np.diff(x_ext)
    du = np.diff(u_ext) / h

    def disp_at(vals_ext, h):
        dv = np.diff(vals_ext) / h
        out = np.empty(n)
        for i in range(n):
            q = i + 2
            t_i = (2 * (dv[q + 1] - dv[q]) / (h[q + 1] + h[q]) - 2 * (dv[q] - dv[q - 1]) / (h[q] + h[q - 1])) / (
                2 * h[q]
            )
            t_im = (2 * (dv[q] - dv[q - 1]) / (h[q] + h[q - 1]) - 2 * (dv[q - 1] - dv[q - 2]) / (h[q - 1] + h[q - 2])) / (
                2 * h[q - 1]
            )
            out[i] = t_i + t_im
        return out

    def adv_at(vals_ext, h):
        dv = np.diff(vals_ext) / h
        out = np.empty(n)
        for i in range(n):
            q = i + 2
            out[i] = (u0[i] - 0.0) * (dv[q] + dv[q - 1]) / 2.0
        return out

    def residual(u1):
        u1_ext = np.concatenate([u1[-2:], u1, u1[:2]])
        return (u1 - u0) / cfg.dt + 0.5 * (adv_at(u_ext, h) + adv_at(u1_ext, h)) + 0.5 * (
            disp_at(u_ext, h) + disp_at(u1_ext, h)
        )

    mat = np.zeros((n, n))
    rhs = -residual(np.zeros(n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        mat[:, j] = residual(e) + rhs
    u_dense = np.linalg.solve(mat, rhs)
    assert np.max(np.abs(u_band - u_dense)) < 1e-12


@pytest.mark.parametrize(
    "kind,tol",
    [
        (SchemeKind.INVARIANT_EXPLICIT_SIX, 1e-12),
        (SchemeKind.INVARIANT_IMPLICIT_SIX, 1e-12),
        (SchemeKind.INVARIANT_TRAPEZOIDAL_TEN, 1e-12),
        (SchemeKind.MOMENTUM_CONSERVING, 1e-11),
        (SchemeKind.MOMENTUM_CONSERVING_TRAPEZOIDAL, 1e-11),
    ],
)
def test_ramp_exactness_lagrangian(kind, tol):
    ramp = GalileanRamp()
    n = 35
    nodes = np.linspace(0.0, 20.0, n)
    lay = MeshLayer(1.0, nodes, nodes / 1.0)
    cfg = SchemeConfig(kind=kind, dt=1e-3, boundary=DirichletFromExact(ramp), mesh_strategy=Lagrangian())
    for _ in range(100):
        x_next = lay.nodes + cfg.dt * lay.values
        u_next = advance(lay, x_next, cfg, xdot=lay.values)
        lay = MeshLayer(lay.time + cfg.dt, x_next, u_next)
    err = np.max(np.abs(lay.values - ramp.evaluate(lay.time, lay.nodes)))
    assert err < tol


def test_momentum_telescoping():
    rng = np.random.default_rng(9)
    nodes = np.cumsum(0.5 + rng.random(12))
    nodes -= nodes[0]
    per = Periodic(nodes[-1] + 0.8)
    values = 0.5 + 0.3 * np.sin(2 * np.pi * np.arange(12) / 12)
    lay = MeshLayer(0.0, nodes, values)
    x_next = nodes + 0.01 * np.sin(2 * np.pi * np.arange(12) / 12 + 0.3)
    m0 = discrete_momentum(lay, per)
    for kind in (SchemeKind.MOMENTUM_CONSERVING, SchemeKind.MOMENTUM_CONSERVING_TRAPEZOIDAL):
        cfg = SchemeConfig(kind=kind, dt=1e-3, boundary=per, mesh_strategy=Fixed())
        u_next = advance(lay, x_next, cfg)
        m1 = discrete_momentum(MeshLayer(1e-3, x_next, u_next), per)
        assert abs(m1 - m0) <= 1e-13 * max(1.0, abs(m0))


@pytest.mark.parametrize("kind", ALL_MOVING)
@pytest.mark.parametrize(
    "g",
    [
        GroupElement(v=1.7),
        GroupElement(x0=3.1),
        GroupElement(t0=0.6),
        GroupElement(d=0.4),
        GroupElement(d=-0.25, v=0.8, t0=0.3, x0=-1.0),
    ],
)
def test_scheme_invariance(kind, g):
    rng = np.random.default_rng(hash((kind.value, g.d, g.v)) % 2**31)
    lay, per = periodic_layer(rng)
    dt = 1e-3
    x_next = lay.nodes + 0.004 * rng.standard_normal(lay.n)
    cfg = SchemeConfig(kind=kind, dt=dt, boundary=per, mesh_strategy=Fixed())
    u_next = advance(lay, x_next, cfg)

    ed = math.exp(g.d)
    lay_g = transform_layer(lay, g)
    _, x_next_g, _ = g.apply_point(lay.time + dt, x_next, np.zeros_like(x_next))
    cfg_g = SchemeConfig(kind=kind, dt=dt * ed**3, boundary=Periodic(per.period * ed), mesh_strategy=Fixed())
    u_next_g = advance(lay_g, x_next_g, cfg_g)

    expected = (u_next + g.v) / ed**2
    assert np.max(np.abs(u_next_g - expected)) <= 1e-12 * max(1.0, np.max(np.abs(expected)))


def test_ftcs_breaks_boost_invariance():
    n, period = 16, 2.0
    nodes = period * np.arange(n) / n
    u0 = np.sin(2 * np.pi * nodes / period)
    lay = MeshLayer(0.5, nodes, u0)
    cfg = SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=1e-5, boundary=Periodic(period))
    base = step_standard_ftcs(lay, cfg)
    eps = 1.0
    boosted = MeshLayer(0.5, nodes + eps * 0.5, u0 + eps)
    out = step_standard_ftcs(boosted, cfg)
    assert np.max(np.abs(out - (base + eps))) > 1e-9


def test_ftcs_requires_uniform_mesh():
    nodes = np.array([0.0, 0.4, 1.1, 2.0, 2.9, 4.0])
    lay = MeshLayer(0.0, nodes, np.zeros(6))
    cfg = SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=1e-5, boundary=Periodic(5.0))
    with pytest.raises(DomainError):
        step_standard_ftcs(lay, cfg)
    with pytest.raises(DomainError):
        SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=1e-5, boundary=Periodic(5.0), mesh_strategy=Lagrangian())


def test_blowup_reported():
    # FTCS on a stiff grid blows up; advance must raise with the step index
    n, period = 64, 2.0
    nodes = period * np.arange(n) / n
    lay = MeshLayer(0.0, nodes, np.cos(np.pi * nodes))
    cfg = SchemeConfig(kind=SchemeKind.STANDARD_FTCS, dt=0.5, boundary=Periodic(period))
    with pytest.raises(BlowupError) as exc:
        for step in range(1, 200):
            u = advance(lay, lay.nodes, cfg, step=step)
            lay = MeshLayer(lay.time + cfg.dt, lay.nodes, u)
    assert exc.value.step is not None


def test_config_validation():
    per = Periodic(1.0)
    with pytest.raises(DomainError):
        SchemeConfig(kind=SchemeKind.INVARIANT_TRAPEZOIDAL_TEN, dt=-1e-3, boundary=per)
    with pytest.raises(DomainError):
        SchemeConfig(kind=SchemeKind.INVARIANT_TRAPEZOIDAL_TEN, dt=1e-3, boundary=per, dispersion=0.0)
