import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvsym.errors import DomainError, ExtrapolationError
from kdvsym.mesh import MeshLayer, Periodic
from kdvsym.projection import lagrange_interpolate, project_layer


def test_quadratic_exactness():
    xs = np.array([0.0, 0.4, 1.1])
    ys = 3.0 * xs**2
    for x in (0.05, 0.4, 0.73, 1.1):
        assert lagrange_interpolate(xs, ys, x) == pytest.approx(3.0 * x**2, abs=1e-13)


def test_partition_of_unity():
    rng = np.random.default_rng(0)
    for _ in range(100):
        xs = np.sort(rng.random(3) * 5.0)
        if np.min(np.diff(xs)) < 1e-3:
            continue
        x = xs[0] + rng.random() * (xs[-1] - xs[0])
        assert lagrange_interpolate(xs, np.ones(3), x) == pytest.approx(1.0, abs=1e-12)


def test_boost_equivariance():
    xs = np.array([0.0, 0.4, 1.0, 1.5, 2.2])
    ys = np.sin(xs)
    eps, t = 0.8, 1.7
    x = 0.7
    plain = lagrange_interpolate(xs[:3], ys[:3], x)
    boosted = lagrange_interpolate(xs[:3] + eps * t, ys[:3] + eps, x + eps * t)
    assert boosted == pytest.approx(plain + eps, abs=1e-13)


def test_interpolate_errors():
    xs = np.array([0.0, 1.0, 2.0])
    ys = np.zeros(3)
    with pytest.raises(ExtrapolationError):
        lagrange_interpolate(xs, ys, 2.5)
    with pytest.raises(DomainError):
        lagrange_interpolate(np.array([0.0, 0.0, 1.0]), ys, 0.5)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), order=st.integers(1, 5))
def test_degree_m_reproduction(seed, order):
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.random(order + 1) * 4.0 - 2.0)
    if np.min(np.diff(xs)) < 1e-2:
        return
    coeffs = rng.standard_normal(order + 1)
    ys = np.polyval(coeffs, xs)
    x = xs[0] + rng.random() * (xs[-1] - xs[0])
    expected = np.polyval(coeffs, x)
    got = lagrange_interpolate(xs, ys, x)
    assert abs(got - expected) <= 1e-11 * max(1.0, abs(expected))


def test_project_layer_identity_targets():
    nodes = np.array([0.0, 0.7, 1.3, 2.0, 2.9])
    values = np.cos(nodes)
    lay = MeshLayer(0.3, nodes, values)
    out = project_layer(lay, nodes)
    assert np.max(np.abs(out.values - values)) < 1e-14
    assert out.time == lay.time


def test_project_layer_quadratic_data():
    nodes = np.linspace(0.0, 3.0, 9)
    lay = MeshLayer(0.0, nodes, 2.0 - nodes + 0.5 * nodes**2)
    targets = np.linspace(0.1, 2.9, 11)
    out = project_layer(lay, targets)
    assert np.max(np.abs(out.values - (2.0 - targets + 0.5 * targets**2))) < 1e-12


def test_project_layer_spread_variant():
    nodes = np.linspace(0.0, 3.0, 9)
    lay = MeshLayer(0.0, nodes, 1.0 + nodes**2)
    targets = np.linspace(0.2, 2.8, 7)
    out = project_layer(lay, targets, variant="spread")
    assert np.max(np.abs(out.values - (1.0 + targets**2))) < 1e-12


def test_project_layer_periodic_seam():
    L = 2.0
    n = 64
    nodes = L * np.arange(n) / n + 0.013  # drifted mesh
    values = np.sin(2 * np.pi * nodes / L)
    lay = MeshLayer(0.0, nodes, values)
    targets = L * np.arange(n) / n
    out = project_layer(lay, targets, boundary=Periodic(L))
    assert np.max(np.abs(out.values - np.sin(2 * np.pi * targets / L))) < 1e-4


def test_project_layer_extrapolation_error():
    nodes = np.linspace(0.0, 1.0, 6)
    lay = MeshLayer(0.0, nodes, np.zeros(6))
    with pytest.raises(ExtrapolationError):
        project_layer(lay, np.linspace(-0.5, 0.5, 5))


def test_projection_commutes_with_boost():
    rng = np.random.default_rng(4)
    nodes = np.cumsum(0.3 + rng.random(12))
    values = rng.standard_normal(12)
    lay = MeshLayer(1.4, nodes, values)
    targets = np.linspace(nodes[1], nodes[-2], 9)
    base = project_layer(lay, targets)
    eps = 0.9
    boosted_lay = MeshLayer(1.4, nodes + eps * 1.4, values + eps)
    boosted = project_layer(boosted_lay, targets + eps * 1.4)
    assert np.max(np.abs(boosted.values - (base.values + eps))) < 1e-12
