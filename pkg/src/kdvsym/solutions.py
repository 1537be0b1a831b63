"""Exact solutions of u_t + u u_x + u_xxx = 0 and the symmetry-group action.

The catalog collects the travelling-wave, rational and two-soliton
solutions used as initial data and error oracles.  Singular members are
kept for residual testing only; evaluation inside a guard radius of a
singularity raises SingularityError instead of returning huge floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import jacobi_cn, jacobi_sn
from .errors import DomainError, SingularityError

_GUARD = 1e-8  # singularity guard radius on denominators


def _as_array(t, x):
    # extended-precision inputs (used by the residual stencils) pass through
    dtype = np.result_type(np.asarray(t).dtype, np.asarray(x).dtype, np.float64)
    if dtype.kind != "f":
        dtype = np.float64
    t = np.asarray(t, dtype=dtype)
    x = np.asarray(x, dtype=dtype)
    return np.broadcast_arrays(t, x)


def _ret(values, scalar):
    values = np.asarray(values)
    return float(values) if scalar else values


def _guard(denom, t, x, what):
    bad = np.abs(denom) < _GUARD
    if np.any(bad):
        tb = np.broadcast_to(t, bad.shape)[bad].flat[0]
        xb = np.broadcast_to(x, bad.shape)[bad].flat[0]
        raise SingularityError(f"{what} singular near (t={tb}, x={xb})", t=tb, x=xb)


class KdvSolution:
    """Base class: an exact solution evaluable at any nonsingular (t, x)."""

    def evaluate(self, t, x):
        raise NotImplementedError

    def __call__(self, t, x):
        return self.evaluate(t, x)


@dataclass(frozen=True)
class Constant(KdvSolution):
    """u = A, the only solution invariant under space translations."""

    value: float

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        return _ret(np.full(x.shape, self.value), x.ndim == 0)


@dataclass(frozen=True)
class GalileanRamp(KdvSolution):
    """u = (x - x0)/(t - t0), invariant under boosts and dilations."""

    t0: float = 0.0
    x0: float = 0.0

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        denom = t - self.t0
        _guard(denom, t, x, "GalileanRamp")
        return _ret((x - self.x0) / denom, x.ndim == 0)


@dataclass(frozen=True)
class Rational(KdvSolution):
    """Rational solutions u = 12 (ln theta)_xx for theta = 1, x, x^3+12t, ...

    order 0 is the zero solution; orders -1, -2, -3 blow up where the
    tau polynomial vanishes.
    """

    order: int

    def __post_init__(self):
        if self.order not in (0, -1, -2, -3):
            raise DomainError(f"rational solution order must be 0..-3, got {self.order}")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        scalar = x.ndim == 0
        if self.order == 0:
            return _ret(np.zeros(x.shape), scalar)
        if self.order == -1:
            _guard(x * x, t, x, "Rational(-1)")
            return _ret(-12.0 / (x * x), scalar)
        if self.order == -2:
            theta = x**3 + 12.0 * t
            _guard(theta * theta, t, x, "Rational(-2)")
            return _ret(-36.0 * x * (x**3 - 24.0 * t) / theta**2, scalar)
        theta = x**6 + 60.0 * x**3 * t - 720.0 * t**2
        _guard(theta * theta, t, x, "Rational(-3)")
        num = x**9 + 5400.0 * x**3 * t**2 + 43200.0 * t**3
        return _ret(-72.0 * x * num / theta**2, scalar)


@dataclass(frozen=True)
class CnoidalBoosted(KdvSolution):
    """Cnoidal wave u = (a+v) cn^2(w (x - v t), k) travelling at speed v.

    k = sqrt((a+v)/(2a-v)) and w = sqrt((2a-v)/12); requires 2a - v > 0
    and 0 <= k <= 1 (i.e. -a <= v <= a/2... the k range), with the
    soliton recovered at k = 1.
    """

    a: float
    v: float

    def __post_init__(self):
        if 2.0 * self.a - self.v <= 0.0:
            raise DomainError("cnoidal wave requires 2a - v > 0")
        k2 = (self.a + self.v) / (2.0 * self.a - self.v)
        if not 0.0 <= k2 <= 1.0:
            raise DomainError(f"cnoidal modulus k^2 = {k2} outside [0, 1]")

    @property
    def modulus(self) -> float:
        return math.sqrt((self.a + self.v) / (2.0 * self.a - self.v))

    @property
    def wavenumber(self) -> float:
        return math.sqrt((2.0 * self.a - self.v) / 12.0)

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        cn = jacobi_cn(self.wavenumber * (x - self.v * t), self.modulus)
        return _ret((self.a + self.v) * np.asarray(cn) ** 2, x.ndim == 0)


@dataclass(frozen=True)
class SolitonBoosted(KdvSolution):
    """The KdV soliton u = 3v sech^2( sqrt(v) (x - v t) / 2 ), v > 0."""

    v: float

    def __post_init__(self):
        if self.v <= 0.0:
            raise DomainError("soliton speed must be positive")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        z = 0.5 * math.sqrt(self.v) * (x - self.v * t)
        return _ret(3.0 * self.v / np.cosh(z) ** 2, x.ndim == 0)


@dataclass(frozen=True)
class SingularSnoidal(KdvSolution):
    """u = a - (a-c)/sn^2(w x, k), singular at the zeros of sn."""

    a: float
    c: float

    def __post_init__(self):
        if self.a - self.c <= 0.0:
            raise DomainError("singular snoidal requires a > c")
        k2 = (2.0 * self.a + self.c) / (self.a - self.c)
        if not 0.0 <= k2 <= 1.0:
            raise DomainError(f"snoidal modulus k^2 = {k2} outside [0, 1]")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        omega = 0.5 * math.sqrt((self.a - self.c) / 3.0)
        k = math.sqrt((2.0 * self.a + self.c) / (self.a - self.c))
        sn = np.asarray(jacobi_sn(omega * x, k))
        _guard(sn * sn, t, x, "SingularSnoidal")
        return _ret(self.a - (self.a - self.c) / sn**2, x.ndim == 0)


@dataclass(frozen=True)
class SingularSoliton(KdvSolution):
    """u = -(a/2)(1 + 3/sinh^2(w x)) with w = sqrt(a/2)/2, a > 0."""

    a: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise DomainError("singular soliton requires a > 0")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        sh = np.sinh(0.5 * math.sqrt(0.5 * self.a) * x)
        _guard(sh * sh, t, x, "SingularSoliton")
        return _ret(-0.5 * self.a * (1.0 + 3.0 / sh**2), x.ndim == 0)


@dataclass(frozen=True)
class SingularTrig(KdvSolution):
    """u = a - 3a/sin^2(w x) with w = sqrt(a)/2, a > 0."""

    a: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise DomainError("singular trigonometric solution requires a > 0")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        s = np.sin(0.5 * math.sqrt(self.a) * x)
        _guard(s * s, t, x, "SingularTrig")
        return _ret(self.a - 3.0 * self.a / s**2, x.ndim == 0)


@dataclass(frozen=True)
class AlgebraicSolitonBoosted(KdvSolution):
    """u = -12/(x - v t)^2 + v, the boosted algebraic soliton."""

    v: float

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        z = x - self.v * t
        _guard(z * z, t, x, "AlgebraicSolitonBoosted")
        return _ret(-12.0 / z**2 + self.v, x.ndim == 0)


@dataclass(frozen=True)
class ComplexRootWave(KdvSolution):
    """Real solution from complex cubic roots b, c = -a/2 +- i q, q > 0.

    u = a - A (1 + cn(w x, k)) / (1 - cn(w x, k)) with A = sqrt(9a^2/4 + q^2),
    w = sqrt(A/3), k^2 = ((A + 3a/2)^2 + q^2) / (4 A^2); singular where cn = 1.
    """

    a: float
    q: float

    def __post_init__(self):
        if self.q <= 0.0:
            raise DomainError("complex-root wave requires q > 0")

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        big_a = math.sqrt(2.25 * self.a**2 + self.q**2)
        omega = math.sqrt(big_a / 3.0)
        k2 = ((big_a + 1.5 * self.a) ** 2 + self.q**2) / (4.0 * big_a**2)
        cn = np.asarray(jacobi_cn(omega * x, math.sqrt(k2)))
        _guard(1.0 - cn, t, x, "ComplexRootWave")
        return _ret(self.a - big_a * (1.0 + cn) / (1.0 - cn), x.ndim == 0)


@dataclass(frozen=True)
class DoubleSoliton(KdvSolution):
    """Two-soliton solution in real exponential tau-function form.

    With tau = 1 + B1 E1 + B2 E2 + A B1 B2 E1 E2, where
    E_j = exp(-alpha_j (x~ - alpha_j^2 t)), A = ((a1-a2)/(a1+a2))^2 and
    x~ = x - c t, the solution is u = 12 (tau tau_xx - tau_x^2)/tau^2 + c
    using analytically differentiated tau.  Soliton j has amplitude
    3 alpha_j^2 and speed alpha_j^2 + c.  The exponents are normalized by
    their pointwise maximum before exponentiation, so evaluation is
    overflow-free on the whole real line.
    """

    alpha1: float
    alpha2: float
    b1: float
    b2: float
    frame_speed: float = 0.0

    def __post_init__(self):
        if self.alpha1 + self.alpha2 == 0.0:
            raise DomainError("double soliton requires alpha1 + alpha2 != 0")
        if self.b1 < 0.0 or self.b2 < 0.0:
            raise DomainError("tau-function coefficients B1, B2 must be >= 0")

    def _tau_terms(self, t, x):
        a1, a2 = self.alpha1, self.alpha2
        amp = ((a1 - a2) / (a1 + a2)) ** 2
        xt = x - self.frame_speed * t
        th1 = -a1 * (xt - a1**2 * t)
        th2 = -a2 * (xt - a2**2 * t)
        # th = 0 stands in for the constant term of tau.
        top = np.maximum(np.maximum(th1, th2), np.maximum(th1 + th2, 0.0))
        e0 = np.exp(-top)
        e1 = self.b1 * np.exp(th1 - top)
        e2 = self.b2 * np.exp(th2 - top)
        e12 = amp * self.b1 * self.b2 * np.exp(th1 + th2 - top)
        tau = e0 + e1 + e2 + e12
        tau_x = -(a1 * e1 + a2 * e2 + (a1 + a2) * e12)
        tau_xx = a1**2 * e1 + a2**2 * e2 + (a1 + a2) ** 2 * e12
        return tau, tau_x, tau_xx

    def evaluate(self, t, x):
        t, x = _as_array(t, x)
        tau, tau_x, tau_xx = self._tau_terms(t, x)
        _guard(tau, t, x, "DoubleSoliton")
        u = 12.0 * (tau * tau_xx - tau_x**2) / tau**2 + self.frame_speed
        return _ret(u, x.ndim == 0)

    def log_tau(self, t, x):
        """ln tau up to an additive linear-in-x term (enough for d^2/dx^2)."""
        t, x = _as_array(t, x)
        a1, a2 = self.alpha1, self.alpha2
        amp = ((a1 - a2) / (a1 + a2)) ** 2
        xt = x - self.frame_speed * t
        th1 = -a1 * (xt - a1**2 * t)
        th2 = -a2 * (xt - a2**2 * t)
        top = np.maximum(np.maximum(th1, th2), np.maximum(th1 + th2, 0.0))
        rest = (
            np.exp(-top)
            + self.b1 * np.exp(th1 - top)
            + self.b2 * np.exp(th2 - top)
            + amp * self.b1 * self.b2 * np.exp(th1 + th2 - top)
        )
        out = top + np.log(rest)
        return _ret(out, x.ndim == 0)


@dataclass(frozen=True)
class GroupElement:
    """Element (d, v, t0, x0, reflect) of the KdV point-symmetry group.

    Acts on points as t -> e^{3d} (s t + t0), x -> e^{d} (s x + x0 + v (s t + t0)),
    u -> e^{-2d} (u + v), with s = -1 when reflect else +1; the elementary
    flows compose in the order reflection, shifts, boost, dilation.
    """

    d: float = 0.0
    v: float = 0.0
    t0: float = 0.0
    x0: float = 0.0
    reflect: bool = False

    @property
    def sigma(self) -> float:
        return -1.0 if self.reflect else 1.0

    def apply_point(self, t, x, u):
        """Image of a point (t, x, u) of the solution graph."""
        s = self.sigma
        e_d = math.exp(self.d)
        tt = e_d**3 * (s * np.asarray(t, dtype=float) + self.t0)
        xx = e_d * (s * np.asarray(x, dtype=float) + self.x0 + self.v * (s * np.asarray(t, dtype=float) + self.t0))
        uu = (np.asarray(u, dtype=float) + self.v) / e_d**2
        return tt, xx, uu

    def pull_back(self, t, x):
        """Preimage (t, x) used when evaluating a transformed solution."""
        s = self.sigma
        e_d = math.exp(self.d)
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        t_in = s * (t / e_d**3 - self.t0)
        x_in = s * (x / e_d - self.x0 - self.v * t / e_d**3)
        return t_in, x_in

    def compose(self, inner: "GroupElement") -> "GroupElement":
        """Element acting as self after inner (self o inner)."""
        # Compose the affine point maps and read the parameters back off.
        s1, s2 = inner.sigma, self.sigma
        e1, e2 = math.exp(inner.d), math.exp(self.d)
        d = inner.d + self.d
        v = inner.v + e1**2 * self.v
        t0 = s2 * inner.t0 + self.t0 / e1**3
        # x-constant term of the composed map equals e^{d} (x0 + v t0).
        e_net = e2 * s2 * e1 * (inner.x0 + inner.v * inner.t0)
        e_net += e2 * self.v * s2 * e1**3 * inner.t0
        e_net += e2 * (self.x0 + self.v * self.t0)
        x0 = e_net / math.exp(d) - v * t0
        return GroupElement(d=d, v=v, t0=t0, x0=x0, reflect=inner.reflect ^ self.reflect)


IDENTITY = GroupElement()


@dataclass(frozen=True)
class Transformed(KdvSolution):
    """Image of a solution under a group element, evaluated by pullback."""

    base: KdvSolution
    element: GroupElement

    def evaluate(self, t, x):
        g = self.element
        t_in, x_in = g.pull_back(t, x)
        scale = math.exp(-2.0 * g.d)
        return scale * (self.base.evaluate(t_in, x_in) + g.v)


def transform(sol: KdvSolution, g: GroupElement) -> KdvSolution:
    """New solution obtained by acting with g on sol."""
    return Transformed(sol, g)


def residual(sol: KdvSolution, t: float, x: float, h_t: float = 1e-3, h_x: float = 1e-3) -> float:
    """Centered fourth-order finite-difference residual of u_t + u u_x + u_xxx.

    Requires a nonsingular neighborhood of radius max(2 h_t, 3 h_x).  The
    stencil is evaluated in extended precision so the third difference is
    not drowned by roundoff at small h_x.
    """
    ld = np.longdouble
    jt = np.arange(-2, 3, dtype=ld)
    u_t_samples = sol.evaluate(ld(t) + jt * ld(h_t), ld(x))
    u_t = (u_t_samples[0] - 8 * u_t_samples[1] + 8 * u_t_samples[3] - u_t_samples[4]) / (12.0 * ld(h_t))

    jx = np.arange(-3, 4, dtype=ld)
    ux_s = sol.evaluate(ld(t), ld(x) + jx * ld(h_x))
    u = ux_s[3]
    u_x = (ux_s[1] - 8 * ux_s[2] + 8 * ux_s[4] - ux_s[5]) / (12.0 * ld(h_x))
    u_xxx = (ux_s[0] - 8 * ux_s[1] + 13 * ux_s[2] - 13 * ux_s[4] + 8 * ux_s[5] - ux_s[6]) / (8.0 * ld(h_x) ** 3)
    return float(u_t + u * u_x + u_xxx)
