"""Singular inner function, Privalov-shadow outer comparisons, and the outer witness.

The singular inner function S(z) = exp(-(1+z)/(1-z)) has |S(z)| =
exp(-(1-|z|^2)/|1-z|^2).  For lambda in the disc, the Privalov shadow is the
boundary arc of length 1-|lambda| centered at the radial projection of
lambda; the outer function f_lambda built from the Herglotz integral over the
shadow is normalized (via the constant c_lambda) so that
|f_lambda(lambda) S(lambda)| = 1.

Boundary-arc integrals are evaluated two ways and cross-checked in the test
suite: the closed-form antiderivative of the Herglotz kernel,

    int (e^{it}+z)/(e^{it}-z) dt  =  [-t - 2i Log(e^{it}-z)],

tracked along a continuous branch by adaptive subdivision, and adaptive
Gauss-Kronrod quadrature.

The comparison function

    H_lambda(z) = c_lambda (1-|l|^2)/|1-l|^2 * P(z; shadow)
                  - (1-|z|^2)/|1-z|^2 - Lambda(dist(z, E))

ties the weighted norm of f_lambda S to a sign analysis; grids restricted to
the region where (1-|l|^2)/|1-l|^2 <= a Lambda(A dist(lambda, E)) are checked
case by case in the tests.

The outer witness for the convergent-criterion case has boundary modulus
log|F(e^{i theta})| = amplitude * gamma(theta)/theta^2; by linearity the
smallest dyadic amplitude making |F| dominate exp((1-|w|^2)/|1-w|^2 +
Lambda(dist(w, E))) on boundary samples is found from a single Poisson
integral per sample point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad

from . import boundary as bnd
from . import geometry as geo
from . import weights as wts
from .errors import DomainError, NumericError, UsageError

_EXP_CAP = 700.0  # exp overflow guard


# ---------------------------------------------------------------------------
# singular inner function and the Privalov shadow


def singular_inner(z: complex) -> complex:
    """S(z) = exp(-(1+z)/(1-z)) on the open unit disc."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("singular_inner needs |z| < 1")
    return cmath.exp(-(1.0 + z) / (1.0 - z))


@dataclass(frozen=True)
class PrivalovShadow:
    """Boundary arc of length 1-|lambda| centered at arg(lambda)."""

    lam: complex

    def __post_init__(self) -> None:
        r = abs(self.lam)
        if not (0.0 < r < 1.0):
            raise DomainError("shadow needs 0 < |lambda| < 1")

    @property
    def center(self) -> float:
        return cmath.phase(self.lam)

    @property
    def half_length(self) -> float:
        return 0.5 * (1.0 - abs(self.lam))

    @property
    def lo(self) -> float:
        return self.center - self.half_length

    @property
    def hi(self) -> float:
        return self.center + self.half_length

    def distance_from(self, z: complex) -> float:
        theta = cmath.phase(z) if z != 0 else 0.0
        if self.lo <= theta <= self.hi:
            return abs(abs(z) - 1.0)
        d_lo = abs(z - cmath.exp(1j * self.lo))
        d_hi = abs(z - cmath.exp(1j * self.hi))
        return min(d_lo, d_hi)


def herglotz_arc_integral(z: complex, lo: float, hi: float) -> complex:
    """Closed-form integral of (e^{it}+z)/(e^{it}-z) dt over [lo, hi].

    The antiderivative branch is kept continuous by splitting the arc until
    each piece turns the argument of e^{it}-z by less than pi/2.
    """
    if hi <= lo:
        raise UsageError("need lo < hi")
    d_arg = 0.0
    d_logmod = 0.0
    stack = [(lo, hi)]
    guard = 0
    while stack:
        a, b = stack.pop()
        ea = cmath.exp(1j * a) - z
        eb = cmath.exp(1j * b) - z
        if ea == 0 or eb == 0:
            raise DomainError("z lies on the arc")
        ratio = eb / ea
        if abs(cmath.phase(ratio)) > math.pi / 2 and b - a > 1e-12:
            mid = 0.5 * (a + b)
            stack.append((a, mid))
            stack.append((mid, b))
            guard += 1
            if guard > 10_000:
                raise NumericError("branch subdivision failed to terminate")
            continue
        d_arg += cmath.phase(ratio)
        d_logmod += math.log(abs(ratio))
    return complex(2.0 * d_arg - (hi - lo), -2.0 * d_logmod)


def poisson_arc_integral(z: complex, lo: float, hi: float) -> float:
    """Integral of the (unnormalized) Poisson kernel (1-|z|^2)/|e^{it}-z|^2 over [lo, hi]."""
    return herglotz_arc_integral(z, lo, hi).real


def herglotz_arc_integral_quad(z: complex, lo: float, hi: float) -> complex:
    """Quadrature route for the same integral (cross-check path)."""

    def kern(t: float) -> complex:
        e = cmath.exp(1j * t)
        return (e + z) / (e - z)

    re, _ = quad(lambda t: kern(t).real, lo, hi, epsrel=1e-9, epsabs=1e-13, limit=200)
    im, _ = quad(lambda t: kern(t).imag, lo, hi, epsrel=1e-9, epsabs=1e-13, limit=200)
    return complex(re, im)


def c_lambda(lam: complex) -> float:
    """Normalizing constant with 1/c = Poisson integral over the shadow at lambda.

    Closed form: 1/c = 4 arctan( (1+r)/(1-r) * tan((1-r)/4) ), r = |lambda|;
    a geometric argument gives 1/c >= 4/5.
    """
    lam = complex(lam)
    r = abs(lam)
    if not (0.0 < r < 1.0):
        raise DomainError("c_lambda needs 0 < |lambda| < 1")
    inv = 4.0 * math.atan((1.0 + r) / (1.0 - r) * math.tan(0.25 * (1.0 - r)))
    return 1.0 / inv


def c_lambda_inv_quad(lam: complex) -> float:
    """Quadrature cross-check of the reciprocal constant."""
    sh = PrivalovShadow(lam)
    return poisson_arc_integral(lam, sh.lo, sh.hi)


def log_f_lambda(lam: complex, z: complex) -> complex:
    """log f_lambda(z): Herglotz integral over the shadow, scaled by c_lambda."""
    lam = complex(lam)
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("f_lambda needs |z| < 1")
    if lam == 1.0:
        raise DomainError("lambda = 1 is not allowed")
    sh = PrivalovShadow(lam)
    if sh.distance_from(z) < 1e-12:
        raise NumericError("z is within 1e-12 of the shadow arc")
    ratio = (1.0 - abs(lam) ** 2) / abs(1.0 - lam) ** 2
    return c_lambda(lam) * ratio * herglotz_arc_integral(z, sh.lo, sh.hi)


def f_lambda(lam: complex, z: complex) -> complex:
    """The shadow outer function; |f_lambda(lambda) S(lambda)| = 1."""
    lf = log_f_lambda(lam, z)
    if lf.real > _EXP_CAP:
        raise NumericError("f_lambda magnitude overflows; evaluate log_f_lambda instead")
    return cmath.exp(lf)


def h_lambda(weight: wts.WeightSpec, bset: bnd.BoundarySet, lam: complex, z: complex) -> float:
    """Comparison function H_lambda(z); satisfies
    |f_lambda(z) S(z)| exp(-Lambda(dist(z,E))) = exp(H_lambda(z))."""
    lam = complex(lam)
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("h_lambda needs |z| < 1")
    sh = PrivalovShadow(lam)
    ratio_l = (1.0 - abs(lam) ** 2) / abs(1.0 - lam) ** 2
    p_term = c_lambda(lam) * ratio_l * poisson_arc_integral(z, sh.lo, sh.hi)
    ratio_z = (1.0 - abs(z) ** 2) / abs(1.0 - z) ** 2
    lam_term = wts.eval_lambda(weight, min(bnd.distance_to_set(bset, z), 2.0))
    return p_term - ratio_z - lam_term


# ---------------------------------------------------------------------------
# comparison regions


@dataclass(frozen=True)
class GammaRegionSpec:
    """Region where (1-|l|^2)/|1-l|^2 <= a Lambda(A dist(lambda, E))."""

    weight: wts.WeightSpec
    bset: bnd.BoundarySet
    a: float = 2.0 / (5.0 * math.pi)
    A: float | None = None

    def __post_init__(self) -> None:
        if self.a <= 0.0:
            raise DomainError("a must be positive")
        if self.A is not None and self.A < 1.0:
            raise DomainError("A must be >= 1")

    @property
    def big_a(self) -> float:
        if self.A is not None:
            return float(self.A)
        return 1000.0 if self.bset.kind == "full" else 100.0


def in_gamma_region(spec: GammaRegionSpec, lam: complex) -> bool:
    """Membership predicate; Lambda's argument is clamped at 2 (totality)."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError("membership needs |lambda| < 1")
    if lam == 1.0:
        return False
    lhs = (1.0 - abs(lam) ** 2) / abs(1.0 - lam) ** 2
    d = bnd.distance_to_set(spec.bset, lam)
    rhs = spec.a * wts.eval_lambda(spec.weight, min(spec.big_a * d, 2.0))
    return lhs <= rhs


def case_tag(spec: GammaRegionSpec, lam: complex, z: complex) -> str:
    """Which case of the sign analysis a (lambda, z) pair falls into."""
    d_lam = bnd.distance_to_set(spec.bset, lam)
    d_z = bnd.distance_to_set(spec.bset, z)
    if spec.big_a * d_lam >= d_z:
        return "case1"
    if abs(1.0 - z) >= 6.0 * abs(1.0 - lam):
        return "case2"
    return "case3"


# ---------------------------------------------------------------------------
# outer witness for the convergent case


def gamma_integral_is_convergent(weight: wts.WeightSpec, bset: bnd.BoundarySet,
                                 upper: float | None = None) -> bool:
    """Cauchy-style guard on the criterion integral of gamma(theta)/theta^2."""
    cut = weight.pure_cut
    upper = cut * 0.9 if upper is None else float(upper)
    eps = [upper * math.exp(-8.0 * k) for k in range(1, 4)]
    partials = [geo.gamma_criterion_partial(weight, bset, e, upper) for e in eps]
    d1 = partials[1] - partials[0]
    d2 = partials[2] - partials[1]
    return d2 < 0.6 * max(d1, 1e-12)


def keldysh_log_boundary(weight: wts.WeightSpec, bset: bnd.BoundarySet, theta: float) -> float:
    """Boundary data gamma(theta)/theta^2 of the unit-amplitude witness.

    The weight is first rescaled so Lambda(1) < 1/10 (the smallness
    normalization the domain construction assumes; gamma then exists for
    every theta up to pi, and all divergence criteria are scale-robust).
    """
    if abs(theta) < 1e-8:
        return 0.0
    sol = geo.solve_gamma(weight, bset, theta, normalize_lambda1=True)
    return sol.gamma / theta**2


def _witness_poisson(weight: wts.WeightSpec, bset: bnd.BoundarySet, w: complex,
                     herglotz: bool = False):
    """Poisson (or Herglotz) integral of the unit-amplitude boundary data at w."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise DomainError("witness evaluation needs |w| < 1")
    theta_w = cmath.phase(w)
    delta = 1.0 - abs(w)

    def data(theta: float) -> float:
        return keldysh_log_boundary(weight, bset, theta)

    def side(sign: float):
        # integrate over theta = sign * e^{-v}, v from log(1/pi) upward
        def integrand(v: float):
            theta = sign * math.exp(-v)
            e = cmath.exp(1j * theta)
            kern = (e + w) / (e - w)
            val = data(theta) * abs(theta)
            return (kern * val) if herglotz else (kern.real * val)

        pts = []
        if sign * theta_w > 0:
            base = abs(theta_w)
            for k in (0.2, 1.0, 5.0, 25.0):
                t = base + k * delta
                if 1e-8 < t < math.pi:
                    pts.append(math.log(1.0 / t))
                t = base - k * delta
                if 1e-8 < t < math.pi:
                    pts.append(math.log(1.0 / t))
        v_lo, v_hi = math.log(1.0 / math.pi), math.log(1e8)
        pts = sorted(p for p in set(pts) if v_lo < p < v_hi)
        if herglotz:
            re, _ = quad(lambda v: integrand(v).real, v_lo, v_hi, epsrel=1e-8,
                         epsabs=1e-12, limit=400, points=pts or None)
            im, _ = quad(lambda v: integrand(v).imag, v_lo, v_hi, epsrel=1e-8,
                         epsabs=1e-12, limit=400, points=pts or None)
            return complex(re, im)
        val, _ = quad(integrand, v_lo, v_hi, epsrel=1e-8, epsabs=1e-12,
                      limit=400, points=pts or None)
        return val

    return (side(1.0) + side(-1.0)) / (2.0 * math.pi)


def keldysh_outer(weight: wts.WeightSpec, bset: bnd.BoundarySet, amplitude: float,
                  w: complex) -> complex:
    """Outer function with boundary modulus exp(amplitude * gamma(theta)/theta^2).

    Requires the criterion integral to converge (guard: Cauchy test on its
    partials); the boundary data is then integrable and the Herglotz integral
    defines an outer function.
    """
    if amplitude < 0.0:
        raise DomainError("amplitude must be nonnegative")
    if amplitude == 0.0:
        return complex(1.0, 0.0)
    if not gamma_integral_is_convergent(weight, bset):
        raise DomainError("criterion integral diverges; no outer witness exists")
    weight = geo.normalized_for_lambda1(weight)
    val = _witness_poisson(weight, bset, w, herglotz=True)
    lf = amplitude * val
    if lf.real > _EXP_CAP:
        raise NumericError("witness magnitude overflows at this amplitude")
    return cmath.exp(lf)


def witness_amplitude_search(weight: wts.WeightSpec, bset: bnd.BoundarySet,
                             thetas, max_power: int = 10) -> int:
    """Smallest dyadic amplitude dominating the required boundary growth.

    At each sampled boundary point w = (1 - gamma) e^{i theta} the witness
    must satisfy log|F(w)| > (1-|w|^2)/|1-w|^2 + Lambda(dist(w, E)).  log|F|
    is linear in the amplitude, so one Poisson integral per sample suffices.
    """
    if not gamma_integral_is_convergent(weight, bset):
        raise DomainError("criterion integral diverges; no outer witness exists")
    weight = geo.normalized_for_lambda1(weight)
    need = 1.0
    for theta in thetas:
        sol = geo.solve_gamma(weight, bset, theta)
        w = (1.0 - sol.gamma) * cmath.exp(1j * theta)
        base = _witness_poisson(weight, bset, w, herglotz=False)
        rhs = (1.0 - abs(w) ** 2) / abs(1.0 - w) ** 2 + wts.eval_lambda(
            weight, min(bnd.distance_to_set(bset, w), 2.0))
        if base <= 0.0:
            raise NumericError("witness Poisson integral is not positive")
        need = max(need, rhs / base)
    power = max(0, int(math.ceil(math.log2(need * (1.0 + 1e-12)))))
    if power > max_power:
        raise NumericError(f"no amplitude up to 2^{max_power} dominates the boundary growth")
    return 1 << power
