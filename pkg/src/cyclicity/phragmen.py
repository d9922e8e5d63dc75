"""Cross-section lengths, growth integrals, and a Monte Carlo harmonic measure oracle.

Two unbounded domain shapes are supported:

* cartesian: G = {x + iy : x >= 0, |y| <= phi(x)} for an increasing profile phi
* sector:    G = {R e^{i theta} : |theta| < pi/2 - phi(R)} for an opening
             deficiency phi(R) in [0, pi/2)

The cross-section length s(r) of the circle |z| = r inside G feeds the
comparison quantity sigma(rho) = exp(pi * int_1^rho dr / s(r)); the harmonic
measure of the circular cross-section at |z| = rho, seen from an interior
point, is estimated independently by walk-on-spheres so the exponential decay
rate exp(-pi int dr/s) can be validated against simulation.

Walk-on-spheres steps use inscribed-disc radii that are exact for half
planes, constant-opening sectors, the wedge |y| <= x, and the half strip, and
conservative (Lipschitz cone or monotone-opening) lower bounds otherwise;
a lower bound keeps the walk law exact, it only costs steps.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NumericError, UsageError

VARIANTS = ("cartesian", "sector")
PHI_NAMES = ("x", "x2", "const1", "const", "invlog")

_WOS_TOL_FACTOR = 1e-4
_WOS_MAX_STEPS = 100_000
_BLOCK = 4096


@dataclass(frozen=True)
class DomainProfile:
    variant: str
    phi: str
    value: float | None = None  # constant for phi == "const"

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}")
        if self.phi not in PHI_NAMES:
            raise DomainError(f"unknown phi handle {self.phi!r}")
        if self.phi == "const":
            if self.value is None or self.value < 0.0:
                raise DomainError("phi 'const' needs a nonnegative value")
            if self.variant == "sector" and self.value >= math.pi / 2:
                raise DomainError("sector opening deficiency must be < pi/2")
        elif self.value is not None:
            raise DomainError("value parameter only valid for phi 'const'")
        if self.variant == "sector" and self.phi in ("x", "x2"):
            raise DomainError(f"phi {self.phi!r} is a cartesian profile")
        if self.variant == "cartesian" and self.phi == "invlog":
            raise DomainError("phi 'invlog' is a sector profile")

    # -- profile function ----------------------------------------------------

    def phi_at(self, v: float) -> float:
        if self.phi == "x":
            return v
        if self.phi == "x2":
            return v * v
        if self.phi == "const1":
            return 1.0
        if self.phi == "const":
            return float(self.value)
        # opening deficiency 1/log R, valid where it is < pi/2
        if v <= self.r_min():
            raise DomainError(f"invlog profile needs R > {self.r_min()!r}")
        return 1.0 / math.log(v)

    def phi_prime(self, v: float) -> float:
        if self.phi == "x":
            return 1.0
        if self.phi == "x2":
            return 2.0 * v
        if self.phi in ("const1", "const"):
            return 0.0
        return -1.0 / (v * math.log(v) ** 2)

    def r_min(self) -> float:
        """Radius below which the sector-variant domain is empty."""
        if self.variant == "sector" and self.phi == "invlog":
            return math.exp(2.0 / math.pi)
        return 0.0

    def contains(self, z: complex) -> bool:
        x, y = z.real, z.imag
        if self.variant == "cartesian":
            return x >= 0.0 and abs(y) <= self.phi_at(x)
        r = abs(z)
        if r <= self.r_min():
            return False
        return abs(math.atan2(y, x)) < math.pi / 2 - self.phi_at(r)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"variant": self.variant, "phi": self.phi}
        if self.value is not None:
            out["params"] = {"value": self.value}
        return out

    @staticmethod
    def from_json(obj: dict) -> "DomainProfile":
        if not isinstance(obj, dict):
            raise UsageError("profile config must be a JSON object")
        allowed = {"variant", "phi", "params"}
        unknown = set(obj) - allowed
        if unknown:
            raise UsageError(f"unknown profile config fields: {sorted(unknown)}")
        params = obj.get("params", {})
        if not isinstance(params, dict) or set(params) - {"value"}:
            raise UsageError("profile params may only carry 'value'")
        return DomainProfile(obj.get("variant"), obj.get("phi"), value=params.get("value"))

    @staticmethod
    def half_plane() -> "DomainProfile":
        return DomainProfile("sector", "const", value=0.0)

    @staticmethod
    def wedge() -> "DomainProfile":
        return DomainProfile("cartesian", "x")

    @staticmethod
    def half_strip() -> "DomainProfile":
        return DomainProfile("cartesian", "const1")


# ---------------------------------------------------------------------------
# cross sections and growth integrals


def arc_length_s(profile: DomainProfile, r: float) -> float:
    """Length s(r) of the cross-section arc of |z| = r inside the domain.

    Cartesian: with x(r) solving x^2 + phi(x)^2 = r^2 (the left side is
    increasing), s(r) = r (pi - 2 arctan(x / phi(x))).  Sector:
    s(r) = r (pi - 2 phi(r)).
    """
    r = float(r)
    if r <= 0.0:
        raise DomainError("r must be positive")
    if profile.variant == "sector":
        if r <= profile.r_min():
            raise DomainError(f"r={r!r} below the profile validity radius")
        return r * (math.pi - 2.0 * profile.phi_at(r))
    if r <= profile.phi_at(0.0):
        raise DomainError(f"circle r={r!r} does not cross the domain")
    lo, hi = 0.0, r
    f_hi = hi * hi + profile.phi_at(hi) ** 2 - r * r
    if f_hi < 0.0:
        raise NumericError("bracketing failed for the cross-section root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * mid + profile.phi_at(mid) ** 2 < r * r:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * r:
            break
    x = 0.5 * (lo + hi)
    ph = profile.phi_at(x)
    if ph <= 0.0:
        return math.pi * r  # degenerate: boundary pinches to the axis
    return r * (math.pi - 2.0 * math.atan(x / ph))


def sigma(profile: DomainProfile, rho: float) -> float:
    """Comparison quantity exp(pi int_1^rho dr / s(r)); sigma(1) = 1."""
    rho = float(rho)
    lo = max(1.0, profile.r_min() * (1.0 + 1e-9))
    if rho < lo:
        raise DomainError(f"rho must be >= {lo!r}")
    if rho == lo:
        return 1.0
    val, _ = quad(lambda r: math.pi / arc_length_s(profile, r), lo, rho,
                  epsrel=1e-6, epsabs=1e-12, limit=300)
    return math.exp(val)


def pl_divergence_integrand(profile: DomainProfile, point: float) -> float:
    """Integrand of the growth-divergence condition for the profile.

    Cartesian: x phi'(x) / phi(x)^2; sector: phi(R)/R.  Partial integrals of
    this at geometric checkpoints feed the criterion module's estimator.
    """
    v = float(point)
    if v <= 0.0:
        raise DomainError("point must be positive")
    if profile.variant == "sector":
        return profile.phi_at(v) / v
    ph = profile.phi_at(v)
    if ph <= 0.0:
        raise DomainError("profile vanishes at this point")
    return v * profile.phi_prime(v) / ph**2


def pl_divergence_partials(profile: DomainProfile, checkpoints) -> np.ndarray:
    """Partial integrals of the divergence integrand from a base point up to
    each checkpoint (increasing outer limits)."""
    pts = [float(p) for p in checkpoints]
    if any(p2 <= p1 for p1, p2 in zip(pts, pts[1:])):
        raise UsageError("checkpoints must be strictly increasing")
    base = max(profile.r_min() * 1.5, 2.0)
    if pts[0] <= base:
        raise UsageError(f"checkpoints must exceed the base point {base!r}")
    out, acc, prev = [], 0.0, base
    for p in pts:
        val, _ = quad(lambda v: pl_divergence_integrand(profile, v), prev, p,
                      epsrel=1e-8, epsabs=1e-14, limit=200)
        acc += val
        prev = p
        out.append(acc)
    return np.asarray(out)


# ---------------------------------------------------------------------------
# walk-on-spheres harmonic measure


def _boundary_distance(profile: DomainProfile, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lower bound for the distance to the lateral boundary (vectorized)."""
    if profile.variant == "sector":
        r = np.hypot(x, y)
        theta = np.abs(np.arctan2(y, x))
        if profile.phi == "const":
            beta = math.pi / 2 - float(profile.value)
            return r * np.sin(np.minimum(beta - theta, math.pi / 2))
        # invlog: opening widens with R; inside the annulus R > r/2 the domain
        # contains the static sector with the opening at r/2, and the rest of
        # the boundary is at least r/2 away
        lower = np.maximum(profile.r_min() * 1.0001, r / 2.0)
        beta_lo = math.pi / 2 - 1.0 / np.log(np.maximum(lower, 1.0 + 1e-9))
        ang = r * np.sin(np.clip(beta_lo - theta, 0.0, math.pi / 2))
        return np.minimum(ang, np.maximum(r - lower, 0.0))
    if profile.phi == "const1":
        return np.minimum(x, 1.0 - np.abs(y))
    if profile.phi == "x":
        # the wedge |y| <= x is the sector of half-opening pi/4
        r = np.hypot(x, y)
        theta = np.abs(np.arctan2(y, x))
        return r * np.sin(np.clip(math.pi / 4 - theta, 0.0, math.pi / 2))
    # phi = x^2: cone bound with the local slope over a window of size gap
    gap = np.maximum(x * x - np.abs(y), 0.0)
    slope = 2.0 * (x + gap)
    return gap / np.sqrt(1.0 + slope * slope)


@dataclass(frozen=True)
class HarmonicMeasureEstimate:
    mean: float
    standard_error: float
    paths: int
    seed: int
    rho: float
    capped_paths: int


def _simulate_block(profile: DomainProfile, z0: complex, rho: float, n: int,
                    seed: int, block_index: int, tol: float):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block_index,))))
    x = np.full(n, z0.real)
    y = np.full(n, z0.imag)
    alive = np.ones(n, dtype=bool)
    hit = np.zeros(n, dtype=bool)
    capped = 0
    for _ in range(_WOS_MAX_STEPS):
        if not alive.any():
            break
        xa, ya = x[alive], y[alive]
        d_side = _boundary_distance(profile, xa, ya)
        d_circ = rho - np.hypot(xa, ya)
        step = np.minimum(d_side, d_circ)
        absorbed = step < tol
        if absorbed.any():
            idx = np.flatnonzero(alive)[absorbed]
            hit[idx] = d_circ[absorbed] <= d_side[absorbed]
            keep = ~absorbed
            ang = rng.uniform(0.0, 2.0 * math.pi, size=int(keep.sum()))
            x[np.flatnonzero(alive)[keep]] = xa[keep] + step[keep] * np.cos(ang)
            y[np.flatnonzero(alive)[keep]] = ya[keep] + step[keep] * np.sin(ang)
            alive[idx] = False
        else:
            ang = rng.uniform(0.0, 2.0 * math.pi, size=xa.size)
            x[alive] = xa + step * np.cos(ang)
            y[alive] = ya + step * np.sin(ang)
    else:
        capped = int(alive.sum())  # leftovers count as lateral-boundary hits
    return int(hit.sum()), capped


def harmonic_measure_mc(profile: DomainProfile, z0: complex, rho: float,
                        paths: int, seed: int, threads: int | None = None) -> HarmonicMeasureEstimate:
    """Probability that Brownian motion from z0 exits through |z| = rho.

    Walk-on-spheres with absorption tolerance 1e-4 * rho; deterministic for a
    given seed: every block of 4096 paths draws from its own derived
    generator and blocks are reduced in a fixed order, so thread scheduling
    cannot change the estimate.
    """
    z0 = complex(z0)
    rho = float(rho)
    paths = int(paths)
    if paths < 10_000:
        raise UsageError("need at least 1e4 paths")
    if not profile.contains(z0):
        raise DomainError(f"z0={z0!r} is not inside the domain")
    if abs(z0) >= rho / 2.0:
        raise DomainError("need |z0| < rho/2")
    tol = _WOS_TOL_FACTOR * rho
    blocks = [(i, min(_BLOCK, paths - i * _BLOCK)) for i in range((paths + _BLOCK - 1) // _BLOCK)]

    def run(block):
        i, n = block
        return _simulate_block(profile, z0, rho, n, seed, i, tol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    hits = sum(r[0] for r in results)
    capped = sum(r[1] for r in results)
    p = hits / paths
    se = math.sqrt(max(p * (1.0 - p), 1.0 / paths) / paths)
    return HarmonicMeasureEstimate(mean=p, standard_error=se, paths=paths,
                                   seed=seed, rho=rho, capped_paths=capped)
