"""Arithmetic on a multiplicative elliptic curve C*/<tau> and its degree-2 quotient.

The curve is the quotient of C* by the subgroup generated by a multiplier
tau with |tau| > 1.  Every class has a unique representative in the
half-open fundamental annulus 1 <= |z| < |tau|; all point arithmetic is
done on these canonical representatives.  The x-coordinate of the
quotient by inversion (z ~ 1/z) is computed from the bilateral series

    x(u) = sum_{n in Z} q^n u / (1 - q^n u)^2  -  2 sum_{n >= 1} q^n / (1 - q^n)^2

with q = 1/tau, which converges geometrically since |q| < 1 and has its
only pole (in the annulus) at the identity class u = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

INF = complex(math.inf, 0.0)


def is_infinite(z: complex) -> bool:
    return math.isinf(z.real) or math.isinf(z.imag)


class SeriesCapError(RuntimeError):
    """Raised when the series term cap is hit before the tail bound is met."""


@dataclass(frozen=True)
class CurveParam:
    """Multiplier of the curve C*/<tau>; requires |tau| > 1."""

    tau: complex

    def __post_init__(self) -> None:
        if not abs(complex(self.tau)) > 1.0:
            raise ValueError(f"curve multiplier must satisfy |tau| > 1, got {self.tau!r}")

    @property
    def q(self) -> complex:
        return 1.0 / self.tau


@dataclass(frozen=True)
class Tolerance:
    """Numeric tolerance: absolute comparison radius and a series term cap."""

    eps: float = 1e-9
    series_terms: int = 4096

    def __post_init__(self) -> None:
        if not self.eps > 0.0:
            raise ValueError("tolerance eps must be positive")
        if self.series_terms <= 0:
            raise ValueError("series term cap must be positive")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class TatePoint:
    """A point of C*/<tau>, stored by its canonical annulus representative.

    Construction normalises any nonzero complex number into the
    fundamental annulus, so TatePoint(z, curve) and canonicalize(z, curve)
    agree.
    """

    rep: complex
    curve: CurveParam

    def __post_init__(self) -> None:
        z = complex(self.rep)
        if z == 0 or is_infinite(z):
            raise ValueError("points of C*/<tau> come from nonzero finite complex numbers")
        object.__setattr__(self, "rep", _canonical_rep(z, self.curve))


def _canonical_rep(z: complex, curve: CurveParam) -> complex:
    tau = curve.tau
    at = abs(tau)
    # initial guess from logs, then fix float fences at the annulus boundary
    k = -math.floor(math.log(abs(z)) / math.log(at))
    if k:
        z = z * tau**k
    while abs(z) < 1.0:
        z *= tau
    while abs(z) >= at:
        z /= tau
    return z


def canonicalize(z: complex, curve: CurveParam) -> TatePoint:
    """Canonical annulus representative of z; rejects z = 0."""
    return TatePoint(z, curve)


def identity(curve: CurveParam) -> TatePoint:
    return TatePoint(1.0 + 0.0j, curve)


def _require_same_curve(a: TatePoint, b: TatePoint) -> None:
    if a.curve != b.curve:
        raise ValueError("points lie on curves with different multipliers")


def group_mul(a: TatePoint, b: TatePoint) -> TatePoint:
    _require_same_curve(a, b)
    return TatePoint(a.rep * b.rep, a.curve)


def group_inv(a: TatePoint) -> TatePoint:
    return TatePoint(1.0 / a.rep, a.curve)


def group_pow(a: TatePoint, n: int) -> TatePoint:
    if n == 0:
        return identity(a.curve)
    return TatePoint(a.rep**n, a.curve)


def class_distance(a: TatePoint, b: TatePoint) -> float:
    """Distance between classes; wraps across the annulus boundary."""
    _require_same_curve(a, b)
    tau = a.curve.tau
    return min(
        abs(a.rep - b.rep),
        abs(a.rep * tau - b.rep),
        abs(a.rep - b.rep * tau),
    )


def distance_to_identity(a: TatePoint) -> float:
    return class_distance(a, identity(a.curve))


def points_equal(a: TatePoint, b: TatePoint, tol: Tolerance = DEFAULT_TOL) -> bool:
    return class_distance(a, b) <= tol.eps


def two_torsion(curve: CurveParam) -> list[TatePoint]:
    """The four classes killed by doubling: 1, -1 and both square roots of tau."""
    s = cmath.sqrt(curve.tau)
    return [
        identity(curve),
        TatePoint(-1.0 + 0.0j, curve),
        TatePoint(s, curve),
        TatePoint(-s, curve),
    ]


@lru_cache(maxsize=None)
def _inversion_constant(tau: complex, eps: float, cap: int) -> complex:
    """The u-independent part 2 sum_{n>=1} q^n/(1-q^n)^2, to absolute error eps."""
    q = 1.0 / tau
    aq = abs(q)
    total = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    for n in range(1, cap + 1):
        qn *= q
        total += qn / (1.0 - qn) ** 2
        rho = aq ** (n + 1)
        if rho < 0.9 and rho / ((1.0 - aq) * (1.0 - rho) ** 2) < eps / 2.0:
            return 2.0 * total
    raise SeriesCapError(f"series cap {cap} hit before tail bound {eps} was met")


def _x_series(u: complex, curve: CurveParam, tol: Tolerance, want_derivative: bool = False):
    """Bilateral sum for the quotient x-coordinate at a raw representative u.

    Converges on all of C* away from the identity orbit u in <tau>.  Terms
    for +n and -n are added in pairs; the loop stops once the geometric
    tail bound for both half-sums drops below eps/2.
    """
    if u == 0:
        raise ValueError("x-series needs a nonzero argument")
    q = curve.q
    aq = abs(q)
    au = abs(u)
    value = u / (1.0 - u) ** 2
    deriv = (1.0 + u) / (1.0 - u) ** 3
    qn = 1.0 + 0.0j
    for n in range(1, tol.series_terms + 1):
        qn *= q
        for g in (qn, 1.0 / qn):
            gu = g * u
            value += gu / (1.0 - gu) ** 2
            if want_derivative:
                deriv += g * (1.0 + gu) / (1.0 - gu) ** 3
        rho_p = aq ** (n + 1) * au
        rho_m = aq ** (n + 1) / au
        if rho_p < 0.9 and rho_m < 0.9:
            bound = rho_p / ((1.0 - aq) * (1.0 - rho_p) ** 2) + rho_m / (
                (1.0 - aq) * (1.0 - rho_m) ** 2
            )
            if bound < tol.eps / 2.0:
                break
    else:
        raise SeriesCapError(
            f"series cap {tol.series_terms} hit before tail bound {tol.eps} was met"
        )
    const = _inversion_constant(curve.tau, tol.eps, tol.series_terms)
    if want_derivative:
        return value - const, deriv
    return value - const


def quotient_x(alpha: TatePoint, tol: Tolerance = DEFAULT_TOL) -> complex:
    """x-coordinate of the inversion quotient; infinity exactly at the identity class."""
    if distance_to_identity(alpha) <= tol.eps:
        return INF
    return _x_series(alpha.rep, alpha.curve, tol)


def quotient_x_at(u: complex, curve: CurveParam, tol: Tolerance = DEFAULT_TOL) -> complex:
    """x evaluated at an arbitrary raw representative (no canonicalisation).

    Used to probe the invariances x(u) = x(1/u) = x(qu) off the canonical
    annulus.  The caller is responsible for staying away from the pole
    orbit u in <tau>.
    """
    return _x_series(u, curve, tol)


def h1_indicator(alpha: TatePoint, tol: Tolerance = DEFAULT_TOL) -> int:
    """1 when the class is trivial at tolerance (the cohomology jump), else 0."""
    return 1 if distance_to_identity(alpha) <= tol.eps else 0


def x_preimages(
    value: complex,
    curve: CurveParam,
    tol: Tolerance = DEFAULT_TOL,
    *,
    grid: int = 44,
    starts: int = 12,
    iters: int = 90,
) -> list[TatePoint]:
    """Numerically find all annulus classes with x = value.

    The quotient by inversion is 2:1, so the preimage set of a finite
    value is an inversion pair {u, u^{-1}}, collapsing to a single class
    exactly at the four branch values: the images of the two-torsion
    classes, with infinity (the identity class) among them.  Values that
    agree with a branch value within series accuracy are therefore
    resolved to the corresponding two-torsion class directly — near a
    double root the function is locally quadratic, and residual-based
    root finding alone cannot separate one class from two there.  Away
    from the branch values a single root is located by Newton iteration
    from the best grid seeds and completed with its inverse.
    """
    tau = curve.tau
    at = abs(tau)
    if is_infinite(value):
        return [identity(curve)]

    matched: list[TatePoint] = []
    for t in two_torsion(curve):
        if distance_to_identity(t) <= tol.eps:
            continue  # its value is the pole, never a finite target
        if abs(_x_series(t.rep, curve, tol) - value) <= 4.0 * tol.eps * (1.0 + abs(value)):
            matched.append(t)
    if matched:
        return matched

    seeds: list[tuple[float, complex]] = []
    for i in range(grid):
        radius = at ** ((i + 0.5) / grid)
        for j in range(grid):
            theta = 2.0 * math.pi * (j + 0.5) / grid
            u = radius * cmath.exp(1j * theta)
            try:
                m = abs(_x_series(u, curve, tol) - value)
            except (ZeroDivisionError, OverflowError):
                continue
            if math.isfinite(m):
                seeds.append((m, u))
    seeds.sort(key=lambda t: t[0])

    # spread the Newton starts: skip seeds too close to one already taken
    chosen: list[complex] = []
    for _, u in seeds:
        if all(abs(u - v) > 0.25 for v in chosen):
            chosen.append(u)
        if len(chosen) >= starts:
            break

    conv = max(tol.eps * 1e-3, 1e-13)
    for u in chosen:
        ok = False
        for _ in range(iters):
            if abs(u) < 0.5 or abs(u) > 2.0 * at:
                u = _canonical_rep(u, curve)
            try:
                x, dx = _x_series(u, curve, tol, want_derivative=True)
            except (ZeroDivisionError, OverflowError):
                break
            f = x - value
            if abs(f) <= conv * (1.0 + abs(value)):
                ok = True
                break
            if dx == 0:
                break
            u = u - f / dx
        if not ok:
            continue
        pt = TatePoint(u, curve)
        inv = group_inv(pt)
        if class_distance(pt, inv) <= max(10.0 * math.sqrt(tol.eps), 1e-6):
            return [pt]
        return [pt, inv]
    return []
