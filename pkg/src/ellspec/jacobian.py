"""Sections and bisections of the relative Jacobian B x T*.

Sections are translates of homomorphisms: a constant in T* together with
an integer vector in the hom lattice.  Two distinct sections meet in
deg(hom difference) points, the degree of the covering map induced by
the difference.  The determinant involution (b, l) -> (b, delta_b / l)
folds the Jacobian onto a ruled surface; bisections invariant under it
are either a pair of sections exchanged by the involution or a genuine
double cover of the base, stored over a rational base by the trace map
of its fibrewise quadratic relation l^2 - t(b) l + delta_b = 0.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .tate import (
    DEFAULT_TOL,
    INF,
    CurveParam,
    TatePoint,
    Tolerance,
    class_distance,
    group_pow,
    identity,
    is_infinite,
    points_equal,
)
from .surface import ChernData, HomLattice, NSClass, SurfaceData, discriminant, filtrable_bound, self_intersection


@dataclass(frozen=True)
class SectionOfJ:
    """Section of the Jacobian: constant part in T* plus a hom vector."""

    constant: TatePoint
    hom: tuple[int, ...]


def zero_section(surface: SurfaceData) -> SectionOfJ:
    return SectionOfJ(identity(surface.fibre), (0,) * surface.lattice.rank)


def constant_section(surface: SurfaceData, value: complex) -> SectionOfJ:
    return SectionOfJ(TatePoint(value, surface.fibre), (0,) * surface.lattice.rank)


def section_for_class(surface: SurfaceData, cls: NSClass, constant: complex = 1.0) -> SectionOfJ:
    """A section whose hom part realises the given NS class."""
    if len(cls.hom) != surface.lattice.rank:
        raise ValueError("class does not match the lattice rank")
    return SectionOfJ(TatePoint(constant, surface.fibre), cls.hom)


def _power_exponent(surface: SurfaceData, hom: tuple[int, ...]) -> int:
    if surface.hom_exponents is None:
        if any(hom):
            raise ValueError("surface carries no concrete generators for hom sections")
        return 0
    return sum(v * n for v, n in zip(hom, surface.hom_exponents))


def base_point(surface: SurfaceData, b) -> complex | TatePoint:
    """Normalise a base point: extended complex for g=0, annulus class for g=1."""
    g = surface.base.genus
    if g == 0:
        return complex(b) if not isinstance(b, TatePoint) else b.rep
    if g == 1:
        if isinstance(b, TatePoint):
            if b.curve != surface.base.tate:
                raise ValueError("base point lies on the wrong curve")
            return b
        return TatePoint(complex(b), surface.base.tate)
    raise ValueError("abstract bases (g >= 2) have no point arithmetic")


def section_value(section: SectionOfJ, b, surface: SurfaceData) -> TatePoint:
    """Evaluate a section at a base point (rational or Tate base only)."""
    g = surface.base.genus
    if g == 0:
        if any(section.hom):
            raise ValueError("over a rational base every section is constant")
        return section.constant
    if g == 1:
        pt = base_point(surface, b)
        exp = _power_exponent(surface, section.hom)
        value = section.constant.rep * (pt.rep**exp if exp else 1.0)
        return TatePoint(value, surface.fibre)
    raise ValueError("abstract bases (g >= 2) have no point arithmetic")


def sections_equal(s1: SectionOfJ, s2: SectionOfJ, tol: Tolerance = DEFAULT_TOL) -> bool:
    return s1.hom == s2.hom and points_equal(s1.constant, s2.constant, tol)


def section_pairing(s1: SectionOfJ, s2: SectionOfJ, lattice: HomLattice) -> int:
    """Intersection number of two sections: deg of the hom difference.

    Parallel translates (equal hom parts) are disjoint or equal and pair
    to zero; otherwise the count is the degree of the difference map,
    kernel directions included.
    """
    if len(s1.hom) != len(s2.hom):
        raise ValueError("sections live in different lattices")
    diff = tuple(a - b for a, b in zip(s1.hom, s2.hom))
    return lattice.degree(diff)


def involution_on_section(section: SectionOfJ, delta: SectionOfJ) -> SectionOfJ:
    """Image of a section under (b, l) -> (b, delta_b / l)."""
    const = TatePoint(delta.constant.rep / section.constant.rep, delta.constant.curve)
    hom = tuple(d - s for d, s in zip(delta.hom, section.hom))
    return SectionOfJ(const, hom)


def involution_apply(lam: TatePoint, b, delta: SectionOfJ, surface: SurfaceData) -> TatePoint:
    """Fibrewise involution at base point b."""
    d = section_value(delta, b, surface)
    return TatePoint(d.rep / lam.rep, lam.curve)


@dataclass(frozen=True)
class RationalMap:
    """Rational function of the base coordinate; coefficients low to high."""

    num: tuple[complex, ...]
    den: tuple[complex, ...] = (1.0 + 0.0j,)

    def __post_init__(self) -> None:
        num = _trim(self.num)
        den = _trim(self.den)
        if not den:
            raise ValueError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def degree(self) -> int:
        return max(len(self.num) - 1 if self.num else 0, len(self.den) - 1)

    def __call__(self, b: complex) -> complex:
        if is_infinite(complex(b)):
            dn = len(self.num) - 1 if self.num else -1
            dd = len(self.den) - 1
            if dn > dd:
                return INF
            if dn < dd:
                return 0.0 + 0.0j
            return self.num[-1] / self.den[-1]
        p = _horner(self.num, b)
        q = _horner(self.den, b)
        if q == 0:
            return INF
        return p / q


def _trim(coeffs: tuple[complex, ...]) -> tuple[complex, ...]:
    out = [complex(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _horner(coeffs: tuple[complex, ...], b: complex) -> complex:
    total = 0.0 + 0.0j
    for c in reversed(coeffs):
        total = total * b + c
    return total


@dataclass(frozen=True)
class DoubleCoverData:
    """Irreducible bisection data: fibre values over b are the roots of
    l^2 - trace(b) l + norm(b) = 0.

    When the norm coefficient map is omitted, the constant term is read
    off the accompanying determinant section's canonical representative.
    A cover built by inverting another one needs the explicit map: the
    honest constant is the reciprocal of the original representative,
    which generally falls outside the fundamental annulus, and rescaling
    it back in would shift the root classes by a half period.

    The coefficient maps are concrete only over a rational base; for
    g >= 1 the cover is declared through its branch points and
    self-intersection.
    """

    trace: RationalMap | None = None
    branch_points: tuple[complex, ...] = ()
    declared_self_intersection: Fraction | None = None
    norm: RationalMap | None = None


@dataclass(frozen=True)
class Bisection:
    """Either a pair of sections or an irreducible double cover."""

    components: tuple[SectionOfJ, SectionOfJ] | None = None
    cover: DoubleCoverData | None = None

    def __post_init__(self) -> None:
        if (self.components is None) == (self.cover is None):
            raise ValueError("a bisection is either reducible or irreducible, not both")

    @property
    def is_reducible(self) -> bool:
        return self.components is not None


def reducible_bisection(s1: SectionOfJ, s2: SectionOfJ) -> Bisection:
    return Bisection(components=(s1, s2))


def irreducible_bisection(cover: DoubleCoverData) -> Bisection:
    return Bisection(cover=cover)


def cover_fibre_values(
    bis: Bisection,
    b,
    delta: SectionOfJ,
    surface: SurfaceData,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[TatePoint, TatePoint]:
    """The two fibre values of an invariant bisection over b."""
    if bis.is_reducible:
        s1, s2 = bis.components
        return section_value(s1, b, surface), section_value(s2, b, surface)
    cover = bis.cover
    if cover.trace is None:
        raise ValueError("declared cover carries no trace map to evaluate")
    if surface.base.genus != 0:
        raise ValueError("trace maps are concrete only over a rational base")
    t = cover.trace(complex(b))
    if is_infinite(t):
        raise ValueError(f"trace map has a pole at {b!r}")
    if cover.norm is not None:
        d = cover.norm(complex(b))
        if is_infinite(d):
            raise ValueError(f"norm map has a pole at {b!r}")
        if not points_equal(
            TatePoint(d, surface.fibre), section_value(delta, b, surface), tol
        ):
            raise ValueError("cover norm map disagrees with the determinant section")
    else:
        d = section_value(delta, b, surface).rep
    disc = t * t - 4.0 * d
    s = cmath.sqrt(disc)
    r1 = (t + s) / 2.0 if abs(t + s) >= abs(t - s) else (t - s) / 2.0
    if r1 == 0:
        raise ValueError("degenerate quadratic relation (zero root)")
    r2 = d / r1
    return TatePoint(r1, surface.fibre), TatePoint(r2, surface.fibre)


def sample_base_points(
    surface: SurfaceData,
    count: int,
    seed: int = 0,
    avoid: tuple[complex, ...] = (),
    margin: float = 1e-3,
) -> list[complex | TatePoint]:
    """Seeded generic base points, keeping clear of marked points."""
    rng = random.Random(seed)
    g = surface.base.genus
    forbidden = [complex(p) for p in avoid] + [complex(p) for p, _ in surface.multiple_fibres]
    out: list[complex | TatePoint] = []
    trials = 0
    while len(out) < count:
        trials += 1
        if trials > 100 * count + 100:
            raise RuntimeError("could not sample enough generic base points")
        if g == 0:
            b = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
            if any(abs(b - f) < margin for f in forbidden):
                continue
            out.append(b)
        elif g == 1:
            at = abs(surface.base.tate.tau)
            r = at ** rng.uniform(0.0, 1.0)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            pt = TatePoint(r * cmath.exp(1j * theta), surface.base.tate)
            if any(class_distance(pt, TatePoint(f, surface.base.tate)) < margin for f in forbidden if f != 0):
                continue
            out.append(pt)
        else:
            raise ValueError("abstract bases (g >= 2) have no point arithmetic")
    return out


def is_invariant_bisection(
    bis: Bisection,
    delta: SectionOfJ,
    surface: SurfaceData,
    tol: Tolerance = DEFAULT_TOL,
    *,
    samples: int = 50,
    seed: int = 0,
) -> bool:
    """Whether the bisection is carried to itself by the involution of delta.

    Reducible: the involution swaps the two sections or fixes each.
    Irreducible with a concrete trace: checked by value-set comparison at
    sampled fibres.  Declared covers (abstract base) are trusted, since
    their fibrewise relation has delta as its norm by construction.
    """
    if bis.is_reducible:
        s1, s2 = bis.components
        i1 = involution_on_section(s1, delta)
        if sections_equal(i1, s2, tol):
            return True
        i2 = involution_on_section(s2, delta)
        return sections_equal(i1, s1, tol) and sections_equal(i2, s2, tol)
    if bis.cover.trace is None or surface.base.genus != 0:
        return True
    for b in sample_base_points(surface, samples, seed=seed):
        try:
            v1, v2 = cover_fibre_values(bis, b, delta, surface, tol)
        except ValueError:
            continue
        w1 = involution_apply(v1, b, delta, surface)
        w2 = involution_apply(v2, b, delta, surface)
        if not _same_value_set((v1, v2), (w1, w2), tol):
            return False
    return True


def _same_value_set(
    a: tuple[TatePoint, TatePoint], b: tuple[TatePoint, TatePoint], tol: Tolerance
) -> bool:
    straight = points_equal(a[0], b[0], tol) and points_equal(a[1], b[1], tol)
    crossed = points_equal(a[0], b[1], tol) and points_equal(a[1], b[0], tol)
    return straight or crossed


def graph_self_intersection(
    bis: Bisection,
    delta: SectionOfJ,
    lattice: HomLattice,
    surface: SurfaceData,
    tol: Tolerance = DEFAULT_TOL,
    *,
    seed: int = 0,
) -> Fraction:
    """Self-intersection of the folded image of an invariant bisection.

    For a pair of sections this is their intersection number; for an
    irreducible cover over a rational base it is the trace-map degree
    (half the branch count), and for a declared cover the declared value.
    Always nonnegative.
    """
    if not is_invariant_bisection(bis, delta, surface, tol, seed=seed):
        raise ValueError("bisection is not invariant under the involution")
    if bis.is_reducible:
        s1, s2 = bis.components
        return Fraction(section_pairing(s1, s2, lattice))
    cover = bis.cover
    if cover.trace is not None and surface.base.genus == 0:
        return Fraction(cover.trace.degree)
    if cover.declared_self_intersection is None:
        raise ValueError("declared cover carries no self-intersection data")
    return Fraction(cover.declared_self_intersection)


def branch_points_numeric(cover: DoubleCoverData, delta: SectionOfJ, surface: SurfaceData) -> list[complex]:
    """Finite branch points of a concrete cover: roots of trace^2 - 4 delta.

    Only for a rational base with constant delta; root multiplicities are
    preserved in the returned list.
    """
    if cover.trace is None or surface.base.genus != 0:
        raise ValueError("branch points are computed only for concrete rational-base covers")
    if any(delta.hom):
        raise ValueError("over a rational base the determinant section is constant")
    if cover.norm is not None:
        if cover.norm.degree > 0:
            raise ValueError("branch analysis needs a constant norm map")
        d0 = cover.norm(0.0 + 0.0j)
    else:
        d0 = delta.constant.rep
    p = np.array(cover.trace.num, dtype=complex)
    q = np.array(cover.trace.den, dtype=complex)
    disc = np.polysub(
        np.polymul(p[::-1], p[::-1]), 4.0 * d0 * np.polymul(q[::-1], q[::-1])
    )
    disc = np.trim_zeros(disc, "f")
    scale = np.max(np.abs(disc)) if disc.size else 0.0
    if scale == 0.0:
        raise ValueError("degenerate cover: the quadratic relation has square discriminant")
    lead = 0
    while lead < disc.size and abs(disc[lead]) <= 1e-10 * scale:
        lead += 1
    roots = np.roots(disc[lead:]) if disc.size - lead > 1 else np.array([])
    return [complex(r) for r in roots]


def branch_point_count(cover: DoubleCoverData, delta: SectionOfJ, surface: SurfaceData) -> int:
    """Branch count with multiplicity, the point at infinity included."""
    finite = branch_points_numeric(cover, delta, surface)
    at_infinity = 2 * cover.trace.degree - len(finite)
    assert at_infinity >= 0
    return len(finite) + at_infinity


@dataclass(frozen=True)
class RuledBounds:
    """Integer window for the maximal sub-line-bundle degree d of the folded
    ruled surface, and the matching window for its invariant e = 2d - 4m."""

    d_min: int
    d_max: int
    e_min: int
    e_max: int

    @property
    def empty(self) -> bool:
        return self.d_min > self.d_max


def ruled_invariant_bounds(genus: int, m: Fraction | int) -> RuledBounds:
    """Window max{0, 2m - g/2} <= d <= 2m, with e = 2d - 4m in [-g, 0].

    m must be a nonnegative quarter-integer; an empty window means no
    surface realises this (genus, m) combination.
    """
    m = Fraction(m)
    if m < 0:
        raise ValueError("the filtrable bound m is nonnegative")
    if (4 * m).denominator != 1:
        raise ValueError("4m must be an integer")
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    d_min = max(0, math.ceil(2 * m - Fraction(genus, 2)))
    d_max = math.floor(2 * m)
    four_m = int(4 * m)
    return RuledBounds(d_min, d_max, 2 * d_min - four_m, 2 * d_max - four_m)


@dataclass(frozen=True)
class RuledSurfaceData:
    """Fold of the Jacobian along the involution of a minimising determinant
    class: the class, a section realising it, and the numeric invariants."""

    delta_class: NSClass
    delta_section: SectionOfJ
    m: Fraction
    bounds: RuledBounds
    twist_bundle_degree: int  # degree of the rank-2 descent bundle, always 4m

    def __post_init__(self) -> None:
        assert self.twist_bundle_degree == int(4 * self.m)


def ruled_surface_data(surface: SurfaceData, c1: NSClass) -> RuledSurfaceData:
    m, witness = filtrable_bound(c1, surface.lattice)
    return RuledSurfaceData(
        delta_class=witness,
        delta_section=section_for_class(surface, witness),
        m=m,
        bounds=ruled_invariant_bounds(surface.base.genus, m),
        twist_bundle_degree=int(4 * m),
    )


def genus_and_branching(cd: ChernData, genus: int, lattice: HomLattice) -> tuple[int, int]:
    """Genus 4*Delta + 2g - 1 and branch order 4c2 - c1^2 of a smooth
    irreducible spectral bisection; the two satisfy the Hurwitz relation
    for a double cover of the base.  Values are formal: a negative genus
    means no smooth cover exists."""
    delta = discriminant(cd, lattice)
    four_delta = 4 * delta
    if four_delta.denominator != 1:
        raise ValueError("no smooth irreducible spectral cover with these invariants")
    g_cover = int(four_delta) + 2 * genus - 1
    branch = 4 * cd.c2 - self_intersection(cd.c1, lattice)
    assert 2 * g_cover - 2 == 2 * (2 * genus - 2) + branch
    return g_cover, branch
