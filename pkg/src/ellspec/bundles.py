"""Rank-2 bundle presentations and their spectral covers.

A bundle is presented as an extension of a twisted ideal sheaf by a line
bundle, as the direct image of a line bundle on an irreducible spectral
bisection, or as a chain of elementary modifications along smooth
fibres.  Each presentation determines Chern data exactly; restriction to
a smooth fibre determines a split, non-split, or unstable isomorphism
type whose determinant is the fibre value of the determinant bundle.

The spectral cover of a presentation records, per fibre, the classes
whose twist makes first cohomology jump: these are the inverses of the
restriction's sub-line-bundle values.  The cover therefore has the
inverse determinant as its norm, and its invariance is checked against
the involution of that dual section.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .jacobian import (
    Bisection,
    DoubleCoverData,
    RationalMap,
    SectionOfJ,
    branch_points_numeric,
    cover_fibre_values,
    graph_self_intersection,
    involution_on_section,
    irreducible_bisection,
    reducible_bisection,
    sample_base_points,
    section_pairing,
    section_value,
    zero_section,
)
from .surface import (
    ChernData,
    HomLattice,
    NSClass,
    SurfaceData,
    discriminant,
    pairing,
    self_intersection,
    spectral_support_count,
)
from .tate import (
    DEFAULT_TOL,
    TatePoint,
    Tolerance,
    canonicalize,
    class_distance,
    distance_to_identity,
    group_mul,
    group_inv,
    h1_indicator,
    points_equal,
)


@dataclass(frozen=True)
class LineBundleOnX:
    """Line bundle on the surface: a section of the Jacobian plus twists by
    pulled-back base divisors and by multiple fibres."""

    section: SectionOfJ
    base_twist: int = 0
    fibre_twists: tuple[int, ...] = ()

    def chern_class(self, torsion_rank: int) -> NSClass:
        twists = self.fibre_twists + (0,) * (torsion_rank - 1 - len(self.fibre_twists))
        if len(twists) != torsion_rank - 1:
            raise ValueError("more fibre twists than the surface has multiple fibres")
        return NSClass((self.base_twist,) + twists, self.section.hom)


def trivial_line_bundle(surface: SurfaceData) -> LineBundleOnX:
    return LineBundleOnX(zero_section(surface))


class Filtrability(enum.Enum):
    FILTRABLE = "filtrable"
    NON_FILTRABLE = "non-filtrable"


@dataclass(frozen=True)
class SplitRestriction:
    first: TatePoint
    second: TatePoint


@dataclass(frozen=True)
class NonSplitRestriction:
    value: TatePoint


@dataclass(frozen=True)
class UnstableRestriction:
    sub_degree: int


FibreRestriction = SplitRestriction | NonSplitRestriction | UnstableRestriction


@dataclass(frozen=True)
class ExtensionBundle:
    """Extension of delta (x) sub^-1 (x) I_Z by sub.

    zero_cycle lists (point, length) with positive lengths over distinct
    points; nonsplit_at marks fibres where the extension class does not
    restrict to zero, so coincident values glue to the non-split type.
    """

    sub: LineBundleOnX
    determinant: LineBundleOnX
    zero_cycle: tuple[tuple[complex, int], ...] = ()
    nonsplit_at: tuple[complex, ...] = ()
    nonsplit_everywhere: bool = False

    def __post_init__(self) -> None:
        pts = [complex(p) for p, _ in self.zero_cycle]
        if len(set(pts)) != len(pts):
            raise ValueError("zero-cycle points must be distinct")
        if any(length <= 0 for _, length in self.zero_cycle):
            raise ValueError("zero-cycle lengths are positive")

    @property
    def cycle_length(self) -> int:
        return sum(length for _, length in self.zero_cycle)


@dataclass(frozen=True)
class SpectralPushBundle:
    """Direct image of a line bundle on an irreducible invariant bisection."""

    cover: Bisection
    determinant: LineBundleOnX

    def __post_init__(self) -> None:
        if self.cover.is_reducible:
            raise ValueError("spectral push bundles need an irreducible bisection")


@dataclass(frozen=True)
class ElemModBundle:
    """steps successive elementary modifications of parent along the fibre."""

    parent: "RankTwoBundle"
    fibre: complex
    steps: int

    def __post_init__(self) -> None:
        if self.steps <= 0:
            raise ValueError("modification step count must be positive")


RankTwoBundle = ExtensionBundle | SpectralPushBundle | ElemModBundle


def chern_of_extension(
    sub: LineBundleOnX,
    determinant: LineBundleOnX,
    zero_cycle: tuple[tuple[complex, int], ...],
    lattice: HomLattice,
    torsion_rank: int,
) -> ChernData:
    """Chern data of the extension, with the discriminant identity checked.

    c1 = c1(determinant), c2 = c1(sub).(c1(determinant) - c1(sub)) + len(Z);
    equivalently Delta = pairing(sub section, involuted sub section)/4 + len(Z)/2.
    """
    length = sum(l for _, l in zero_cycle)
    if length < 0:
        raise ValueError("negative zero-cycle length")
    c1_sub = sub.chern_class(torsion_rank)
    c1_det = determinant.chern_class(torsion_rank)
    c2 = pairing(c1_sub, c1_det - c1_sub, lattice) + length
    cd = ChernData(c1_det, c2)
    mirror = involution_on_section(sub.section, determinant.section)
    cross = Fraction(section_pairing(sub.section, mirror, lattice), 4) + Fraction(length, 2)
    assert discriminant(cd, lattice) == cross, "discriminant identity failed"
    return cd


@lru_cache(maxsize=None)
def _chern_cached(bundle: RankTwoBundle, surface: SurfaceData, tol: Tolerance) -> ChernData:
    if isinstance(bundle, ExtensionBundle):
        return chern_of_extension(
            bundle.sub, bundle.determinant, bundle.zero_cycle, surface.lattice, surface.torsion_rank
        )
    if isinstance(bundle, SpectralPushBundle):
        c1 = bundle.determinant.chern_class(surface.torsion_rank)
        a2 = graph_self_intersection(
            bundle.cover, bundle.determinant.section, surface.lattice, surface, tol
        )
        delta = a2 / 4  # an eighth of the bisection self-intersection upstairs
        c1sq = self_intersection(c1, surface.lattice)
        c2 = 2 * delta + Fraction(c1sq, 4)
        if c2.denominator != 1:
            raise ValueError("cover data is incompatible with integral second Chern class")
        return ChernData(c1, int(c2))
    cd = chern_data(bundle.parent, surface, tol)
    return apply_modification_ledger(cd, bundle.steps, surface.lattice)


def chern_data(bundle: RankTwoBundle, surface: SurfaceData, tol: Tolerance = DEFAULT_TOL) -> ChernData:
    """Chern data of a presentation (cached; all presentations are hashable)."""
    cd = _chern_cached(bundle, surface, tol)
    if discriminant(cd, surface.lattice) < 0:
        raise ValueError("presentation has negative discriminant")
    return cd


def apply_modification_ledger(cd: ChernData, steps: int, lattice: HomLattice) -> ChernData:
    """Ledger arithmetic for elementary modifications along a smooth fibre.

    Each forward step raises c2 by one and lowers the fibre-torsion
    coefficient of c1 by one, so the discriminant rises by exactly 1/2;
    negative steps replay the formal inverse.
    """
    torsion = (cd.c1.torsion[0] - steps,) + cd.c1.torsion[1:]
    out = ChernData(NSClass(torsion, cd.c1.hom), cd.c2 + steps)
    assert discriminant(out, lattice) == discriminant(cd, lattice) + Fraction(steps, 2)
    return out


def _base_rep(b) -> complex:
    return complex(b.rep) if isinstance(b, TatePoint) else complex(b)


def _base_matches(b, fibre, surface: SurfaceData, tol: Tolerance) -> bool:
    if surface.base.genus == 1 and surface.base.tate is not None:
        curve = surface.base.tate
        return (
            class_distance(
                canonicalize(_base_rep(b), curve), canonicalize(_base_rep(fibre), curve)
            )
            <= tol.eps
        )
    return abs(_base_rep(b) - _base_rep(fibre)) <= tol.eps


def _multiple_fibre_at(surface: SurfaceData, b, tol: Tolerance) -> bool:
    return any(_base_matches(b, p, surface, tol) for p, _ in surface.multiple_fibres)


def _cycle_length_at(bundle: ExtensionBundle, b, surface: SurfaceData, tol: Tolerance) -> int:
    for p, length in bundle.zero_cycle:
        if _base_matches(b, p, surface, tol):
            return length
    return 0


def _marked_nonsplit(bundle: ExtensionBundle, b, surface: SurfaceData, tol: Tolerance) -> bool:
    if bundle.nonsplit_everywhere:
        return True
    return any(_base_matches(b, p, surface, tol) for p in bundle.nonsplit_at)


def restrict_to_fibre(
    bundle: RankTwoBundle, b, surface: SurfaceData, tol: Tolerance = DEFAULT_TOL
) -> FibreRestriction:
    """Isomorphism type of the restriction to the fibre over b.

    Smooth non-multiple fibres only.  Coincidence of the two values at a
    branch point of an irreducible cover is detected at square-root
    tolerance, matching the sensitivity of a double root.
    """
    if _multiple_fibre_at(surface, b, tol):
        raise ValueError("restriction to a multiple fibre is unsupported")
    if isinstance(bundle, ExtensionBundle):
        k = _cycle_length_at(bundle, b, surface, tol)
        if k >= 1:
            return UnstableRestriction(k)
        v1 = section_value(bundle.sub.section, b, surface)
        quot = involution_on_section(bundle.sub.section, bundle.determinant.section)
        v2 = section_value(quot, b, surface)
        if points_equal(v1, v2, tol) and _marked_nonsplit(bundle, b, surface, tol):
            return NonSplitRestriction(v1)
        return SplitRestriction(v1, v2)
    if isinstance(bundle, SpectralPushBundle):
        v1, v2 = cover_fibre_values(bundle.cover, b, bundle.determinant.section, surface, tol)
        near = class_distance(v1, v2) <= max(tol.eps, tol.eps**0.5)
        if near:
            return NonSplitRestriction(v1)
        return SplitRestriction(v1, v2)
    if _base_matches(b, bundle.fibre, surface, tol):
        return UnstableRestriction(1)
    return restrict_to_fibre(bundle.parent, b, surface, tol)


@dataclass(frozen=True)
class SpectralCover:
    """Spectral data of a bundle: the bisection of cohomology-jump classes,
    the jump fibres with multiplicity, and the dual determinant section
    whose involution preserves the bisection."""

    bisection: Bisection
    jump_fibres: tuple[tuple[complex, int], ...]
    dual_determinant: SectionOfJ
    verification_samples: int = 0
    max_residual: float = 0.0

    @property
    def jump_total(self) -> int:
        return sum(m for _, m in self.jump_fibres)


class SpectralVerificationError(RuntimeError):
    """Numeric cross-check of the cover against fibre restrictions failed."""


def _dual_section(s: SectionOfJ) -> SectionOfJ:
    return SectionOfJ(group_inv(s.constant), tuple(-h for h in s.hom))


def _merge_jumps(*groups: tuple[tuple[complex, int], ...]) -> tuple[tuple[complex, int], ...]:
    out: list[tuple[complex, int]] = []
    for group in groups:
        for p, m in group:
            for i, (q, n) in enumerate(out):
                if complex(q) == complex(p):
                    out[i] = (q, n + m)
                    break
            else:
                out.append((complex(p), m))
    return tuple(out)


def _cover_parts(
    bundle: RankTwoBundle, surface: SurfaceData, tol: Tolerance
) -> tuple[Bisection, tuple[tuple[complex, int], ...], SectionOfJ]:
    if isinstance(bundle, ExtensionBundle):
        quot = involution_on_section(bundle.sub.section, bundle.determinant.section)
        bis = reducible_bisection(_dual_section(bundle.sub.section), _dual_section(quot))
        jumps = tuple((complex(p), length) for p, length in bundle.zero_cycle)
        return bis, jumps, _dual_section(bundle.determinant.section)
    if isinstance(bundle, SpectralPushBundle):
        cover = bundle.cover.cover
        if cover.trace is not None and surface.base.genus == 0:
            if any(bundle.determinant.section.hom):
                raise ValueError("over a rational base the determinant section is constant")
            d0 = bundle.determinant.section.constant.rep
            inv_trace = RationalMap(tuple(c / d0 for c in cover.trace.num), cover.trace.den)
            # The fibre values invert, so trace and norm divide by the
            # original constant; the reciprocal usually leaves the
            # fundamental annulus, hence the explicit norm map.
            dual_cover = DoubleCoverData(
                inv_trace,
                cover.branch_points,
                cover.declared_self_intersection,
                norm=RationalMap((1.0 / d0,)),
            )
        else:
            dual_cover = cover
        return (
            irreducible_bisection(dual_cover),
            (),
            _dual_section(bundle.determinant.section),
        )
    bis, jumps, dual = _cover_parts(bundle.parent, surface, tol)
    return bis, _merge_jumps(jumps, ((complex(bundle.fibre), bundle.steps),)), dual


def spectral_cover(
    bundle: RankTwoBundle,
    surface: SurfaceData,
    tol: Tolerance = DEFAULT_TOL,
    *,
    verify_samples: int = 0,
    seed: int = 0,
) -> SpectralCover:
    """Spectral cover of a presentation.

    The bisection records, over each base point, the inverse classes of
    the restriction's sub-line-bundle values (the classes whose twist has
    nonzero first cohomology); its norm is therefore the inverse of the
    determinant, and that dual section rides along for invariance
    checks.  Jump fibres collect the zero cycle and every modified
    fibre.  With verify_samples > 0 the cover is cross-checked against
    restrict_to_fibre through the cohomology indicator at sampled
    fibres; multiple fibres are never sampled and stay untracked.
    """
    bis, jumps, dual = _cover_parts(bundle, surface, tol)
    cover = SpectralCover(bis, jumps, dual)
    if verify_samples > 0:
        residual = _verify_cover(bundle, cover, surface, tol, verify_samples, seed)
        cover = SpectralCover(bis, jumps, dual, verify_samples, residual)
    return cover


def _verify_cover(
    bundle: RankTwoBundle,
    cover: SpectralCover,
    surface: SurfaceData,
    tol: Tolerance,
    samples: int,
    seed: int,
) -> float:
    avoid = tuple(p for p, _ in cover.jump_fibres)
    jump_tol = Tolerance(10.0 * tol.eps, tol.series_terms)
    worst = 0.0
    for b in sample_base_points(surface, samples, seed=seed, avoid=avoid):
        restriction = restrict_to_fibre(bundle, b, surface, tol)
        if isinstance(restriction, UnstableRestriction):
            continue
        if isinstance(restriction, NonSplitRestriction):
            values = (restriction.value, restriction.value)
        else:
            values = (restriction.first, restriction.second)
        alphas = cover_fibre_values(cover.bisection, b, cover.dual_determinant, surface, tol)
        for v in values:
            twisted = [group_mul(v, a) for a in alphas]
            residual = min(distance_to_identity(t) for t in twisted)
            worst = max(worst, residual)
            if not any(h1_indicator(t, jump_tol) for t in twisted):
                raise SpectralVerificationError(
                    "no cover class produces a cohomology jump at fibre "
                    f"{b!r} (best residual {residual:.3e})"
                )
    return worst


def cover_base_intersections(cover: SpectralCover, lattice: HomLattice) -> int:
    """Intersection of the bisection with the zero section (reducible case)."""
    if not cover.bisection.is_reducible:
        raise ValueError("base intersections are computed for reducible covers only")
    s1, s2 = cover.bisection.components
    return lattice.degree(s1.hom) + lattice.degree(s2.hom)


def spectral_accounting(
    cover: SpectralCover, cd: ChernData, lattice: HomLattice
) -> tuple[int, int]:
    """(bisection . zero section + jump total, spectral support count)."""
    lhs = cover_base_intersections(cover, lattice) + cover.jump_total
    return lhs, spectral_support_count(cd, lattice)


def elementary_modification(
    bundle: RankTwoBundle,
    b,
    steps: int,
    surface: SurfaceData,
    tol: Tolerance = DEFAULT_TOL,
) -> RankTwoBundle:
    """Modify along the smooth fibre over b, steps times.

    Zero steps is the identity; the fibre must avoid multiple fibres and,
    for spectral-push parents over a rational base, the branch points of
    the cover.
    """
    if steps == 0:
        return bundle
    if steps < 0:
        raise ValueError("modification step count must be positive")
    bc = _base_rep(b)
    if _multiple_fibre_at(surface, bc, tol):
        raise ValueError("cannot modify along a multiple fibre")
    root = bundle
    while isinstance(root, ElemModBundle):
        root = root.parent
    if isinstance(root, SpectralPushBundle) and surface.base.genus == 0:
        cover = root.cover.cover
        if cover.trace is not None:
            for p in branch_points_numeric(cover, root.determinant.section, surface):
                if abs(bc - p) <= max(tol.eps, 1e-6):
                    raise ValueError("cannot modify along a branch fibre of the cover")
    if isinstance(bundle, ElemModBundle) and _base_matches(bc, bundle.fibre, surface, tol):
        return ElemModBundle(bundle.parent, bundle.fibre, bundle.steps + steps)
    return ElemModBundle(bundle, bc, steps)


def filtrability(cover: SpectralCover) -> Filtrability:
    """Non-filtrable exactly when the spectral bisection is irreducible."""
    return Filtrability.FILTRABLE if cover.bisection.is_reducible else Filtrability.NON_FILTRABLE
