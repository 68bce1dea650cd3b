"""Rank-2 presentations: Chern ledger, fibre restrictions, spectral covers,
elementary modifications.

The fibrewise verification oracle is the cohomology indicator itself:
every cover value must annihilate a restriction value under the group
law, so the residual is measured directly rather than against frozen
curves.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from ellspec.bundles import (
    ElemModBundle,
    ExtensionBundle,
    Filtrability,
    LineBundleOnX,
    NonSplitRestriction,
    SpectralCover,
    SpectralPushBundle,
    SpectralVerificationError,
    SplitRestriction,
    UnstableRestriction,
    _verify_cover,
    apply_modification_ledger,
    chern_data,
    cover_base_intersections,
    elementary_modification,
    filtrability,
    restrict_to_fibre,
    spectral_accounting,
    spectral_cover,
    trivial_line_bundle,
)
from ellspec.jacobian import (
    DoubleCoverData,
    RationalMap,
    SectionOfJ,
    constant_section,
    irreducible_bisection,
    reducible_bisection,
    section_for_class,
    sections_equal,
    zero_section,
)
from ellspec.surface import (
    UNIT_LATTICE,
    ZERO_LATTICE,
    BaseCurve,
    ChernData,
    NSClass,
    SurfaceData,
)
from ellspec.tate import CurveParam, TatePoint, Tolerance, identity, points_equal

TAU4 = CurveParam(4.0)
TAU3 = CurveParam(3.0)

S0 = SurfaceData(BaseCurve(0), TAU4)
S0U = SurfaceData(BaseCurve(0), TAU4, lattice=UNIT_LATTICE)
S1U = SurfaceData(
    BaseCurve(1, tate=TAU3), TAU3, lattice=UNIT_LATTICE, hom_exponents=(1,)
)
SMF = SurfaceData(BaseCurve(0), TAU4, multiple_fibres=((1.5, 2),))


def trivial_extension(surface: SurfaceData, **kw) -> ExtensionBundle:
    return ExtensionBundle(
        trivial_line_bundle(surface), trivial_line_bundle(surface), **kw
    )


def push_bundle(trace: RationalMap, det_value: complex = 1.0) -> SpectralPushBundle:
    cover = irreducible_bisection(DoubleCoverData(trace=trace))
    return SpectralPushBundle(cover, LineBundleOnX(constant_section(S0, det_value)))


# ------------------------------------------------------------- structures


def test_line_bundle_chern_class():
    lb = LineBundleOnX(zero_section(SMF), base_twist=2, fibre_twists=(1,))
    assert lb.chern_class(SMF.torsion_rank) == NSClass((2, 1), ())
    assert LineBundleOnX(zero_section(SMF), base_twist=1).chern_class(2) == NSClass((1, 0), ())
    with pytest.raises(ValueError):
        LineBundleOnX(zero_section(S0), fibre_twists=(1, 1)).chern_class(1)


def test_extension_validation():
    with pytest.raises(ValueError):
        trivial_extension(S0, zero_cycle=((0.5, 1), (0.5, 2)))
    with pytest.raises(ValueError):
        trivial_extension(S0, zero_cycle=((0.5, 0),))


def test_spectral_push_needs_irreducible():
    with pytest.raises(ValueError):
        SpectralPushBundle(
            reducible_bisection(zero_section(S0), zero_section(S0)),
            trivial_line_bundle(S0),
        )


def test_elem_mod_validation():
    with pytest.raises(ValueError):
        ElemModBundle(trivial_extension(S0), 0.1, 0)


# ------------------------------------------------------------ chern data


def test_chern_trivial_extension():
    cd = chern_data(trivial_extension(S0), S0)
    assert cd == ChernData(NSClass((0,), ()), 0)


def test_chern_with_zero_cycle():
    bundle = trivial_extension(S0, zero_cycle=((0.2, 1), (0.9, 1)))
    cd = chern_data(bundle, S0)
    assert cd.c2 == 2
    from ellspec.surface import discriminant

    assert discriminant(cd, ZERO_LATTICE) == 1


def test_chern_degree_one_sub():
    sub = LineBundleOnX(section_for_class(S1U, NSClass((0,), (1,))))
    bundle = ExtensionBundle(sub, trivial_line_bundle(S1U))
    cd = chern_data(bundle, S1U)
    assert cd == ChernData(NSClass((0,), (0,)), 2)
    from ellspec.surface import discriminant

    assert discriminant(cd, UNIT_LATTICE) == 1


def test_chern_reducible_discriminant_formula():
    # Delta = pairing/4 + cycle/2 exactly
    sub = LineBundleOnX(section_for_class(S1U, NSClass((0,), (1,))))
    bundle = ExtensionBundle(sub, trivial_line_bundle(S1U), zero_cycle=((0.0j + 1.2, 1),))
    cd = chern_data(bundle, S1U)
    from ellspec.surface import discriminant

    assert cd.c2 == 3
    assert discriminant(cd, UNIT_LATTICE) == Fraction(3, 2)


def test_chern_spectral_push():
    cd = chern_data(push_bundle(RationalMap((0.0, 0.0, 1.0))), S0)
    assert cd == ChernData(NSClass((0,), ()), 1)
    from ellspec.surface import discriminant

    assert discriminant(cd, ZERO_LATTICE) == Fraction(1, 2)


def test_chern_spectral_push_integrality():
    with pytest.raises(ValueError):
        chern_data(push_bundle(RationalMap((0.0, 1.0))), S0)


def test_chern_elem_mod():
    bundle = ElemModBundle(trivial_extension(S0), 0.3, 2)
    cd = chern_data(bundle, S0)
    assert cd == ChernData(NSClass((-2,), ()), 2)


def test_modification_ledger():
    cd = ChernData(NSClass((0,), ()), 0)
    assert apply_modification_ledger(cd, 0, ZERO_LATTICE) == cd
    up = apply_modification_ledger(cd, 3, ZERO_LATTICE)
    assert up == ChernData(NSClass((-3,), ()), 3)
    from ellspec.surface import discriminant

    assert discriminant(up, ZERO_LATTICE) - discriminant(cd, ZERO_LATTICE) == Fraction(3, 2)
    assert apply_modification_ledger(up, -3, ZERO_LATTICE) == cd


# ------------------------------------------------------------ restriction


def test_restrict_trivial_extension_splits():
    r = restrict_to_fibre(trivial_extension(S0), 0.4, S0)
    assert isinstance(r, SplitRestriction)
    assert points_equal(r.first, identity(TAU4))
    assert points_equal(r.second, identity(TAU4))


def test_restrict_marked_fibre_glues():
    bundle = trivial_extension(S0, nonsplit_at=(0.5,))
    at = restrict_to_fibre(bundle, 0.5, S0)
    assert isinstance(at, NonSplitRestriction)
    assert points_equal(at.value, identity(TAU4))
    away = restrict_to_fibre(bundle, 1.0, S0)
    assert isinstance(away, SplitRestriction)


def test_restrict_everywhere_marked():
    bundle = trivial_extension(S0, nonsplit_everywhere=True)
    for b in (0.1, -0.7 + 0.2j, 2.0):
        assert isinstance(restrict_to_fibre(bundle, b, S0), NonSplitRestriction)


def test_restrict_equal_values_unmarked_default_split():
    # sub = quotient = the class of -1, no marking: stays split
    sub = LineBundleOnX(constant_section(S0, -1.0))
    det = trivial_line_bundle(S0)
    bundle = ExtensionBundle(sub, det)
    r = restrict_to_fibre(bundle, 0.3, S0)
    assert isinstance(r, SplitRestriction)
    assert points_equal(r.first, r.second)


def test_restrict_zero_cycle_unstable():
    bundle = trivial_extension(S0, zero_cycle=((0.5, 2),))
    r = restrict_to_fibre(bundle, 0.5, S0)
    assert r == UnstableRestriction(2)
    assert isinstance(restrict_to_fibre(bundle, 0.6, S0), SplitRestriction)


def test_restrict_spectral_push_branch_point():
    bundle = push_bundle(RationalMap((0.0, 0.0, 1.0)))  # branch at b^4 = 4
    root2 = 2.0**0.5
    at = restrict_to_fibre(bundle, root2, S0)
    assert isinstance(at, NonSplitRestriction)
    away = restrict_to_fibre(bundle, 0.0, S0)
    assert isinstance(away, SplitRestriction)
    # the wrap across the annulus seam scales the gap by |tau|, so the
    # probe must sit well inside the sqrt(eps) coincidence window
    near = restrict_to_fibre(bundle, root2 + 1e-12, S0)
    assert isinstance(near, NonSplitRestriction)
    off = restrict_to_fibre(bundle, root2 + 1e-5, S0)
    assert isinstance(off, SplitRestriction)


def test_restrict_elem_mod():
    bundle = ElemModBundle(trivial_extension(S0), 0.3, 1)
    assert restrict_to_fibre(bundle, 0.3, S0) == UnstableRestriction(1)
    assert isinstance(restrict_to_fibre(bundle, 0.8, S0), SplitRestriction)


def test_restrict_multiple_fibre_rejected():
    with pytest.raises(ValueError):
        restrict_to_fibre(trivial_extension(SMF), 1.5, SMF)


# --------------------------------------------------------- spectral cover


def test_cover_of_split_trivial_bundle():
    cover = spectral_cover(trivial_extension(S0), S0, verify_samples=50)
    assert cover.bisection.is_reducible
    s1, s2 = cover.bisection.components
    assert sections_equal(s1, zero_section(S0))
    assert sections_equal(s2, zero_section(S0))
    assert cover.jump_fibres == ()
    assert cover.verification_samples == 50
    assert cover.max_residual < 1e-12


def test_cover_of_constant_extension():
    sub = LineBundleOnX(constant_section(S0, 2.5))
    bundle = ExtensionBundle(sub, trivial_line_bundle(S0))
    cover = spectral_cover(bundle, S0, verify_samples=50)
    s1, s2 = cover.bisection.components
    assert points_equal(s1.constant, TatePoint(1 / 2.5, TAU4))
    assert points_equal(s2.constant, TatePoint(2.5, TAU4))
    assert cover.max_residual < 1e-9


def test_cover_jump_fibres_from_cycle():
    bundle = trivial_extension(S0, zero_cycle=((0.5, 2), (-0.3, 1)))
    cover = spectral_cover(bundle, S0, verify_samples=20)
    assert cover.jump_fibres == ((0.5 + 0j, 2), (-0.3 + 0j, 1))
    assert cover.jump_total == 3


def test_cover_accounting_identity():
    sub = LineBundleOnX(section_for_class(S1U, NSClass((0,), (1,))))
    bundle = ExtensionBundle(sub, trivial_line_bundle(S1U))
    cover = spectral_cover(bundle, S1U, verify_samples=50)
    assert cover.max_residual < 1e-8
    cd = chern_data(bundle, S1U)
    lhs, rhs = spectral_accounting(cover, cd, UNIT_LATTICE)
    assert lhs == rhs == 2


def test_cover_of_elem_mod_merges_jumps():
    base = trivial_extension(S0)
    one = elementary_modification(base, 0.7, 2, S0)
    two = elementary_modification(one, 0.7, 1, S0)
    three = elementary_modification(two, -0.4, 1, S0)
    cover = spectral_cover(three, S0)
    assert cover.jump_fibres == ((0.7 + 0j, 3), (-0.4 + 0j, 1))


def test_cover_of_spectral_push_inverts_trace():
    bundle = push_bundle(RationalMap((0.0, 0.0, 1.0)), det_value=2.0)
    cover = spectral_cover(bundle, S0, verify_samples=40)
    assert not cover.bisection.is_reducible
    # dual trace is scaled by the inverse determinant value
    assert cover.bisection.cover.trace.num == (0j, 0j, 0.5 + 0j)
    assert cover.max_residual < 1e-8
    assert points_equal(cover.dual_determinant.constant, TatePoint(0.5, TAU4))


def test_cover_verification_detects_tampering():
    sub = LineBundleOnX(constant_section(S0, 2.5))
    bundle = ExtensionBundle(sub, trivial_line_bundle(S0))
    good = spectral_cover(bundle, S0)
    bad = SpectralCover(
        reducible_bisection(
            constant_section(S0, 1.7), good.bisection.components[1]
        ),
        good.jump_fibres,
        good.dual_determinant,
    )
    with pytest.raises(SpectralVerificationError):
        _verify_cover(bundle, bad, S0, Tolerance(), 20, 0)


def test_cover_base_intersections_requires_reducible():
    cover = spectral_cover(push_bundle(RationalMap((0.0, 0.0, 1.0))), S0)
    with pytest.raises(ValueError):
        cover_base_intersections(cover, ZERO_LATTICE)


def test_filtrability():
    red = spectral_cover(trivial_extension(S0), S0)
    assert filtrability(red) == Filtrability.FILTRABLE
    irr = spectral_cover(push_bundle(RationalMap((0.0, 0.0, 1.0))), S0)
    assert filtrability(irr) == Filtrability.NON_FILTRABLE


# ------------------------------------------------- elementary modification


def test_modification_identity_and_errors():
    base = trivial_extension(S0)
    assert elementary_modification(base, 0.2, 0, S0) is base
    with pytest.raises(ValueError):
        elementary_modification(base, 0.2, -1, S0)
    with pytest.raises(ValueError):
        elementary_modification(trivial_extension(SMF), 1.5, 1, SMF)


def test_modification_branch_fibre_rejected():
    bundle = push_bundle(RationalMap((0.0, 0.0, 1.0)))
    root2 = 2.0**0.5
    with pytest.raises(ValueError):
        elementary_modification(bundle, root2, 1, S0)
    ok = elementary_modification(bundle, 0.1, 1, S0)
    assert isinstance(ok, ElemModBundle)
    # the branch check walks through modification chains too
    with pytest.raises(ValueError):
        elementary_modification(ok, -root2, 1, S0)


def test_modification_chern_chain():
    base = trivial_extension(S0)
    mod = elementary_modification(base, 0.6, 4, S0)
    cd = chern_data(mod, S0)
    assert cd == ChernData(NSClass((-4,), ()), 4)


def test_modification_g1_base_point_classes():
    base = ExtensionBundle(
        LineBundleOnX(section_for_class(S1U, NSClass((0,), (1,)))),
        trivial_line_bundle(S1U),
    )
    pt = TatePoint(1.4 + 0.1j, TAU3)
    one = elementary_modification(base, pt, 1, S1U)
    # the same class reached through a multiplier shift merges
    shifted = (1.4 + 0.1j) * 3.0
    two = elementary_modification(one, shifted, 2, S1U)
    assert isinstance(two, ElemModBundle)
    assert two.steps == 3
    assert two.parent is base
