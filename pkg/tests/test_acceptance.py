"""Acceptance gate: nine criteria, one test (and one pass/fail line) each.

Each criterion is a property or identity checked at desk scale with a
fixed seed; the stated runtime budgets are asserted where they bind.
Run with -s to see the per-criterion detail lines.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

from ellspec.bundles import (
    ExtensionBundle,
    LineBundleOnX,
    SpectralPushBundle,
    apply_modification_ledger,
    chern_data,
    elementary_modification,
    spectral_accounting,
    spectral_cover,
    trivial_line_bundle,
)
from ellspec.existence import Existence, existence_verdict, replay_recipe
from ellspec.jacobian import (
    DoubleCoverData,
    RationalMap,
    branch_point_count,
    genus_and_branching,
    involution_on_section,
    irreducible_bisection,
    ruled_invariant_bounds,
    section_for_class,
    section_pairing,
    zero_section,
)
from ellspec.surface import (
    UNIT_LATTICE,
    ZERO_LATTICE,
    BaseCurve,
    ChernData,
    HomLattice,
    NSClass,
    SurfaceData,
    discriminant,
    filtrable_bound,
    pairing,
    self_intersection,
)
from ellspec.tate import (
    CurveParam,
    TatePoint,
    Tolerance,
    class_distance,
    distance_to_identity,
    quotient_x_at,
    two_torsion,
    x_preimages,
)

F = Fraction

LATTICE_POOL: tuple[HomLattice, ...] = (
    ZERO_LATTICE,
    UNIT_LATTICE,
    HomLattice(1, ((F(2),),)),
    HomLattice(1, ((F(7),),)),
    HomLattice(2, ((F(1), F(1, 2)), (F(1, 2), F(1)))),
    HomLattice(2, ((F(2), F(1)), (F(1), F(2)))),
    HomLattice(2, ((F(3), F(3, 2)), (F(3, 2), F(1)))),
)


def random_lattice(rng: random.Random) -> HomLattice:
    if rng.random() < 0.6:
        return rng.choice(LATTICE_POOL)
    rows = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
    gram = tuple(
        tuple(
            F(sum(rows[k][i] * rows[k][j] for k in range(2))) for j in range(2)
        )
        for i in range(2)
    )
    return HomLattice(2, gram)


def random_class(rng: random.Random, lattice: HomLattice, spread: int = 10) -> NSClass:
    return NSClass(
        (rng.randint(-spread, spread),),
        tuple(rng.randint(-spread, spread) for _ in range(lattice.rank)),
    )


def test_criterion_1_intersection_form_suite():
    rng = random.Random(101)
    start = time.perf_counter()
    pairs = 0
    while pairs < 220:
        lattice = random_lattice(rng)
        a = random_class(rng, lattice)
        b = random_class(rng, lattice)
        c = random_class(rng, lattice)
        assert pairing(a, b, lattice) == pairing(b, a, lattice)
        assert pairing(a + b, c, lattice) == pairing(a, c, lattice) + pairing(
            b, c, lattice
        )
        assert pairing(a.scale(3), b, lattice) == 3 * pairing(a, b, lattice)
        torsion_only = NSClass(a.torsion, (0,) * lattice.rank)
        assert pairing(torsion_only, b, lattice) == 0
        assert self_intersection(a, lattice) == -2 * lattice.degree(a.hom)
        pairs += 2  # (a,b) and (a+b,c) are distinct random pairs
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"criterion 1: PASS — {pairs} pairs, {elapsed:.2f}s")


def test_criterion_2_lattice_minimum_oracle():
    rng = random.Random(202)
    start = time.perf_counter()
    radius = 25
    for _ in range(100):
        lattice = random_lattice(rng)
        c1 = random_class(rng, lattice)
        m, witness = filtrable_bound(c1, lattice)
        if lattice.rank == 0:
            brute = F(0)
        else:
            brute = min(
                lattice.degree(tuple(a - 2 * b for a, b in zip(c1.hom, mu)))
                for mu in itertools.product(
                    range(-radius, radius + 1), repeat=lattice.rank
                )
            ) / 4
        assert m == brute
        assert self_intersection(witness, lattice) == -8 * m
        assert witness.torsion == c1.torsion
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"criterion 2: PASS — 100 instances at radius {radius}, {elapsed:.2f}s")


def test_criterion_3_quotient_map_numerics():
    rng = random.Random(303)
    tol = Tolerance(1e-12)
    start = time.perf_counter()
    worst = 0.0
    for tau in (3.0, 4.0, 2j, 1.5 + 1.5j):
        curve = CurveParam(tau)
        torsion = two_torsion(curve)

        def draw() -> TatePoint:
            while True:
                r = rng.uniform(0.05, 0.95)
                theta = rng.uniform(0.0, 2.0 * math.pi)
                p = TatePoint(
                    abs(curve.tau) ** r * complex(math.cos(theta), math.sin(theta)),
                    curve,
                )
                if distance_to_identity(p) < 0.2:
                    continue
                if min(class_distance(p, t) for t in torsion) < 0.15:
                    continue
                return p

        for _ in range(100):
            u = draw().rep
            x0 = quotient_x_at(u, curve, tol)
            for other in (1.0 / u, curve.q * u):
                diff = abs(quotient_x_at(other, curve, tol) - x0)
                worst = max(worst, diff)
                assert diff < 1e-9
        for _ in range(3):
            p = draw()
            roots = x_preimages(quotient_x_at(p.rep, curve, tol), curve, tol)
            assert len(roots) == 2
            assert min(class_distance(r, p) for r in roots) < 1e-5
        for t in torsion:
            if distance_to_identity(t) == 0.0:
                continue
            roots = x_preimages(quotient_x_at(t.rep, curve, tol), curve, tol)
            assert len(roots) == 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(
        f"criterion 3: PASS — 4 curves x 100 points, worst symmetry drift "
        f"{worst:.2e}, {elapsed:.2f}s"
    )


S0 = SurfaceData(BaseCurve(0), CurveParam(4.0))
S1 = SurfaceData(
    BaseCurve(1, tate=CurveParam(3.0)),
    CurveParam(3.0),
    lattice=UNIT_LATTICE,
    hom_exponents=(1,),
)


def _random_constant(rng: random.Random, curve: CurveParam) -> complex:
    r = rng.uniform(0.1, 0.9)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return abs(curve.tau) ** r * complex(math.cos(theta), math.sin(theta))


def _random_extension(rng: random.Random, surface: SurfaceData) -> ExtensionBundle:
    rank = surface.lattice.rank
    sub = LineBundleOnX(
        section_for_class(
            surface,
            NSClass((0,), tuple(rng.randint(-2, 2) for _ in range(rank))),
            constant=_random_constant(rng, surface.fibre),
        ),
        base_twist=rng.randint(-2, 2),
    )
    det = LineBundleOnX(
        section_for_class(
            surface,
            NSClass((0,), tuple(rng.randint(-2, 2) for _ in range(rank))),
            constant=_random_constant(rng, surface.fibre),
        ),
        base_twist=rng.randint(-2, 2),
    )
    cycle = []
    for k in range(rng.randint(0, 2)):
        point = complex(1.2 + 0.4 * k, 0.3) * (1.0 if surface.base.genus else 0.5)
        cycle.append((point, 1))
    return ExtensionBundle(sub, det, zero_cycle=tuple(cycle))


def test_criterion_4_spectral_cover_verification():
    rng = random.Random(404)
    built = 0
    worst = 0.0
    while built < 20:
        surface = S0 if built % 2 == 0 else S1
        bundle = _random_extension(rng, surface)
        try:
            cd = chern_data(bundle, surface)
        except ValueError:
            continue  # negative discriminant: not a holomorphic configuration
        cover = spectral_cover(bundle, surface, verify_samples=50, seed=built)
        assert cover.verification_samples == 50
        assert cover.max_residual < 1e-8
        worst = max(worst, cover.max_residual)
        lhs, rhs = spectral_accounting(cover, cd, surface.lattice)
        assert lhs == rhs
        built += 1
    print(f"criterion 4: PASS — 20 bundles, worst h1 residual {worst:.2e}")


def test_criterion_5_reducible_discriminant_identity():
    rng = random.Random(505)
    checked = 0
    while checked < 50:
        surface = S1
        bundle = _random_extension(rng, surface)
        try:
            cd = chern_data(bundle, surface)
        except ValueError:
            continue
        delta = discriminant(cd, surface.lattice)
        mirror = involution_on_section(bundle.sub.section, bundle.determinant.section)
        crossing = section_pairing(bundle.sub.section, mirror, surface.lattice)
        assert delta == F(crossing, 4) + F(bundle.cycle_length, 2)
        checked += 1
    print(f"criterion 5: PASS — 50 reducible configurations, identity exact")


def test_criterion_6_modification_ledger():
    rng = random.Random(606)
    for _ in range(40):
        lattice = random_lattice(rng)
        cd = ChernData(random_class(rng, lattice, spread=4), rng.randint(-6, 6))
        k = rng.randint(0, 8)
        up = apply_modification_ledger(cd, k, lattice)
        assert discriminant(up, lattice) - discriminant(cd, lattice) == F(k, 2)
        assert up.c1.hom == cd.c1.hom
        assert apply_modification_ledger(up, -k, lattice) == cd
    # the same ledger drives bundle-level modification chains
    base = ExtensionBundle(trivial_line_bundle(S0), trivial_line_bundle(S0))
    chain = elementary_modification(base, 0.3, 2, S0)
    chain = elementary_modification(chain, 0.3, 1, S0)
    assert chern_data(chain, S0) == apply_modification_ledger(
        chern_data(base, S0), 3, ZERO_LATTICE
    )
    print("criterion 6: PASS — 40 random ledgers + replayed chain")


def test_criterion_7_hurwitz_identity():
    cases = 0
    for g in (0, 1, 2):
        for n in range(-2, 3):
            for t in range(-2, 3):
                for c2 in range(-6, 7):
                    cd = ChernData(NSClass((t,), (n,)), c2)
                    genus, branch = genus_and_branching(cd, g, UNIT_LATTICE)
                    assert 2 * genus - 2 == 2 * (2 * g - 2) + branch
                    assert branch == 4 * c2 - self_intersection(cd.c1, UNIT_LATTICE)
                    cases += 1
    cover = DoubleCoverData(trace=RationalMap((0.0, 0.0, 1.0)))
    bundle = SpectralPushBundle(irreducible_bisection(cover), trivial_line_bundle(S0))
    cd = chern_data(bundle, S0)
    counted = branch_point_count(cover, zero_section(S0), S0)
    assert counted == 4 * cd.c2 - self_intersection(cd.c1, ZERO_LATTICE) == 4
    print(f"criterion 7: PASS — {cases} sweep cases + concrete cover with 4 branch points")


def test_criterion_8_low_genus_exhaustive():
    start = time.perf_counter()
    surfaces = [
        (S0, [()], range(-2, 3)),
        (S1, [(n,) for n in range(-3, 4)], range(-2, 3)),
        (
            SurfaceData(
                BaseCurve(1, tate=CurveParam(3.0)),
                CurveParam(3.0),
                lattice=HomLattice(1, ((F(2),),)),
            ),
            [(n,) for n in range(-2, 3)],
            range(-2, 3),
        ),
    ]
    verdicts = 0
    with_recipe = 0
    for surface, homs, torsions in surfaces:
        for hom in homs:
            for t in torsions:
                for c2 in range(-10, 11):
                    cd = ChernData(NSClass((t,), hom), c2)
                    v = existence_verdict(cd, surface, seed=verdicts % 7)
                    expect = discriminant(cd, surface.lattice) >= 0
                    assert (v.status is Existence.EXISTS) == expect
                    if v.recipe is not None:
                        assert replay_recipe(v.recipe, surface) == cd
                        with_recipe += 1
                    elif v.status is Existence.EXISTS:
                        assert v.note  # the quantized corner is documented
                    verdicts += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(
        f"criterion 8: PASS — {verdicts} verdicts, {with_recipe} recipes replayed, "
        f"{elapsed:.2f}s"
    )


def test_criterion_9_ruled_invariant_windows():
    emitted = 0
    for g in range(5):
        for quarter in range(13):
            m = F(quarter, 4)
            bounds = ruled_invariant_bounds(g, m)
            if bounds.empty:
                continue
            lo = max(F(0), 2 * m - F(g, 2))
            assert lo <= bounds.d_min <= bounds.d_max <= 2 * m
            assert -g <= bounds.e_min <= bounds.e_max <= 0
            assert bounds.e_min == 2 * bounds.d_min - 4 * m
            assert bounds.e_max == 2 * bounds.d_max - 4 * m
            emitted += 1
    print(f"criterion 9: PASS — {emitted} non-empty windows in range")
