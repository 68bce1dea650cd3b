"""JSON codecs for the command-line interface.

Documents are versioned with "schema": 1.  Exact rationals travel as
"p/q" strings, complex numbers as [re, im] pairs with "inf" for the
point at infinity.  Union types use their tag as the single key
({"reducible": ...} / {"irreducible": ...}; {"extension": ...} /
{"spectral_push": ...} / {"elem_mod": ...}).  Decoding failures raise
SchemaError, which the CLI maps to its schema-violation exit code.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Any

from .bundles import (
    ElemModBundle,
    ExtensionBundle,
    LineBundleOnX,
    RankTwoBundle,
    SpectralCover,
    SpectralPushBundle,
)
from .existence import Existence, Recipe, Verdict
from .jacobian import (
    Bisection,
    DoubleCoverData,
    RationalMap,
    SectionOfJ,
    irreducible_bisection,
    reducible_bisection,
)
from .surface import (
    BaseCurve,
    ChernData,
    HomLattice,
    NSClass,
    SurfaceData,
)
from .tate import CurveParam, TatePoint, is_infinite

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """The document does not match the interchange schema."""


# ---------------------------------------------------------------------------
# scalars


def encode_fraction(x: Fraction | int) -> str:
    return str(Fraction(x))


def decode_fraction(doc: Any, where: str = "rational") -> Fraction:
    if isinstance(doc, bool):
        raise SchemaError(f"{where}: expected a rational, got a boolean")
    if isinstance(doc, int):
        return Fraction(doc)
    if isinstance(doc, str):
        try:
            return Fraction(doc)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{where}: malformed rational {doc!r}") from exc
    raise SchemaError(f"{where}: expected an integer or 'p/q' string")


def encode_complex(z: complex) -> list[float] | str:
    z = complex(z)
    if is_infinite(z) or cmath.isinf(z):
        return "inf"
    return [z.real, z.imag]


def decode_complex(doc: Any, where: str = "complex") -> complex:
    if doc == "inf":
        return complex(math.inf, 0.0)
    if (
        isinstance(doc, (list, tuple))
        and len(doc) == 2
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in doc)
    ):
        return complex(doc[0], doc[1])
    raise SchemaError(f"{where}: expected [re, im] or 'inf'")


def _expect_map(doc: Any, where: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    return doc


def _expect_list(doc: Any, where: str) -> list:
    if not isinstance(doc, list):
        raise SchemaError(f"{where}: expected an array")
    return doc


def _expect_int(doc: Any, where: str) -> int:
    if isinstance(doc, bool) or not isinstance(doc, int):
        raise SchemaError(f"{where}: expected an integer")
    return doc


def check_version(doc: Any) -> None:
    body = _expect_map(doc, "document")
    if body.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f'document must declare "schema": {SCHEMA_VERSION}')


# ---------------------------------------------------------------------------
# surface: {genus, tau: [re,im], sigma?: [re,im], multiple_fibres: [[b, m]...],
#           theta_degree?, lattice: {rank, gram}, hom_exponents?}


def encode_surface(surface: SurfaceData) -> dict:
    doc: dict[str, Any] = {
        "genus": surface.base.genus,
        "tau": encode_complex(surface.fibre.tau),
        "lattice": {
            "rank": surface.lattice.rank,
            "gram": [
                [encode_fraction(entry) for entry in row] for row in surface.lattice.gram
            ],
        },
    }
    if surface.base.tate is not None:
        doc["sigma"] = encode_complex(surface.base.tate.tau)
    if surface.multiple_fibres:
        doc["multiple_fibres"] = [
            [encode_complex(p), m] for p, m in surface.multiple_fibres
        ]
    if surface.theta_degree is not None:
        doc["theta_degree"] = surface.theta_degree
    if surface.hom_exponents is not None:
        doc["hom_exponents"] = list(surface.hom_exponents)
    return doc


def decode_surface(doc: Any) -> SurfaceData:
    body = _expect_map(doc, "surface")
    genus = _expect_int(body.get("genus"), "surface.genus")
    tate = None
    if body.get("sigma") is not None:
        try:
            tate = CurveParam(decode_complex(body["sigma"], "surface.sigma"))
        except ValueError as exc:
            raise SchemaError(f"surface.sigma: {exc}") from exc
    try:
        fibre = CurveParam(decode_complex(body.get("tau"), "surface.tau"))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"surface.tau: {exc}") from exc
    lat_doc = _expect_map(body.get("lattice"), "surface.lattice")
    rank = _expect_int(lat_doc.get("rank"), "surface.lattice.rank")
    gram_doc = _expect_list(lat_doc.get("gram"), "surface.lattice.gram")
    gram = tuple(
        tuple(
            decode_fraction(entry, "surface.lattice.gram")
            for entry in _expect_list(row, "surface.lattice.gram row")
        )
        for row in gram_doc
    )
    fibres = []
    for item in _expect_list(body.get("multiple_fibres", []), "surface.multiple_fibres"):
        pair = _expect_list(item, "surface.multiple_fibres entry")
        if len(pair) != 2:
            raise SchemaError("surface.multiple_fibres entry: expected [point, multiplicity]")
        fibres.append(
            (
                decode_complex(pair[0], "multiple fibre point"),
                _expect_int(pair[1], "multiple fibre multiplicity"),
            )
        )
    theta = body.get("theta_degree")
    if theta is not None:
        theta = _expect_int(theta, "surface.theta_degree")
    hom_exp = None
    if body.get("hom_exponents") is not None:
        hom_exp = tuple(
            _expect_int(e, "surface.hom_exponents entry")
            for e in _expect_list(body["hom_exponents"], "surface.hom_exponents")
        )
    try:
        lattice = HomLattice(rank, gram)
        return SurfaceData(
            base=BaseCurve(genus, tate),
            fibre=fibre,
            multiple_fibres=tuple(fibres),
            theta_degree=theta,
            lattice=lattice,
            hom_exponents=hom_exp,
        )
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"surface: {exc}") from exc


# ---------------------------------------------------------------------------
# classes and Chern data


def encode_ns_class(cls: NSClass) -> dict:
    return {"torsion": list(cls.torsion), "hom": list(cls.hom)}


def decode_ns_class(doc: Any, surface: SurfaceData, where: str = "class") -> NSClass:
    body = _expect_map(doc, where)
    torsion = tuple(
        _expect_int(t, f"{where}.torsion entry")
        for t in _expect_list(body.get("torsion"), f"{where}.torsion")
    )
    hom = tuple(
        _expect_int(h, f"{where}.hom entry")
        for h in _expect_list(body.get("hom"), f"{where}.hom")
    )
    if len(torsion) != surface.torsion_rank:
        raise SchemaError(
            f"{where}: torsion length {len(torsion)} does not match the surface "
            f"(expected {surface.torsion_rank})"
        )
    if len(hom) != surface.lattice.rank:
        raise SchemaError(
            f"{where}: hom length {len(hom)} does not match the lattice rank "
            f"{surface.lattice.rank}"
        )
    return NSClass(torsion, hom)


def encode_chern(cd: ChernData) -> dict:
    return {"c1": encode_ns_class(cd.c1), "c2": cd.c2}


def decode_chern(doc: Any, surface: SurfaceData) -> ChernData:
    body = _expect_map(doc, "chern")
    return ChernData(
        decode_ns_class(body.get("c1"), surface, "chern.c1"),
        _expect_int(body.get("c2"), "chern.c2"),
    )


# ---------------------------------------------------------------------------
# sections, bisections: {"reducible": [s, s]} | {"irreducible": {...}}


def encode_section(s: SectionOfJ) -> dict:
    return {"constant": encode_complex(s.constant.rep), "hom": list(s.hom)}


def decode_section(doc: Any, surface: SurfaceData, where: str = "section") -> SectionOfJ:
    body = _expect_map(doc, where)
    constant = decode_complex(body.get("constant"), f"{where}.constant")
    hom = tuple(
        _expect_int(h, f"{where}.hom entry")
        for h in _expect_list(body.get("hom", [0] * surface.lattice.rank), f"{where}.hom")
    )
    if len(hom) != surface.lattice.rank:
        raise SchemaError(f"{where}: hom length does not match the lattice rank")
    try:
        return SectionOfJ(TatePoint(constant, surface.fibre), hom)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def encode_rational_map(r: RationalMap) -> dict:
    return {
        "num": [encode_complex(c) for c in r.num],
        "den": [encode_complex(c) for c in r.den],
    }


def decode_rational_map(doc: Any, where: str = "trace") -> RationalMap:
    body = _expect_map(doc, where)
    num = tuple(
        decode_complex(c, f"{where}.num entry")
        for c in _expect_list(body.get("num"), f"{where}.num")
    )
    den = tuple(
        decode_complex(c, f"{where}.den entry")
        for c in _expect_list(body.get("den", [[1.0, 0.0]]), f"{where}.den")
    )
    try:
        return RationalMap(num, den)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def encode_bisection(bis: Bisection) -> dict:
    if bis.is_reducible:
        return {"reducible": [encode_section(s) for s in bis.components]}
    cover = bis.cover
    inner: dict[str, Any] = {}
    if cover.trace is not None:
        inner["trace"] = encode_rational_map(cover.trace)
    if cover.branch_points:
        inner["branch_points"] = [encode_complex(p) for p in cover.branch_points]
    if cover.declared_self_intersection is not None:
        inner["declared_self_intersection"] = cover.declared_self_intersection
    if cover.norm is not None:
        inner["norm"] = encode_rational_map(cover.norm)
    return {"irreducible": inner}


def decode_bisection(doc: Any, surface: SurfaceData, where: str = "bisection") -> Bisection:
    body = _expect_map(doc, where)
    if "reducible" in body:
        comps = _expect_list(body["reducible"], f"{where}.reducible")
        if len(comps) != 2:
            raise SchemaError(f"{where}: a reducible bisection has two components")
        return reducible_bisection(
            decode_section(comps[0], surface, f"{where}.reducible[0]"),
            decode_section(comps[1], surface, f"{where}.reducible[1]"),
        )
    if "irreducible" in body:
        inner = _expect_map(body["irreducible"], f"{where}.irreducible")
        trace = None
        if "trace" in inner:
            trace = decode_rational_map(inner["trace"], f"{where}.trace")
        branch = tuple(
            decode_complex(p, f"{where}.branch_points entry")
            for p in _expect_list(inner.get("branch_points", []), f"{where}.branch_points")
        )
        declared = inner.get("declared_self_intersection")
        if declared is not None:
            declared = _expect_int(declared, f"{where}.declared_self_intersection")
        norm = None
        if "norm" in inner:
            norm = decode_rational_map(inner["norm"], f"{where}.norm")
        try:
            return irreducible_bisection(DoubleCoverData(trace, branch, declared, norm))
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: expected a 'reducible' or 'irreducible' key")


# ---------------------------------------------------------------------------
# bundles: {"extension": {D, delta, Z, nonsplit_at}} | {"spectral_push":
# {bisection, delta}} | {"elem_mod": {parent, fibre, steps}}


def encode_line_bundle(lb: LineBundleOnX) -> dict:
    doc: dict[str, Any] = {"section": encode_section(lb.section)}
    if lb.base_twist:
        doc["base_twist"] = lb.base_twist
    if lb.fibre_twists:
        doc["fibre_twists"] = list(lb.fibre_twists)
    return doc


def decode_line_bundle(doc: Any, surface: SurfaceData, where: str = "line bundle") -> LineBundleOnX:
    body = _expect_map(doc, where)
    section = decode_section(body.get("section"), surface, f"{where}.section")
    twist = _expect_int(body.get("base_twist", 0), f"{where}.base_twist")
    fibre_twists = tuple(
        _expect_int(t, f"{where}.fibre_twists entry")
        for t in _expect_list(body.get("fibre_twists", []), f"{where}.fibre_twists")
    )
    return LineBundleOnX(section, twist, fibre_twists)


def encode_bundle(bundle: RankTwoBundle) -> dict:
    if isinstance(bundle, ExtensionBundle):
        inner: dict[str, Any] = {
            "D": encode_line_bundle(bundle.sub),
            "delta": encode_line_bundle(bundle.determinant),
        }
        if bundle.zero_cycle:
            inner["Z"] = [[encode_complex(p), n] for p, n in bundle.zero_cycle]
        if bundle.nonsplit_at:
            inner["nonsplit_at"] = [encode_complex(p) for p in bundle.nonsplit_at]
        if bundle.nonsplit_everywhere:
            inner["nonsplit_everywhere"] = True
        return {"extension": inner}
    if isinstance(bundle, SpectralPushBundle):
        return {
            "spectral_push": {
                "bisection": encode_bisection(bundle.cover),
                "delta": encode_line_bundle(bundle.determinant),
            }
        }
    return {
        "elem_mod": {
            "parent": encode_bundle(bundle.parent),
            "fibre": encode_complex(bundle.fibre),
            "steps": bundle.steps,
        }
    }


def decode_bundle(doc: Any, surface: SurfaceData, where: str = "bundle") -> RankTwoBundle:
    body = _expect_map(doc, where)
    try:
        if "extension" in body:
            inner = _expect_map(body["extension"], f"{where}.extension")
            cycle = []
            for item in _expect_list(inner.get("Z", []), f"{where}.extension.Z"):
                pair = _expect_list(item, f"{where}.extension.Z entry")
                if len(pair) != 2:
                    raise SchemaError(f"{where}.extension.Z entry: expected [point, length]")
                cycle.append(
                    (
                        decode_complex(pair[0], "cycle point"),
                        _expect_int(pair[1], "cycle length"),
                    )
                )
            nonsplit = tuple(
                decode_complex(p, f"{where}.extension.nonsplit_at entry")
                for p in _expect_list(
                    inner.get("nonsplit_at", []), f"{where}.extension.nonsplit_at"
                )
            )
            return ExtensionBundle(
                sub=decode_line_bundle(inner.get("D"), surface, f"{where}.extension.D"),
                determinant=decode_line_bundle(
                    inner.get("delta"), surface, f"{where}.extension.delta"
                ),
                zero_cycle=tuple(cycle),
                nonsplit_at=nonsplit,
                nonsplit_everywhere=bool(inner.get("nonsplit_everywhere", False)),
            )
        if "spectral_push" in body:
            inner = _expect_map(body["spectral_push"], f"{where}.spectral_push")
            return SpectralPushBundle(
                cover=decode_bisection(
                    inner.get("bisection"), surface, f"{where}.spectral_push.bisection"
                ),
                determinant=decode_line_bundle(
                    inner.get("delta"), surface, f"{where}.spectral_push.delta"
                ),
            )
        if "elem_mod" in body:
            inner = _expect_map(body["elem_mod"], f"{where}.elem_mod")
            return ElemModBundle(
                parent=decode_bundle(inner.get("parent"), surface, f"{where}.elem_mod.parent"),
                fibre=decode_complex(inner.get("fibre"), f"{where}.elem_mod.fibre"),
                steps=_expect_int(inner.get("steps"), f"{where}.elem_mod.steps"),
            )
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(
        f"{where}: expected an 'extension', 'spectral_push', or 'elem_mod' key"
    )


# ---------------------------------------------------------------------------
# outward documents: spectral covers, recipes, verdicts


def encode_cover(cover: SpectralCover) -> dict:
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "bisection": encode_bisection(cover.bisection),
        "jump_fibres": [[encode_complex(p), m] for p, m in cover.jump_fibres],
        "dual_determinant": encode_section(cover.dual_determinant),
    }
    if cover.verification_samples:
        doc["verification"] = {
            "samples": cover.verification_samples,
            "max_residual": cover.max_residual,
        }
    return doc


def decode_cover(doc: Any, surface: SurfaceData) -> SpectralCover:
    body = _expect_map(doc, "cover")
    check_version(body)
    jumps = []
    for item in _expect_list(body.get("jump_fibres", []), "cover.jump_fibres"):
        pair = _expect_list(item, "cover.jump_fibres entry")
        if len(pair) != 2:
            raise SchemaError("cover.jump_fibres entry: expected [point, multiplicity]")
        jumps.append(
            (decode_complex(pair[0], "jump point"), _expect_int(pair[1], "jump multiplicity"))
        )
    verification = body.get("verification") or {}
    return SpectralCover(
        bisection=decode_bisection(body.get("bisection"), surface, "cover.bisection"),
        jump_fibres=tuple(jumps),
        dual_determinant=decode_section(
            body.get("dual_determinant"), surface, "cover.dual_determinant"
        ),
        verification_samples=_expect_int(verification.get("samples", 0), "verification.samples"),
        max_residual=float(verification.get("max_residual", 0.0)),
    )


def encode_recipe(recipe: Recipe | None) -> dict | None:
    if recipe is None:
        return None
    return {
        "base": encode_bundle(recipe.base),
        "base_delta": encode_fraction(recipe.base_delta),
        "generic_fibre": encode_complex(recipe.generic_fibre),
        "modification_steps": recipe.modification_steps,
    }


def decode_recipe(doc: Any, surface: SurfaceData) -> Recipe:
    body = _expect_map(doc, "recipe")
    return Recipe(
        base=decode_bundle(body.get("base"), surface, "recipe.base"),
        base_delta=decode_fraction(body.get("base_delta"), "recipe.base_delta"),
        generic_fibre=decode_complex(body.get("generic_fibre"), "recipe.generic_fibre"),
        modification_steps=_expect_int(
            body.get("modification_steps"), "recipe.modification_steps"
        ),
    )


def encode_verdict(verdict: Verdict) -> dict:
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "verdict": verdict.status.value,
        "delta": encode_fraction(verdict.delta),
        "lattice_minimum": encode_fraction(verdict.lattice_minimum),
        "filtrable": verdict.filtrable,
        "recipe": encode_recipe(verdict.recipe),
    }
    if verdict.threshold_interval is not None:
        doc["threshold_interval"] = [
            encode_fraction(verdict.threshold_interval[0]),
            encode_fraction(verdict.threshold_interval[1]),
        ]
    if verdict.d_interval is not None:
        doc["d_interval"] = list(verdict.d_interval)
    if verdict.note:
        doc["note"] = verdict.note
    return doc


def decode_verdict(doc: Any, surface: SurfaceData) -> Verdict:
    body = _expect_map(doc, "verdict")
    check_version(body)
    status = {e.value: e for e in Existence}.get(body.get("verdict"))
    if status is None:
        raise SchemaError("verdict: unknown status value")
    interval = None
    if body.get("threshold_interval") is not None:
        pair = _expect_list(body["threshold_interval"], "threshold_interval")
        if len(pair) != 2:
            raise SchemaError("threshold_interval: expected two endpoints")
        interval = (
            decode_fraction(pair[0], "threshold_interval[0]"),
            decode_fraction(pair[1], "threshold_interval[1]"),
        )
    d_interval = None
    if body.get("d_interval") is not None:
        pair = _expect_list(body["d_interval"], "d_interval")
        if len(pair) != 2:
            raise SchemaError("d_interval: expected two endpoints")
        d_interval = (_expect_int(pair[0], "d_interval[0]"), _expect_int(pair[1], "d_interval[1]"))
    recipe = None
    if body.get("recipe") is not None:
        recipe = decode_recipe(body["recipe"], surface)
    return Verdict(
        status=status,
        delta=decode_fraction(body.get("delta"), "delta"),
        lattice_minimum=decode_fraction(body.get("lattice_minimum"), "lattice_minimum"),
        filtrable=body.get("filtrable"),
        threshold_interval=interval,
        d_interval=d_interval,
        recipe=recipe,
        note=body.get("note", ""),
    )
