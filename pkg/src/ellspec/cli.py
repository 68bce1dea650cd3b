"""Command-line interface.

Subcommands read a JSON request (file path or '-' for stdin) and write a
JSON response.  A request carries the surface description plus the
command-specific payload ("chern", "bundle", "classes", "d") and may
embed an "options" object ({"tol", "seed", "verify", "d",
"enum_radius"}); command-line flags override embedded options.  Exit
codes: 0 affirmative / success, 1 negative, 2 undecided, 64 schema
violation, 70 computational or validation error.  With --batch the
input is an array of requests for the same subcommand; the output is
the array of responses in order and the exit code is the maximum over
the items.
"""

from __future__ import annotations

import argparse
import cmath
import itertools
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .bundles import apply_modification_ledger, spectral_cover
from .existence import Existence, existence_verdict
from .jacobian import SectionOfJ, genus_and_branching, involution_on_section
from .schemas import (
    SCHEMA_VERSION,
    SchemaError,
    check_version,
    decode_bundle,
    decode_chern,
    decode_ns_class,
    decode_surface,
    encode_chern,
    encode_cover,
    encode_verdict,
)
from .surface import (
    ChernData,
    NSClass,
    SurfaceData,
    filtrable_bound,
    pairing,
    self_intersection,
)
from .tate import (
    TatePoint,
    Tolerance,
    distance_to_identity,
    points_equal,
    quotient_x_at,
)

EX_OK = 0
EX_NEGATIVE = 1
EX_UNDECIDED = 2
EX_SCHEMA = 64
EX_FAILURE = 70

_STATUS_CODES = {
    Existence.EXISTS: EX_OK,
    Existence.NOT_EXISTS: EX_NEGATIVE,
    Existence.UNKNOWN: EX_UNDECIDED,
}


@dataclass(frozen=True)
class Options:
    tol: float = 1e-9
    seed: int = 0
    verify: int = 50
    d: int | None = None
    enum_radius: int | None = None

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(self.tol)


def _merge_options(args: argparse.Namespace, doc: Any) -> Options:
    embedded = doc.get("options", {}) if isinstance(doc, dict) else {}
    if not isinstance(embedded, dict):
        raise SchemaError("options: expected an object")

    def pick(flag, key, fallback):
        if flag is not None:
            return flag
        if embedded.get(key) is not None:
            return embedded[key]
        return fallback

    opts = Options(
        tol=float(pick(args.tol, "tol", 1e-9)),
        seed=int(pick(args.seed, "seed", 0)),
        verify=int(pick(args.verify, "verify", 50)),
        d=pick(args.d, "d", None),
        enum_radius=pick(args.enum_radius, "enum_radius", None),
    )
    if opts.d is not None and not isinstance(opts.d, int):
        raise SchemaError("options.d: expected an integer")
    if opts.enum_radius is not None and not isinstance(opts.enum_radius, int):
        raise SchemaError("options.enum_radius: expected an integer")
    return opts


def _read_input(path: str) -> Any:
    try:
        raw = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from exc


def _request_chern(doc: dict, surface: SurfaceData, args: argparse.Namespace) -> ChernData:
    chern_doc = doc.get("chern")
    if args.c1 is not None or args.c2 is not None:
        if not isinstance(chern_doc, dict):
            chern_doc = {}
        chern_doc = dict(chern_doc)
        if args.c1 is not None:
            try:
                chern_doc["c1"] = json.loads(args.c1)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"--c1 is not valid JSON: {exc}") from exc
        if args.c2 is not None:
            chern_doc["c2"] = args.c2
    return decode_chern(chern_doc, surface)


def _enum_minimum(c1: NSClass, surface: SurfaceData, radius: int) -> Fraction:
    """Brute-force the lattice minimum over the cube [-radius, radius]^rank."""
    lattice = surface.lattice
    if lattice.rank == 0:
        return Fraction(0)
    best = None
    for mu in itertools.product(range(-radius, radius + 1), repeat=lattice.rank):
        shifted = tuple(a - 2 * b for a, b in zip(c1.hom, mu))
        val = lattice.degree(shifted)
        if best is None or val < best:
            best = val
    return Fraction(best, 4)


def _cross_check_minimum(c1: NSClass, surface: SurfaceData, radius: int | None) -> None:
    if radius is None:
        return
    m, _ = filtrable_bound(c1, surface.lattice)
    brute = _enum_minimum(c1, surface, radius)
    if brute != m:
        raise RuntimeError(
            f"lattice minimum cross-check failed: closed-form {m} vs enumerated {brute} "
            f"(radius {radius})"
        )


def _cmd_exists(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    opts = _merge_options(args, doc)
    surface = decode_surface(doc.get("surface"))
    cd = _request_chern(doc, surface, args)
    d = opts.d if opts.d is not None else doc.get("d")
    if d is not None and (isinstance(d, bool) or not isinstance(d, int)):
        raise SchemaError("d: expected an integer")
    _cross_check_minimum(cd.c1, surface, opts.enum_radius)
    verdict = existence_verdict(cd, surface, d=d, tol=opts.tolerance, seed=opts.seed)
    return encode_verdict(verdict), _STATUS_CODES[verdict.status]


def _cmd_recipe(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    opts = _merge_options(args, doc)
    surface = decode_surface(doc.get("surface"))
    cd = _request_chern(doc, surface, args)
    d = opts.d if opts.d is not None else doc.get("d")
    if d is not None and (isinstance(d, bool) or not isinstance(d, int)):
        raise SchemaError("d: expected an integer")
    verdict = existence_verdict(cd, surface, d=d, tol=opts.tolerance, seed=opts.seed)
    code = _STATUS_CODES[verdict.status]
    body = encode_verdict(verdict)
    if verdict.status is not Existence.EXISTS:
        return (
            {
                "schema": SCHEMA_VERSION,
                "error": f"no construction: verdict is {verdict.status.value}",
                "verdict": verdict.status.value,
            },
            code,
        )
    out: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "verdict": body["verdict"],
        "recipe": body["recipe"],
    }
    if verdict.recipe is not None:
        from .bundles import chern_data

        snapshot = chern_data(verdict.recipe.base, surface, opts.tolerance)
        transcript = [encode_chern(snapshot)]
        for _ in range(verdict.recipe.modification_steps):
            snapshot = apply_modification_ledger(snapshot, 1, surface.lattice)
            transcript.append(encode_chern(snapshot))
        out["transcript"] = transcript
    if body.get("note"):
        out["note"] = body["note"]
    return out, code


def _cmd_spectral_cover(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    opts = _merge_options(args, doc)
    surface = decode_surface(doc.get("surface"))
    bundle = decode_bundle(doc.get("bundle"), surface)
    cover = spectral_cover(
        bundle,
        surface,
        opts.tolerance,
        verify_samples=opts.verify,
        seed=opts.seed,
    )
    return encode_cover(cover), EX_OK


def _cmd_intersect(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    surface = decode_surface(doc.get("surface"))
    classes = doc.get("classes")
    if not isinstance(classes, list) or len(classes) != 2:
        raise SchemaError("classes: expected an array of two classes")
    a = decode_ns_class(classes[0], surface, "classes[0]")
    b = decode_ns_class(classes[1], surface, "classes[1]")
    return (
        {
            "schema": SCHEMA_VERSION,
            "pairing": pairing(a, b, surface.lattice),
            "self_intersections": [
                self_intersection(a, surface.lattice),
                self_intersection(b, surface.lattice),
            ],
        },
        EX_OK,
    )


def _cmd_genus(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    surface = decode_surface(doc.get("surface"))
    cd = _request_chern(doc, surface, args)
    genus, branch = genus_and_branching(cd, surface.base.genus, surface.lattice)
    return (
        {"schema": SCHEMA_VERSION, "genus": genus, "branch_count": branch},
        EX_OK,
    )


# ---------------------------------------------------------------------------
# check: the invariant self-test suite


def _check_hurwitz(surface: SurfaceData, tol: Tolerance, rng: random.Random) -> tuple[bool, str]:
    g = surface.base.genus
    cases = 0
    for c2 in range(-4, 5):
        for t0 in range(-2, 3):
            c1 = NSClass((t0,) + (0,) * (surface.torsion_rank - 1), (0,) * surface.lattice.rank)
            cd = ChernData(c1, c2)
            try:
                cover_genus, branch = genus_and_branching(cd, g, surface.lattice)
            except ValueError:
                continue
            if 2 * cover_genus - 2 != 2 * (2 * g - 2) + branch:
                return False, f"violated at c2={c2}, c1 torsion {t0}"
            cases += 1
    return True, f"{cases} cases"


def _check_involution(surface: SurfaceData, tol: Tolerance, rng: random.Random) -> tuple[bool, str]:
    curve = surface.fibre
    trials = 25
    for _ in range(trials):
        delta = SectionOfJ(
            _random_point(curve, rng),
            tuple(rng.randint(-2, 2) for _ in range(surface.lattice.rank)),
        )
        section = SectionOfJ(
            _random_point(curve, rng),
            tuple(rng.randint(-2, 2) for _ in range(surface.lattice.rank)),
        )
        twice = involution_on_section(involution_on_section(section, delta), delta)
        if twice.hom != section.hom:
            return False, "hom part not restored"
        if not points_equal(twice.constant, section.constant, Tolerance(max(tol.eps, 1e-9) * 100)):
            return False, "constant part not restored"
    return True, f"{trials} random sections"


def _check_bilinearity(surface: SurfaceData, tol: Tolerance, rng: random.Random) -> tuple[bool, str]:
    trials = 25
    for _ in range(trials):
        a, b, c = (_random_class(surface, rng) for _ in range(3))
        if pairing(a + b, c, surface.lattice) != pairing(a, c, surface.lattice) + pairing(
            b, c, surface.lattice
        ):
            return False, "additivity failed"
        if pairing(a, b, surface.lattice) != pairing(b, a, surface.lattice):
            return False, "symmetry failed"
    return True, f"{trials} random triples"


def _check_x_symmetry(surface: SurfaceData, tol: Tolerance, rng: random.Random) -> tuple[bool, str]:
    curve = surface.fibre
    q = curve.q
    trials = 20
    worst = 0.0
    for _ in range(trials):
        u = _random_point(curve, rng).rep
        x0 = quotient_x_at(u, curve, tol)
        scale = max(1.0, abs(x0))
        for other in (1.0 / u, q * u):
            diff = abs(quotient_x_at(other, curve, tol) - x0)
            worst = max(worst, diff / scale)
            if diff > 1e4 * tol.eps * scale:
                return False, f"x({u:.4f}) differs by {diff:.2e}"
    return True, f"{trials} points, max relative drift {worst:.2e}"


def _random_point(curve, rng: random.Random) -> TatePoint:
    r = rng.uniform(0.08, 0.92)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    rep = abs(curve.tau) ** r * cmath.exp(1j * theta)
    p = TatePoint(rep, curve)
    if distance_to_identity(p) < 1e-3:
        return TatePoint(rep * cmath.exp(0.5j), curve)
    return p


def _random_class(surface: SurfaceData, rng: random.Random) -> NSClass:
    return NSClass(
        tuple(rng.randint(-3, 3) for _ in range(surface.torsion_rank)),
        tuple(rng.randint(-3, 3) for _ in range(surface.lattice.rank)),
    )


_CHECKS: tuple[tuple[str, Callable], ...] = (
    ("hurwitz-identity", _check_hurwitz),
    ("involution-idempotence", _check_involution),
    ("pairing-bilinearity", _check_bilinearity),
    ("quotient-x-symmetry", _check_x_symmetry),
)


def _cmd_check(doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    check_version(doc)
    opts = _merge_options(args, doc)
    surface = decode_surface(doc.get("surface"))
    tol = opts.tolerance
    rng = random.Random(opts.seed)
    results = []
    all_passed = True
    for name, fn in _CHECKS:
        passed, detail = fn(surface, tol, rng)
        all_passed = all_passed and passed
        results.append({"name": name, "passed": passed, "detail": detail})
    if opts.enum_radius is not None:
        c1 = NSClass((0,) * surface.torsion_rank, (1,) * surface.lattice.rank)
        try:
            _cross_check_minimum(c1, surface, opts.enum_radius)
            results.append(
                {
                    "name": "lattice-minimum-enumeration",
                    "passed": True,
                    "detail": f"radius {opts.enum_radius}",
                }
            )
        except RuntimeError as exc:
            all_passed = False
            results.append(
                {"name": "lattice-minimum-enumeration", "passed": False, "detail": str(exc)}
            )
    return (
        {"schema": SCHEMA_VERSION, "passed": all_passed, "checks": results},
        EX_OK if all_passed else EX_FAILURE,
    )


_COMMANDS = {
    "exists": _cmd_exists,
    "recipe": _cmd_recipe,
    "spectral-cover": _cmd_spectral_cover,
    "intersect": _cmd_intersect,
    "genus": _cmd_genus,
    "check": _cmd_check,
}


def _run_one(handler, doc: Any, args: argparse.Namespace) -> tuple[dict, int]:
    try:
        return handler(doc, args)
    except SchemaError as exc:
        return (
            {"schema": SCHEMA_VERSION, "error": str(exc), "exit_code": EX_SCHEMA},
            EX_SCHEMA,
        )
    except (ValueError, RuntimeError, AssertionError, ZeroDivisionError, OverflowError) as exc:
        return (
            {"schema": SCHEMA_VERSION, "error": str(exc), "exit_code": EX_FAILURE},
            EX_FAILURE,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellspec",
        description="Rank-2 bundles on non-Kähler elliptic surfaces: existence "
        "verdicts, spectral covers, and intersection arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} computation on a JSON request")
        p.add_argument("input", nargs="?", default="-", help="request file, or - for stdin")
        p.add_argument("--tol", type=float, default=None, help="numeric tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=None, help="seed for sampled base points")
        p.add_argument(
            "--verify",
            type=int,
            default=None,
            help="fibres sampled when verifying a spectral cover (default 50)",
        )
        p.add_argument(
            "--d", type=int, default=None, help="irreducible bisection degree, when known"
        )
        p.add_argument(
            "--enum-radius",
            type=int,
            default=None,
            help="cross-check the lattice minimum by brute force over this cube radius",
        )
        p.add_argument(
            "--c1",
            default=None,
            help='first Chern class as JSON, e.g. {"torsion":[0],"hom":[1]}',
        )
        p.add_argument("--c2", type=int, default=None, help="second Chern number")
        p.add_argument(
            "--batch",
            action="store_true",
            help="treat the input as an array of requests; exit with the maximum item code",
        )
        p.add_argument(
            "--output", default=None, help="write the JSON response here instead of stdout"
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        doc = _read_input(args.input)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_SCHEMA
    if args.batch:
        if not isinstance(doc, list):
            print("error: --batch input must be a JSON array", file=sys.stderr)
            return EX_SCHEMA
        outputs, codes = [], [EX_OK]
        for item in doc:
            body, code = _run_one(handler, item, args)
            outputs.append(body)
            codes.append(code)
        _emit(outputs, args.output)
        return max(codes)
    body, code = _run_one(handler, doc, args)
    _emit(body, args.output)
    if "error" in body:
        print(f"error: {body['error']}", file=sys.stderr)
    return code


def _emit(body: Any, path: str | None) -> None:
    text = json.dumps(body, indent=2, allow_nan=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    sys.exit(main())
