"""Surface data and exact Chern arithmetic.

The Neron-Severi group modulo torsion of the surfaces handled here is a
lattice of homomorphisms of rank at most two, carrying a positive
semidefinite degree form; curve classes pair through

    c . c' = -2 B(c, c')        c^2 = -2 deg(c)

where B is the polarisation of deg.  Torsion is spanned by the fibre
class and one class per multiple fibre, and pairs to zero against
everything.  All bookkeeping is exact: integers and fractions only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .tate import CurveParam


def as_fraction(x) -> Fraction:
    """Exact conversion; floats are accepted only when they are exact halves."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        f = Fraction(x)
        if f.denominator in (1, 2):
            return f
        raise ValueError(f"non-exact gram entry {x!r}; use 'p/q' strings")
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


@dataclass(frozen=True)
class HomLattice:
    """Rank <= 2 lattice with a positive-semidefinite degree form.

    gram is the symmetric matrix of the polarisation B, so
    deg(v) = v . gram . v; diagonal entries are integers (degrees of the
    generators) and off-diagonal entries are half-integers.
    """

    rank: int
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.rank not in (0, 1, 2):
            raise ValueError("lattice rank must be 0, 1 or 2")
        g = tuple(tuple(as_fraction(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != self.rank or any(len(row) != self.rank for row in g):
            raise ValueError("gram matrix shape does not match the rank")
        for i in range(self.rank):
            if g[i][i].denominator != 1:
                raise ValueError("generator degrees (gram diagonal) must be integers")
            for j in range(self.rank):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
                if (2 * g[i][j]).denominator != 1:
                    raise ValueError("gram entries must be half-integers")
        # positive semidefinite, exactly
        if self.rank >= 1 and g[0][0] < 0:
            raise ValueError("degree form is indefinite")
        if self.rank == 2:
            if g[1][1] < 0 or g[0][0] * g[1][1] - g[0][1] ** 2 < 0:
                raise ValueError("degree form is indefinite")

    def _check_vec(self, v: tuple[int, ...]) -> None:
        if len(v) != self.rank:
            raise ValueError(f"vector length {len(v)} does not match lattice rank {self.rank}")

    def bilinear(self, v: tuple[int, ...], w: tuple[int, ...]) -> Fraction:
        self._check_vec(v)
        self._check_vec(w)
        total = Fraction(0)
        for i in range(self.rank):
            for j in range(self.rank):
                total += self.gram[i][j] * v[i] * w[j]
        return total

    def degree(self, v: tuple[int, ...]) -> int:
        d = self.bilinear(v, v)
        assert d.denominator == 1
        return int(d)

    def determinant(self) -> Fraction:
        if self.rank == 0:
            return Fraction(1)
        if self.rank == 1:
            return self.gram[0][0]
        return self.gram[0][0] * self.gram[1][1] - self.gram[0][1] ** 2


UNIT_LATTICE = HomLattice(1, ((Fraction(1),),))
ZERO_LATTICE = HomLattice(0, ())


@dataclass(frozen=True)
class BaseCurve:
    """Base of the fibration: rational (g=0), a concrete Tate model (g=1),
    or abstract (g >= 2, no point arithmetic)."""

    genus: int
    tate: CurveParam | None = None

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.genus == 1 and self.tate is None:
            raise ValueError("a genus-1 base needs a concrete multiplier (Tate model)")
        if self.genus != 1 and self.tate is not None:
            raise ValueError("only a genus-1 base carries a Tate model")

    @property
    def is_rational(self) -> bool:
        return self.genus == 0

    @property
    def is_abstract(self) -> bool:
        return self.genus >= 2


@dataclass(frozen=True)
class SurfaceData:
    """An elliptic quotient surface over the base, with fibre C*/<tau>.

    multiple_fibres lists (base point, multiplicity >= 2) pairs; a
    positive theta degree marks the principal case and excludes multiple
    fibres.  hom_exponents optionally realises the lattice generators as
    power maps z -> z^n on a genus-1 base whose multiplier equals tau.
    """

    base: BaseCurve
    fibre: CurveParam
    multiple_fibres: tuple[tuple[complex, int], ...] = ()
    theta_degree: int | None = None
    lattice: HomLattice = field(default=ZERO_LATTICE)
    hom_exponents: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        pts = [complex(b) for b, _ in self.multiple_fibres]
        for i, p in enumerate(pts):
            if p in pts[:i]:
                raise ValueError("multiple fibres must sit over distinct base points")
        for _, mult in self.multiple_fibres:
            if mult < 2:
                raise ValueError("multiple-fibre multiplicities are at least 2")
        if self.theta_degree is not None:
            if self.theta_degree <= 0:
                raise ValueError("theta degree must be positive when present")
            if self.multiple_fibres:
                raise ValueError("theta degree applies only without multiple fibres")
        if self.hom_exponents is not None:
            if len(self.hom_exponents) != self.lattice.rank:
                raise ValueError("one power-map exponent per lattice generator")
            if any(self.hom_exponents):
                if self.base.genus != 1:
                    raise ValueError("power-map generators need a genus-1 base")
                if self.base.tate != self.fibre:
                    raise ValueError(
                        "power maps z -> z^n are defined only when the base multiplier equals tau"
                    )

    @property
    def torsion_rank(self) -> int:
        return 1 + len(self.multiple_fibres)


@dataclass(frozen=True)
class NSClass:
    """Class in NS(X): torsion coordinates (fibre, then one per multiple fibre)
    and coordinates in the hom lattice."""

    torsion: tuple[int, ...]
    hom: tuple[int, ...]

    def __add__(self, other: "NSClass") -> "NSClass":
        _same_shape(self, other)
        return NSClass(
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
            tuple(a + b for a, b in zip(self.hom, other.hom)),
        )

    def __sub__(self, other: "NSClass") -> "NSClass":
        _same_shape(self, other)
        return NSClass(
            tuple(a - b for a, b in zip(self.torsion, other.torsion)),
            tuple(a - b for a, b in zip(self.hom, other.hom)),
        )

    def __neg__(self) -> "NSClass":
        return NSClass(tuple(-a for a in self.torsion), tuple(-a for a in self.hom))

    def scale(self, k: int) -> "NSClass":
        return NSClass(tuple(k * a for a in self.torsion), tuple(k * a for a in self.hom))

    @staticmethod
    def zero(torsion_rank: int, hom_rank: int) -> "NSClass":
        return NSClass((0,) * torsion_rank, (0,) * hom_rank)


def _same_shape(a: NSClass, b: NSClass) -> None:
    if len(a.torsion) != len(b.torsion) or len(a.hom) != len(b.hom):
        raise ValueError("NS classes have mismatched coordinate shapes")


@dataclass(frozen=True)
class ChernData:
    c1: NSClass
    c2: int


def self_intersection(c: NSClass, lattice: HomLattice) -> int:
    """c^2 = -2 deg(hom part); torsion contributes nothing."""
    return -2 * lattice.degree(c.hom)


def pairing(a: NSClass, b: NSClass, lattice: HomLattice) -> int:
    """Intersection number via the polarisation of the degree form."""
    val = -2 * lattice.bilinear(a.hom, b.hom)
    assert val.denominator == 1
    return int(val)


def discriminant(cd: ChernData, lattice: HomLattice) -> Fraction:
    """(c2 - c1^2/4) / 2, exactly."""
    return Fraction(4 * cd.c2 - self_intersection(cd.c1, lattice), 8)


def spectral_support_count(cd: ChernData, lattice: HomLattice) -> int:
    """c2 - c1^2/2: the total multiplicity of the spectral support."""
    c1sq = self_intersection(cd.c1, lattice)
    assert c1sq % 2 == 0
    return cd.c2 - c1sq // 2


def canonical_class(surface: SurfaceData) -> NSClass:
    """(2g-2) fibres plus the reduced multiple fibres, each with weight m_i - 1."""
    torsion = (2 * surface.base.genus - 2,) + tuple(m - 1 for _, m in surface.multiple_fibres)
    return NSClass(torsion, (0,) * surface.lattice.rank)


def _lex_best(current: tuple[int, ...] | None, candidate: tuple[int, ...]) -> bool:
    return current is None or candidate < current


def filtrable_bound(c1: NSClass, lattice: HomLattice) -> tuple[Fraction, NSClass]:
    """Minimum of deg(c1 - 2 mu)/4 over lattice vectors mu, with a witness.

    Returns (m, w) where w = c1 - 2 mu* attains the minimum; its
    self-intersection is -8m.  The minimiser is found by exact closest
    vector enumeration: for definite forms inside a provably sufficient
    box around c1/2, for degenerate forms along a complement of the
    kernel (the value is constant along kernel directions, and the
    witness fixes the kernel coordinate to zero).  Ties go to the
    lexicographically smallest witness coordinates.
    """
    rank = lattice.rank
    w = c1.hom
    lattice._check_vec(w)
    if rank == 0:
        return Fraction(0), NSClass(c1.torsion, ())

    def value(mu: tuple[int, ...]) -> int:
        return lattice.degree(tuple(a - 2 * b for a, b in zip(w, mu)))

    def witness_of(mu: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(a - 2 * b for a, b in zip(w, mu))

    candidates: list[tuple[int, ...]]
    if all(x == 0 for row in lattice.gram for x in row):
        candidates = [(0,) * rank]
    elif rank == 1:
        lo = w[0] // 2
        candidates = [(lo,), (lo + 1,)]
    else:
        det = lattice.determinant()
        if det == 0:
            kernel = _kernel_primitive(lattice)
            comp = _unimodular_complement(kernel)
            ds = lattice.degree(comp)
            assert ds > 0
            bw = lattice.bilinear(w, comp)
            b0 = bw / (2 * ds)
            lo = math.floor(b0)
            candidates = [
                tuple(k * comp[i] for i in range(2)) for k in (lo, lo + 1)
            ]
        else:
            # positive definite: lambda_min >= det/trace bounds the search box
            tr = lattice.gram[0][0] + lattice.gram[1][1]
            centre = [Fraction(x, 2) for x in w]
            rounded = tuple(int(round(x)) for x in centre)
            best0 = Fraction(value(rounded))
            r2 = best0 * tr / det  # |w - 2 mu|^2 bound
            half = math.isqrt(math.ceil(r2 / 4)) + 1  # |mu_i - w_i/2| bound
            candidates = [
                (rounded[0] + i, rounded[1] + j)
                for i in range(-half, half + 1)
                for j in range(-half, half + 1)
            ]

    best_val: int | None = None
    best_wit: tuple[int, ...] | None = None
    for mu in candidates:
        v = value(mu)
        wit = witness_of(mu)
        if best_val is None or v < best_val or (v == best_val and _lex_best(best_wit, wit)):
            best_val, best_wit = v, wit
    assert best_val is not None and best_wit is not None
    return Fraction(best_val, 4), NSClass(c1.torsion, best_wit)


def _kernel_primitive(lattice: HomLattice) -> tuple[int, int]:
    """Primitive integer kernel vector of a degenerate rank-2 form."""
    a, b = lattice.gram[0][0], lattice.gram[0][1]
    if a == 0:
        # psd with zero diagonal entry forces the off-diagonal to vanish
        return (1, 0)
    # a x + b y = 0 along (-b, a); clear denominators and divide by gcd
    num_b, den_b = b.numerator, b.denominator
    num_a, den_a = a.numerator, a.denominator
    x = -num_b * den_a
    y = num_a * den_b
    g = math.gcd(abs(x), abs(y))
    return (x // g, y // g)


def _unimodular_complement(kernel: tuple[int, int]) -> tuple[int, int]:
    """Vector s with det(kernel, s) = 1, from Bezout coefficients."""
    k1, k2 = kernel
    g, a, b = _xgcd(k1, k2)
    assert g == 1, "kernel vector must be primitive"
    return (-b, a)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qu = old_r // r
        old_r, r = r, old_r - qu * r
        old_s, s = s, old_s - qu * s
        old_t, t = t, old_t - qu * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
