"""Fan towers and their boundary points: chains of nested cones.

A tower is a sequence of complete fans, each subdividing the last, with
stored subdivision witnesses.  A boundary point is approached through a
compatible chain of cones, one per level; resolving the chain means
intersecting it exactly and asking whether a single ray remains.  Rational
directions resolve at finite depth, irrational ones never do, and the
descriptor type keeps "not yet resolved" as a first-class answer rather than
an error.

Irrational coordinates enter only through SymbolicVector: each coordinate is
a rational linear combination of 1 and declared symbols alpha_1, ..., alpha_k
that the caller asserts are Q-linearly independent together with 1.  Sign
questions about such coordinates are answered exactly when the combination
is rational or identically zero, and otherwise through the rational interval
enclosure each symbol carries; if the enclosure straddles zero while the
combination is nonzero, UndecidableSign reports the offending data so the
caller can supply a tighter enclosure.  Independence itself is never proved
here; it is the caller's mathematical assertion, and it is what makes
"combination is zero" decidable by linear algebra alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence, Union

from . import _linalg as la
from .errors import (
    DepthCap,
    DimensionMismatch,
    EmptyChain,
    IndexOutOfRange,
    UndecidableSign,
    ZeroVector,
)
from .fans import Fan, SubdivisionWitness, common_refinement, is_subdivision, \
    stellar_subdivision
from .lattice import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    Cone,
    Ray,
    cone_contains,
    cone_intersect,
    cone_subset,
    halfspaces_to_generators,
    make_cone,
    primitive,
)

IVec = tuple[int, ...]
TOWER_DEPTH_CAP = 64
_ENCLOSURE_DEN = 10 ** 6


@dataclass(frozen=True)
class Symbol:
    """A declared irrational with a rational interval enclosure."""

    name: str
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure for {self.name}")

    @staticmethod
    def sqrt(k: int) -> "Symbol":
        """Symbol for sqrt(k) with a width-10^-6 rational enclosure."""
        if k <= 0:
            raise ValueError("sqrt symbol needs a positive argument")
        s = isqrt(k * _ENCLOSURE_DEN ** 2)
        lo = Fraction(s, _ENCLOSURE_DEN)
        hi = lo if s * s == k * _ENCLOSURE_DEN ** 2 else \
            Fraction(s + 1, _ENCLOSURE_DEN)
        return Symbol(f"sqrt{k}", lo, hi)


Coefficient = Union[int, Fraction]
Entry = Union[Coefficient, Sequence[Coefficient]]


def _interval_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _interval_scale(c: Fraction, iv):
    lo, hi = c * iv[0], c * iv[1]
    return (lo, hi) if lo <= hi else (hi, lo)


@dataclass(frozen=True)
class SymbolicVector:
    """A vector whose entries are Q-linear combinations of 1 and symbols."""

    symbols: tuple[Symbol, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.rows for c in row)

    def interval(self, i: int) -> tuple[Fraction, Fraction]:
        """Rational interval enclosure of coordinate i."""
        return _combination_interval(self.rows[i], self.symbols)

    def as_rational(self) -> Optional[tuple[Fraction, ...]]:
        """The exact rational value, or None if any symbol really occurs."""
        if any(c != 0 for row in self.rows for c in row[1:]):
            return None
        return tuple(row[0] for row in self.rows)


def _combination_interval(row, symbols):
    iv = (row[0], row[0])
    for c, s in zip(row[1:], symbols):
        iv = _interval_add(iv, _interval_scale(c, (s.lo, s.hi)))
    return iv


def symbolic_vector(entries: Sequence[Entry],
                    symbols: Sequence[Symbol] = ()) -> SymbolicVector:
    """Build a SymbolicVector; plain numbers mean rational coordinates."""
    symbols = tuple(symbols)
    k = len(symbols)
    rows = []
    for e in entries:
        if isinstance(e, (int, Fraction)):
            row = (Fraction(e),) + (Fraction(0),) * k
        else:
            coeffs = [Fraction(c) for c in e]
            if len(coeffs) != k + 1:
                raise DimensionMismatch(
                    f"entry {e} needs {k + 1} coefficients over (1, "
                    + ", ".join(s.name for s in symbols) + ")")
            row = tuple(coeffs)
        rows.append(row)
    return SymbolicVector(symbols, tuple(rows))


def rational_vector(v: Sequence[Coefficient]) -> SymbolicVector:
    """SymbolicVector wrapper around an ordinary rational vector."""
    return symbolic_vector(list(v))


def sign_of(x: SymbolicVector, functional: Sequence[Coefficient]) -> int:
    """Exact sign of <functional, x>, or UndecidableSign."""
    if len(functional) != x.n:
        raise DimensionMismatch(
            f"functional has length {len(functional)}, vector has {x.n}")
    k = len(x.symbols)
    combo = [Fraction(0)] * (k + 1)
    for c, row in zip(functional, x.rows):
        if c == 0:
            continue
        for j in range(k + 1):
            combo[j] += Fraction(c) * row[j]
    if all(c == 0 for c in combo):
        return 0
    if all(c == 0 for c in combo[1:]):
        return 1 if combo[0] > 0 else -1
    lo, hi = _combination_interval(combo, x.symbols)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    # nonzero by declared independence, but the enclosure cannot tell the sign
    raise UndecidableSign(
        "sign of a nonzero symbolic combination is not determined by the "
        "declared enclosures", coefficients=tuple(combo), interval=(lo, hi))


# -- fiber rank and model ---------------------------------------------------


def fiber_rank(x: SymbolicVector) -> int:
    """Q-rank of the span of the coordinates of x."""
    if x.is_zero:
        raise ZeroVector("fiber rank of the zero vector is undefined")
    return la.mat_rank(x.rows)


@dataclass(frozen=True)
class FiberModel:
    """Shape of the fiber through x: a limit toric space of dim n - r."""

    dim: int
    rank: int
    basis_change: tuple[IVec, ...]
    kind: str = "LimitToricSpace"


def fiber_model(n: int, x: SymbolicVector) -> FiberModel:
    """Fiber descriptor plus a GL(n,Z) move putting independent coords first."""
    if x.n != n:
        raise DimensionMismatch(f"vector has {x.n} coordinates, expected {n}")
    r = fiber_rank(x)
    chosen: list[int] = []
    picked_rows: list[tuple[Fraction, ...]] = []
    for i, row in enumerate(x.rows):
        if la.mat_rank(picked_rows + [row]) > len(picked_rows):
            chosen.append(i)
            picked_rows.append(row)
    order = chosen + [i for i in range(n) if i not in chosen]
    perm = tuple(tuple(1 if j == order[i] else 0 for j in range(n))
                 for i in range(n))
    return FiberModel(dim=n - r, rank=r, basis_change=perm)


# -- towers -----------------------------------------------------------------


@dataclass(frozen=True)
class FanTower:
    """Complete fans, each subdividing the previous, with stored witnesses."""

    fans: tuple[Fan, ...]
    witnesses: tuple[SubdivisionWitness, ...]
    strategy: Optional[str] = field(compare=False, default=None)

    @property
    def depth(self) -> int:
        return len(self.fans)

    def level(self, i: int) -> Fan:
        if not 0 <= i < len(self.fans):
            raise IndexOutOfRange(f"level {i} not in tower of depth "
                                  f"{len(self.fans)}")
        return self.fans[i]


def fan_tower(base: Fan) -> FanTower:
    """A depth-1 tower."""
    return FanTower((base,), ())


@dataclass(frozen=True)
class StellarAtBarycenters:
    """Split every maximal cone of dimension >= 2 at its primitive ray sum."""

    name = "stellar-at-barycenters"

    def step(self, fan: Fan) -> Fan:
        out = fan
        for sigma in fan.maximal:
            if sigma.dim < 2 or not sigma.rays:
                continue
            bary = [0] * fan.n
            for r in sigma.rays:
                bary = [a + b for a, b in zip(bary, r)]
            out = stellar_subdivision(out, tuple(bary))
        return out


@dataclass(frozen=True)
class TowardDirection:
    """Shrink the carrier cone of a fixed target direction each step."""

    target: SymbolicVector
    name = "toward-direction"

    def step(self, fan: Fan) -> Fan:
        carrier = symbolic_carrier(fan, self.target)
        if carrier is None:
            raise ZeroVector("target direction lies outside the fan support")
        if carrier.dim <= 1:
            return fan
        if carrier.n == 2 and len(carrier.rays) == 2:
            u, v = carrier.rays
            new_ray = tuple(a + b for a, b in zip(u, v))
        else:
            mid = tuple((lo + hi) / 2 for lo, hi in
                        (self.target.interval(i)
                         for i in range(self.target.n)))
            if cone_contains(carrier, mid).kind == INTERIOR:
                new_ray = mid
            else:
                new_ray = carrier.relint_point()
        return stellar_subdivision(fan, primitive(new_ray).direction)


@dataclass(frozen=True)
class CommonRefineWith:
    """Refine by a fixed fan; idempotent after the first step."""

    other: Fan
    name = "common-refine-with"

    def step(self, fan: Fan) -> Fan:
        return common_refinement(fan, self.other)


def extend_tower(t: FanTower, strategy, steps: int) -> FanTower:
    """Append `steps` refinements produced by the strategy."""
    if t.depth + steps > TOWER_DEPTH_CAP:
        raise DepthCap(f"tower depth {t.depth + steps} exceeds the cap of "
                       f"{TOWER_DEPTH_CAP}")
    fans = list(t.fans)
    witnesses = list(t.witnesses)
    for _ in range(steps):
        new = strategy.step(fans[-1])
        w = is_subdivision(new, fans[-1])
        if w is None:
            raise AssertionError("strategy produced a non-refinement")
        fans.append(new)
        witnesses.append(w)
    return FanTower(tuple(fans), tuple(witnesses), strategy=strategy.name)


# -- chains and resolution --------------------------------------------------


@dataclass(frozen=True)
class ConeChain:
    """Nested cones (level, cone), finer levels contained in coarser ones."""

    entries: tuple[tuple[int, Cone], ...]


def cone_chain(entries) -> ConeChain:
    """Validated chain constructor; checks the nesting invariant."""
    entries = tuple((int(i), c) for i, c in entries)
    for (i, a), (j, b) in zip(entries, entries[1:]):
        if j <= i:
            raise ValueError(f"levels {i}, {j} out of order")
        if not cone_subset(b, a):
            raise ValueError(
                f"cone at level {j} is not contained in cone at level {i}")
    return ConeChain(entries)


@dataclass(frozen=True)
class ResolvedRay:
    """The chain intersects in a single rational ray."""

    ray: Ray
    depth: int


@dataclass(frozen=True)
class UnresolvedCone:
    """The chain intersection still has dimension != 1 at this depth."""

    cone: Cone
    depth: int


LimitPointDescriptor = Union[ResolvedRay, UnresolvedCone]


def resolve_direction(c: ConeChain) -> LimitPointDescriptor:
    """Intersect the chain exactly and report a ray or the remaining cone."""
    if not c.entries:
        raise EmptyChain("cannot resolve an empty chain")
    meet = c.entries[0][1]
    for _, cone in c.entries[1:]:
        meet = cone_intersect(meet, cone)
    if meet.dim == 1 and not meet.lines:
        return ResolvedRay(Ray(meet.rays[0]), depth=len(c.entries))
    return UnresolvedCone(meet, depth=len(c.entries))


def symbolic_locate(cone: Cone, x: SymbolicVector):
    """Minimal face of the cone containing x, or None if outside."""
    if x.n != cone.n:
        raise DimensionMismatch(
            f"vector has {x.n} coordinates, cone has rank {cone.n}")
    for eq in cone.equations:
        if sign_of(x, eq) != 0:
            return None
    active = []
    for f in cone.facets:
        s = sign_of(x, f)
        if s < 0:
            return None
        if s == 0:
            active.append(f)
    if not active:
        return cone
    lines, rays = halfspaces_to_generators(
        cone.equations + tuple(active), cone.facets, cone.n)
    return make_cone(list(rays), n=cone.n, lines=list(lines))


def symbolic_carrier(fan: Fan, x: SymbolicVector) -> Optional[Cone]:
    """Minimal cone of the fan containing x, by exact symbolic signs."""
    best = None
    for sigma in fan.maximal:
        face = symbolic_locate(sigma, x)
        if face is not None and (best is None or face.dim < best.dim):
            best = face
    return best


def chain_toward(t: FanTower, x: SymbolicVector) -> ConeChain:
    """The chain of minimal carriers of x, one per tower level."""
    if x.is_zero:
        raise ZeroVector("cannot chase the zero direction")
    entries = []
    for i, fan in enumerate(t.fans):
        carrier = symbolic_carrier(fan, x)
        if carrier is None:
            raise ValueError(f"direction lies outside the level-{i} support")
        entries.append((i, carrier))
    return cone_chain(entries)


def boundary_strata_at_level(t: FanTower, i: int) -> tuple[IVec, ...]:
    """Rays of the level-i fan: one per invariant boundary divisor."""
    return t.level(i).rays


# -- exact rank-2 angle comparison ------------------------------------------


def _angle_data(c: Cone):
    if c.n != 2 or c.dim != 2 or c.lines or len(c.rays) != 2:
        raise DimensionMismatch(
            "angular comparison needs a pointed 2-dimensional plane cone")
    u, v = c.rays
    return la.dot(u, v), la.dot(u, u) * la.dot(v, v)


def angle_compare(a: Cone, b: Cone) -> int:
    """Exact comparison of opening angles of two plane cones."""
    d1, n1 = _angle_data(a)
    d2, n2 = _angle_data(b)
    # cos is decreasing on (0, pi): compare d1/sqrt(n1) against d2/sqrt(n2)
    if d1 >= 0 > d2:
        return -1
    if d2 >= 0 > d1:
        return 1
    left, right = d1 * d1 * n2, d2 * d2 * n1
    if left == right:
        return 0
    if d1 >= 0:
        return -1 if left > right else 1
    return -1 if left < right else 1
