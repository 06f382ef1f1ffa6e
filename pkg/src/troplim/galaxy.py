"""Galaxy skeletons of one-parameter degenerations.

The model is an elliptic fibration acquiring a cycle of m rational curves
(an I_m fiber).  Its dual complex is the m-cycle with unit affine charts, a
circle of circumference 1 with vertices at the angles j/m.  A degree-d base
change followed by minimal resolution turns I_m into I_{dm}; on skeletons
this is exactly the d-fold scale subdivision with vertices relabeled
j/(dm).  Along a tower of base changes whose degrees form a divisibility
chain reaching every integer, each rational angle p/q eventually becomes a
vertex (an open slot of the limit space), while an irrational angle stays
interior to a strictly shrinking chain of edges and survives as a closed
point.  Irrational angles are handled through declared symbols with
rational interval enclosures; classification refuses rather than guesses
when an enclosure is too coarse to separate the angle from a vertex.

The decomposition ledger records, for any skeleton at a given level, the
open slots realized so far (its rational points) and the count of the
remaining positive-dimensional cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .complexes import (
    Cell,
    DeltaComplex,
    canonical_point,
    count_cells,
    cycle_complex,
    make_complex,
    rational_points,
    scale_subdivide,
)
from .errors import (
    DepthCap,
    IncompleteTower,
    UndecidableSign,
    UnknownStratum,
    ValidationError,
)
from .towers import TOWER_DEPTH_CAP, Symbol

QVec = tuple[Fraction, ...]


# -- polygon degenerations ---------------------------------------------------


@dataclass(frozen=True)
class PolygonDegeneration:
    """An I_m degeneration through its skeleton: a labeled m-cycle.

    Vertex j carries the angle j/m; the edge e_j covers [j/m, (j+1)/m].
    """

    m: int
    complex: DeltaComplex
    labels: tuple[tuple[str, Fraction], ...]

    def label(self, vertex: str) -> Fraction:
        for name, angle in self.labels:
            if name == vertex:
                return angle
        raise UnknownStratum(f"no vertex named {vertex!r}")


def polygon_degeneration(m: int) -> PolygonDegeneration:
    """The I_m skeleton: an m-cycle with vertices labeled j/m."""
    if m < 1:
        raise ValidationError("an I_m degeneration needs m >= 1")
    labels = tuple((f"v{j}", Fraction(j, m)) for j in range(m))
    return PolygonDegeneration(m=m, complex=cycle_complex(m), labels=labels)


def circle_position(p: PolygonDegeneration, cell_name: str,
                    coords: Sequence) -> Fraction:
    """Angle in [0, 1) of a point of the cycle, from labels and charts."""
    name, t = canonical_point(p.complex, cell_name, coords)
    cell = p.complex.cell(name)
    if cell.dim == 0:
        return p.label(name)
    start = p.label(cell.faces[1])
    return (start + t[1] * Fraction(1, p.m)) % 1


def edge_interval(p: PolygonDegeneration, edge: str
                  ) -> tuple[Fraction, Fraction]:
    """The angle interval covered by an edge, on the universal cover."""
    cell = p.complex.cell(edge)
    if cell.dim != 1:
        raise UnknownStratum(f"{edge!r} is not an edge")
    start = p.label(cell.faces[1])
    return start, start + Fraction(1, p.m)


def base_change(p: PolygonDegeneration, d: int) -> PolygonDegeneration:
    """Degree-d base change: I_m becomes I_{dm}.

    Computed as the d-fold scale subdivision of the cycle; every
    subdivision vertex is located on the circle and renamed by its angle
    k/(dm), so iterated base changes compose on the nose.
    """
    if d < 1:
        raise ValidationError("base change degree must be >= 1")
    if d == 1:
        return p
    sub = scale_subdivide(p.complex, d)
    mm = p.m * d
    position: dict[str, int] = {}
    for v in sub.complex.by_dim(0):
        angle = circle_position(p, *sub.vertex_location(v.name))
        k = angle * mm
        if k.denominator != 1:
            raise ValidationError(
                f"subdivision vertex at angle {angle} is off the "
                f"(1/{mm})-lattice")
        position[v.name] = int(k)
    if sorted(position.values()) != list(range(mm)):
        raise ValidationError(
            f"subdivision vertices do not fill the (1/{mm})-lattice")
    cells: list[tuple[str, list[str]]] = [
        (f"v{k}", []) for k in position.values()]
    for e in sub.complex.by_dim(1):
        start = position[e.faces[1]]
        end = position[e.faces[0]]
        if end != (start + 1) % mm:
            raise ValidationError("subdivided edge endpoints are not adjacent")
        cells.append((f"e{start}", [f"v{end}", f"v{start}"]))
    labels = tuple((f"v{k}", Fraction(k, mm)) for k in range(mm))
    return PolygonDegeneration(
        m=mm,
        complex=make_complex(cells, provenance=p.complex.provenance),
        labels=labels,
    )


# -- towers and point classification -----------------------------------------


@dataclass(frozen=True)
class EllipticTower:
    """Levels of an elliptic degeneration under iterated base change."""

    m: int
    degrees: tuple[int, ...]
    levels: tuple[PolygonDegeneration, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)


def elliptic_tower(m: int, degrees: Sequence[int]) -> EllipticTower:
    """Tower over I_m with cumulative degrees forming a divisibility chain."""
    degs = tuple(int(d) for d in degrees)
    if not degs:
        raise ValidationError("a tower needs at least one level")
    if any(d < 1 for d in degs):
        raise ValidationError("degrees must be positive")
    for a, b in zip(degs, degs[1:]):
        if b % a != 0:
            raise ValidationError(
                f"degrees must form a divisibility chain: {a} does not "
                f"divide {b}")
    if len(degs) > TOWER_DEPTH_CAP:
        raise DepthCap(f"tower depth {len(degs)} exceeds {TOWER_DEPTH_CAP}")
    base = polygon_degeneration(m)
    return EllipticTower(
        m=m, degrees=degs,
        levels=tuple(base_change(base, d) for d in degs))


@dataclass(frozen=True)
class GalaxyPoint:
    """An angle on the limit circle: exact rational or enclosed symbol."""

    rational: Optional[Fraction] = None
    symbol: Optional[Symbol] = None

    def __post_init__(self):
        if (self.rational is None) == (self.symbol is None):
            raise ValidationError(
                "a galaxy point is exactly one of rational or symbolic")


def galaxy_point(value: Union[int, str, Fraction, Symbol]) -> GalaxyPoint:
    """Normalize an angle to [0, 1): rational mod 1, or a symbol as given."""
    if isinstance(value, Symbol):
        if not (0 <= value.lo <= value.hi <= 1):
            raise ValidationError(
                f"symbol enclosure [{value.lo}, {value.hi}] must lie in "
                f"[0, 1]; shift the symbol to its fractional part first")
        return GalaxyPoint(symbol=value)
    return GalaxyPoint(rational=Fraction(value) % 1)


@dataclass(frozen=True)
class CarrierEdge:
    """The edge of one tower level whose interior holds the angle."""

    level: int
    cell: str
    interval: tuple[Fraction, Fraction]

    @property
    def width(self) -> Fraction:
        return self.interval[1] - self.interval[0]


@dataclass(frozen=True)
class OpenPoint:
    """A rational angle, a vertex from its stabilization level onward."""

    label: Fraction
    level: int
    vertex: str

    @property
    def kind(self) -> str:
        return "open"


@dataclass(frozen=True)
class ClosedPoint:
    """An irrational angle: interior to a shrinking edge at every level."""

    carriers: tuple[CarrierEdge, ...]

    @property
    def kind(self) -> str:
        return "closed"


def _carrier_index(level: PolygonDegeneration, sym: Symbol) -> int:
    """Index k with k/m < angle < (k+1)/m, certified by the enclosure."""
    m = level.m
    k = math.floor(sym.lo * m)
    lo_v = Fraction(k, m)
    hi_v = Fraction(k + 1, m)
    if not (lo_v < sym.lo and sym.hi < hi_v):
        raise UndecidableSign(
            f"enclosure [{sym.lo}, {sym.hi}] of {sym.name} is not strictly "
            f"inside one edge of the {m}-gon; refine the enclosure",
            interval=(sym.lo, sym.hi))
    return k


def classify_point(tower: Union[EllipticTower, Sequence[PolygonDegeneration]],
                   point: GalaxyPoint) -> Union[OpenPoint, ClosedPoint]:
    """Open/closed dichotomy for an angle along a base-change tower.

    A rational p/q is open from the first level whose cycle size q divides;
    if no provided level works the finite tower cannot certify anything and
    IncompleteTower is raised.  A symbolic (irrational) angle is closed,
    witnessed by the nested chain of carrier edges.
    """
    levels = tower.levels if isinstance(tower, EllipticTower) else tuple(tower)
    if not levels:
        raise ValidationError("a tower needs at least one level")
    if point.rational is not None:
        theta = point.rational
        q = theta.denominator
        for i, level in enumerate(levels):
            if level.m % q == 0:
                return OpenPoint(label=theta, level=i,
                                 vertex=f"v{int(theta * level.m)}")
        raise IncompleteTower(
            f"denominator {q} divides no cycle size in the provided "
            f"{len(levels)} levels; extend the tower")
    carriers = []
    for i, level in enumerate(levels):
        k = _carrier_index(level, point.symbol)
        carriers.append(CarrierEdge(
            level=i, cell=f"e{k}",
            interval=(Fraction(k, level.m), Fraction(k + 1, level.m))))
    return ClosedPoint(carriers=tuple(carriers))


# -- strata to skeleton cells ------------------------------------------------


def f_tr_cell(skeleton: Union[PolygonDegeneration, DeltaComplex],
              stratum: str) -> Cell:
    """Skeleton cell carrying a stratum of the degeneration.

    For an I_m model, component C_j sits at vertex j and the double point
    n_j between components j and j+1 spans the edge [j/m, (j+1)/m].  For a
    general skeleton the strata are addressed by cell name directly.
    """
    s = str(stratum)
    if isinstance(skeleton, PolygonDegeneration):
        x = skeleton.complex
        if s.startswith("C") and s[1:].isdigit():
            s = "v" + s[1:]
        elif s.startswith("n") and s[1:].isdigit():
            s = "e" + s[1:]
    else:
        x = skeleton
    try:
        return x.cell(s)
    except KeyError:
        raise UnknownStratum(
            f"no stratum {stratum!r} on this skeleton") from None


# -- decomposition ledger ----------------------------------------------------


@dataclass(frozen=True)
class DecompositionRecord:
    """Open slots realized at one level, plus the leftover cell count."""

    level: int
    open_slots: tuple[tuple[str, QVec], ...]
    non_klt_cells: int

    @property
    def slot_count(self) -> int:
        return len(self.open_slots)


def decomposition(skeleton: Union[PolygonDegeneration, DeltaComplex],
                  level: int) -> DecompositionRecord:
    """Decompose a skeleton at a level: rational points vs remaining cells."""
    x = skeleton.complex if isinstance(skeleton, PolygonDegeneration) \
        else skeleton
    slots = tuple(sorted(rational_points(x, level)))
    counts = count_cells(scale_subdivide(x, level).complex)
    non_klt = sum(c for d, c in counts.items() if d > 0)
    return DecompositionRecord(level=level, open_slots=slots,
                               non_klt_cells=non_klt)
