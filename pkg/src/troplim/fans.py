"""Rational polyhedral fans: validation, refinement, and stellar subdivision.

A fan is stored by its maximal cones; faces are derived on demand.  Validity
means every pairwise intersection of stored cones is a common face of both.
Completeness is certified by facet pairing: a valid fan of full-dimensional
cones covers the whole space exactly when every facet of every maximal cone
is shared with exactly one other maximal cone (the support is then closed and
open off a codimension-2 set, hence everything).  Both criteria are exact
integer computations.

``is_subdivision`` produces a checkable witness.  Containment of each fine
cone in a coarse carrier is not enough (the fine fan might cover only part of
a carrier), so the witness is verified by relative facet pairing inside each
carrier: every facet of a fine cone must either be shared with a sibling in
the same carrier or lie inside a facet of the carrier itself.  A standard
walking argument shows this is equivalent to the fine cones tiling the
carrier exactly.

All constructors return canonical values (cones sorted by dimension and ray
data), so golden tests can compare fans directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Sequence

from .errors import DimensionMismatch, ValidationError, ZeroVector
from .lattice import (
    OUTSIDE,
    Cone,
    Ray,
    cone_contains,
    cone_intersect,
    cone_is_face,
    cone_subset,
    halfspaces_to_generators,
    make_cone,
    primitive,
)

IVec = tuple[int, ...]


def _cone_key(c: Cone):
    """Deterministic sort key for cones."""
    return (c.dim, c.rays, c.lines)


def facet_cones(c: Cone) -> tuple[Cone, ...]:
    """The codimension-1 faces of a cone, one per facet normal."""
    out = []
    for f in c.facets:
        lines, rays = halfspaces_to_generators(
            c.equations + (f,), c.facets, c.n
        )
        out.append(make_cone(list(rays), n=c.n, lines=list(lines)))
    return tuple(out)


@dataclass(frozen=True)
class FanReport:
    """Outcome of fan validation."""

    valid: bool
    complete: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class Fan:
    """A fan given by its maximal cones; construct via fan_from_cones."""

    n: int
    maximal: tuple[Cone, ...]
    complete: bool = field(compare=False, default=False)

    @property
    def rays(self) -> tuple[IVec, ...]:
        """Sorted primitive ray directions appearing in the maximal cones."""
        return tuple(sorted({r for c in self.maximal for r in c.rays}))

    @property
    def dim(self) -> int:
        return max(c.dim for c in self.maximal)

    @property
    def is_pure(self) -> bool:
        return len({c.dim for c in self.maximal}) == 1

    def carrier(self, v: Sequence) -> Optional[Cone]:
        """The minimal cone of the fan containing v, or None if outside."""
        best = None
        for c in self.maximal:
            loc = cone_contains(c, v)
            if loc.kind == OUTSIDE:
                continue
            face = c if loc.face is None else loc.face
            if best is None or face.dim < best.dim:
                best = face
        return best


def _pair_facets(maximal: Sequence[Cone]):
    """Count how many maximal cones share each facet cone."""
    counts: dict = {}
    for c in maximal:
        for f in facet_cones(c):
            key = (f.rays, f.lines)
            counts[key] = counts.get(key, 0) + 1
    return counts


def _is_complete(maximal: Sequence[Cone], n: int) -> bool:
    """Facet-pairing completeness test for a valid fan."""
    if not maximal:
        return False
    if any(c.dim != n for c in maximal):
        return False
    if n == 0:
        return True
    return all(k == 2 for k in _pair_facets(maximal).values())


def validate_fan(cones: Sequence[Cone], n: Optional[int] = None) -> FanReport:
    """Check the fan axioms on a set of cones and report violations."""
    cones = list(cones)
    if not cones:
        return FanReport(False, False, ("fan has no cones",))
    if n is None:
        n = cones[0].n
    violations = []
    for i, c in enumerate(cones):
        if c.n != n:
            violations.append(f"cone {i} lives in rank {c.n}, expected {n}")
    if violations:
        return FanReport(False, False, tuple(violations))
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            a, b = cones[i], cones[j]
            if a == b:
                violations.append(f"cones {i} and {j} are equal")
                continue
            m = cone_intersect(a, b)
            if m == a or m == b:
                violations.append(f"cone {i if m == a else j} is contained "
                                  f"in cone {j if m == a else i}")
                continue
            if not (cone_is_face(m, a) and cone_is_face(m, b)):
                violations.append(
                    f"cones {i} and {j} intersect in {m.rays} + lines "
                    f"{m.lines}, not a common face")
    valid = not violations
    complete = valid and _is_complete(cones, n)
    return FanReport(valid, complete, tuple(violations))


def _trusted_fan(cones: Sequence[Cone], n: int) -> Fan:
    """Build a fan from cones known to satisfy the axioms."""
    maximal = tuple(sorted(set(cones), key=_cone_key))
    return Fan(n, maximal, complete=_is_complete(maximal, n))


def fan_from_cones(cones: Sequence[Cone], n: Optional[int] = None) -> Fan:
    """Validating fan constructor; raises ValidationError with the report."""
    cones = list(cones)
    if cones and n is None:
        n = cones[0].n
    report = validate_fan(cones, n)
    if not report.valid:
        raise ValidationError("; ".join(report.violations))
    return _trusted_fan(cones, n)


# -- rank-2 angular order ---------------------------------------------------


def _half(v: IVec) -> int:
    """0 for directions with angle in [0, pi), 1 otherwise."""
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angular_cmp(u: IVec, v: IVec) -> int:
    """Exact counterclockwise comparison of plane directions from (1,0)."""
    h = _half(u) - _half(v)
    if h:
        return h
    c = u[0] * v[1] - u[1] * v[0]
    return 0 if c == 0 else (-1 if c > 0 else 1)


def fan_from_rays_2d(rays: Sequence) -> Fan:
    """Complete rank-2 fan whose maximal cones join angularly adjacent rays."""
    prims = sorted({primitive(r).direction for r in rays},
                   key=cmp_to_key(angular_cmp))
    if len(prims) < 3:
        raise ValidationError("need at least 3 ray directions for a complete "
                              "rank-2 fan")
    cones = []
    for i, a in enumerate(prims):
        b = prims[(i + 1) % len(prims)]
        # counterclockwise gap from a to b must stay below a half turn
        if a[0] * b[1] - a[1] * b[0] <= 0:
            raise ValidationError(f"rays {a} and {b} leave an angular gap of "
                                  "a half turn or more")
        cones.append(make_cone([a, b], n=2))
    fan = fan_from_cones(cones, 2)
    if not fan.complete:
        raise ValidationError("rays do not positively span the plane")
    return fan


# -- subdivision ------------------------------------------------------------


@dataclass(frozen=True)
class SubdivisionWitness:
    """Carrier assignment certifying that `fine` subdivides `coarse`."""

    fine: Fan
    coarse: Fan
    carrier: tuple[int, ...]

    def carrier_cone(self, i: int) -> Cone:
        return self.coarse.maximal[self.carrier[i]]


def is_subdivision(fine: Fan, coarse: Fan) -> Optional[SubdivisionWitness]:
    """Witness that every coarse cone is tiled by fine cones, or None."""
    if fine.n != coarse.n:
        raise DimensionMismatch(
            f"fans live in ranks {fine.n} and {coarse.n}")
    if not (fine.is_pure and coarse.is_pure and fine.dim == coarse.dim):
        return None
    carrier = []
    for tau in fine.maximal:
        found = None
        for j, sigma in enumerate(coarse.maximal):
            if cone_subset(tau, sigma):
                found = j
                break
        if found is None:
            return None
        carrier.append(found)
    groups: dict[int, list[Cone]] = {}
    for i, j in enumerate(carrier):
        groups.setdefault(j, []).append(fine.maximal[i])
    if len(groups) != len(coarse.maximal):
        return None
    for j, taus in groups.items():
        sigma = coarse.maximal[j]
        sigma_facets = facet_cones(sigma)
        counts: dict = {}
        for tau in taus:
            for f in facet_cones(tau):
                key = (f.rays, f.lines)
                counts.setdefault(key, [0, f])
                counts[key][0] += 1
        for count, f in counts.values():
            if count == 2:
                continue
            if count > 2:
                return None
            if not any(cone_subset(f, sf) for sf in sigma_facets):
                return None
    return SubdivisionWitness(fine, coarse, tuple(carrier))


def common_refinement(a: Fan, b: Fan) -> Fan:
    """Coarsest fan refining both, from full-dimensional pairwise meets."""
    if a.n != b.n:
        raise DimensionMismatch(f"fans live in ranks {a.n} and {b.n}")
    if not (a.is_pure and b.is_pure and a.dim == b.dim):
        raise ValidationError("common refinement needs pure fans of equal "
                              "dimension")
    d = a.dim
    pieces = set()
    for sa in a.maximal:
        for sb in b.maximal:
            m = cone_intersect(sa, sb)
            if m.dim == d:
                pieces.add(m)
    if not pieces:
        raise ValidationError("fan supports have no full-dimensional overlap")
    return _trusted_fan(pieces, a.n)


def stellar_subdivision(fan: Fan, ray) -> Fan:
    """Split every cone containing the ray along it, leaving the rest."""
    r = ray if isinstance(ray, Ray) else primitive(ray)
    if r.rank != fan.n:
        raise DimensionMismatch(
            f"ray has rank {r.rank}, fan has rank {fan.n}")
    out = []
    touched = False
    for sigma in fan.maximal:
        if cone_contains(sigma, r.direction).kind == OUTSIDE:
            out.append(sigma)
            continue
        touched = True
        for f in facet_cones(sigma):
            if cone_contains(f, r.direction).kind != OUTSIDE:
                continue
            out.append(make_cone(list(f.rays) + [r.direction],
                                 n=fan.n, lines=list(f.lines)))
        if not sigma.facets:
            # a lineality-only or zero cone has no facets to join with
            out.append(sigma)
    if not touched:
        raise ValidationError(
            f"ray {r.direction} lies outside the fan support")
    return _trusted_fan(out, fan.n)
