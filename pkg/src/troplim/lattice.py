"""Exact rational cones in a lattice of rank <= 4.

Cones are stored with both descriptions computed eagerly and exactly:

    V-side: primitive integer extreme rays, plus a lineality basis for the
            internal constructors that permit lines (normal fans of
            lower-dimensional polytopes need half-spaces and walls);
    H-side: integer equations (a basis of the orthogonal complement of the
            span) and primitive integer facet inner normals.

The public constructor ``cone_from_generators`` enforces strong convexity
(no line) and the ambient rank cap; everything downstream trusts the stored
canonical form.  Conversion both ways runs through one workhorse,
``halfspaces_to_generators``: extreme rays of a pointed cone are kernels of
rank-(d-1) subsets of active constraints, enumerated exactly over Z.

Containment answers are relative: ``interior`` means the relative interior
of the cone inside its own span.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .errors import (
    DimensionMismatch,
    NotStronglyConvex,
    RankCap,
    ZeroVector,
)

RANK_CAP = 4

IVec = tuple[int, ...]

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"


@dataclass(frozen=True)
class Ray:
    """A primitive integer lattice direction."""

    direction: IVec

    def __post_init__(self):
        if la.is_zero_vec(self.direction):
            raise ZeroVector("ray direction must be nonzero")
        if self.direction != la.primitivize(self.direction):
            raise ValueError(f"ray direction {self.direction} is not primitive")

    @property
    def rank(self) -> int:
        return len(self.direction)


def primitive(v: Sequence[int]) -> Ray:
    """Primitive representative of a nonzero integer vector: divide by the gcd."""
    if la.is_zero_vec(v):
        raise ZeroVector(f"no primitive representative of the zero vector {tuple(v)}")
    return Ray(la.primitivize(v))


def _check_rank(n: int) -> None:
    if n > RANK_CAP:
        raise RankCap(f"ambient rank {n} exceeds the exact-arithmetic cap {RANK_CAP}")
    if n < 0:
        raise ValueError("ambient rank must be nonnegative")


def halfspaces_to_generators(
    equations: Sequence[Sequence], inequalities: Sequence[Sequence], n: int
) -> tuple[tuple[IVec, ...], tuple[IVec, ...]]:
    """V-description (lines, rays) of {x : E x = 0, A x >= 0}.

    Returns canonical primitive integer data: ``lines`` is an RREF-scaled
    basis of the lineality space, ``rays`` are the extreme rays modulo
    lineality, reduced to canonical coset representatives and sorted.
    """
    eq_rows = [tuple(r) for r in equations if not la.is_zero_vec(r)]
    subspace = la.kernel_basis(eq_rows, n) if eq_rows else la.identity_rows(n)
    m = len(subspace)
    if m == 0:
        return (), ()
    # inequalities restricted to subspace coordinates; scaling a row does not
    # change its halfspace, so primitivize to integers and drop duplicates
    restricted_set = set()
    for a in inequalities:
        row = tuple(la.dot(a, k) for k in subspace)
        if not la.is_zero_vec(row):
            restricted_set.add(la.primitivize(row))
    restricted = sorted(restricted_set)
    if not restricted:
        lines = tuple(la.canonical_subspace_basis(subspace))
        return lines, ()
    lin_sub = la.kernel_basis(restricted, m)
    # complement of the lineality inside the subspace coordinates
    _, lin_pivots = la.rref(lin_sub)
    comp_idx = [j for j in range(m) if j not in lin_pivots]
    q = len(comp_idx)
    candidates: set[IVec] = set()
    if q > 0:
        reduced = sorted(
            {la.primitivize(r)
             for r in (tuple(row[j] for j in comp_idx) for row in restricted)
             if not la.is_zero_vec(r)})
        seen_subsets: set[IVec] = set()
        for subset in itertools.combinations(reduced, q - 1):
            v = (
                la.signed_minor_kernel(subset)
                if q > 1
                else (1,)
            )
            if v is None:
                continue
            for cand in (v, tuple(-a for a in v)):
                if cand in seen_subsets:
                    continue
                seen_subsets.add(cand)
                ok = True
                for row in reduced:
                    s = 0
                    for a, b in zip(row, cand):
                        s += a * b
                    if s < 0:
                        ok = False
                        break
                if ok:
                    candidates.add(cand)
                    break
    # lift back to ambient coordinates
    lines_amb = []
    for u in lin_sub:
        vec = tuple(
            sum(u[j] * subspace[j][i] for j in range(m)) for i in range(n)
        )
        lines_amb.append(vec)
    lines = la.canonical_subspace_basis(lines_amb) if lines_amb else ()
    if lines:
        line_red, line_pivots = la.rref(lines)
    rays = []
    for cand in candidates:
        amb = tuple(
            sum(cand[k] * subspace[comp_idx[k]][i] for k in range(q))
            for i in range(n)
        )
        if lines:
            amb = la.reduce_prepared(amb, line_red, line_pivots)
        if not la.is_zero_vec(amb):
            rays.append(la.primitivize(amb))
    return tuple(lines), tuple(sorted(set(rays)))


def generators_to_halfspaces(
    rays: Sequence[Sequence], lines: Sequence[Sequence], n: int
) -> tuple[tuple[IVec, ...], tuple[IVec, ...]]:
    """H-description (equations, facet inner normals) of cone(rays) + span(lines).

    Dual of ``halfspaces_to_generators``: the dual cone's lineality is the
    span complement, its extreme rays are the facet normals.
    """
    eqs, facets = halfspaces_to_generators(lines, rays, n)
    return eqs, facets


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone with canonical double description."""

    n: int
    rays: tuple[IVec, ...]
    lines: tuple[IVec, ...]
    facets: tuple[IVec, ...] = field(compare=False)
    equations: tuple[IVec, ...] = field(compare=False)

    @property
    def dim(self) -> int:
        return self.n - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lines

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    @property
    def is_unimodular(self) -> bool:
        """Simplicial with ray matrix extendable to a basis of the lattice.

        Equivalent: the gcd of the maximal minors of the ray matrix is 1.
        """
        if not self.is_simplicial:
            return False
        d = self.dim
        if d == 0:
            return True
        from math import gcd as _gcd

        g = 0
        for cols in itertools.combinations(range(self.n), d):
            minor = int(la.det([[r[c] for c in cols] for r in self.rays]))
            g = _gcd(g, minor)
        return g == 1

    def relint_point(self) -> IVec:
        """An exact point in the relative interior (sum of extreme rays)."""
        pt = [0] * self.n
        for r in self.rays:
            for i, a in enumerate(r):
                pt[i] += a
        return tuple(pt)

    def __repr__(self):
        parts = [f"rays={list(self.rays)}"]
        if self.lines:
            parts.append(f"lines={list(self.lines)}")
        return f"Cone(n={self.n}, {', '.join(parts)})"


def _cone_from_canonical(
    rays: Sequence[IVec], lines: Sequence[IVec], n: int
) -> Cone:
    """Trusted constructor for (rays, lines) already in canonical form.

    The canonical V-description is independent of the H-description it was
    derived from, so output of ``halfspaces_to_generators`` can be wrapped
    directly; only the dual conversion for facets remains.
    """
    equations, facets = generators_to_halfspaces(rays, lines, n)
    return Cone(n=n, rays=tuple(rays), lines=tuple(lines), facets=facets,
                equations=equations)


def _build_cone(rays: Sequence[Sequence], lines: Sequence[Sequence], n: int) -> Cone:
    equations, facets = generators_to_halfspaces(rays, lines, n)
    lines_c, rays_c = halfspaces_to_generators(equations, facets, n)
    cone = Cone(n=n, rays=rays_c, lines=lines_c, facets=facets, equations=equations)
    for g in list(rays) + list(lines):
        if any(la.dot(e, g) != 0 for e in equations):
            raise AssertionError(f"generator {g} off the computed span")
    for g in rays:
        if any(la.dot(f, g) < 0 for f in facets):
            raise AssertionError(f"generator {g} violates a computed facet")
    return cone


def make_cone(
    generators: Iterable[Sequence[int]],
    n: int | None = None,
    lines: Iterable[Sequence[int]] = (),
    check_rank: bool = True,
) -> Cone:
    """Internal constructor: cone spanned by generators and lines (lines allowed)."""
    gens = [tuple(int(a) for a in g) for g in generators]
    lns = [tuple(int(a) for a in g) for g in lines]
    if n is None:
        if not gens and not lns:
            raise ValueError("ambient rank required for the empty generator set")
        n = len((gens + lns)[0])
    if check_rank:
        _check_rank(n)
    for g in gens + lns:
        if len(g) != n:
            raise DimensionMismatch(f"generator {g} has length {len(g)}, expected {n}")
    gens = [g for g in gens if not la.is_zero_vec(g)]
    return _build_cone(gens, lns, n)


def cone_from_generators(
    generators: Sequence[Sequence[int]], n: int | None = None
) -> Cone:
    """Strongly convex cone spanned by nonzero integer generators.

    Raises ZeroVector on a zero generator, NotStronglyConvex when the
    generators span a line, RankCap above rank 4.
    """
    gens = [tuple(int(a) for a in g) for g in generators]
    for g in gens:
        if la.is_zero_vec(g):
            raise ZeroVector(f"zero generator in {gens}")
    if n is None:
        if not gens:
            raise ValueError("ambient rank required for the empty generator set")
        n = len(gens[0])
    _check_rank(n)
    cone = make_cone(gens, n=n)
    if cone.lines:
        raise NotStronglyConvex(
            f"generators {gens} span the line through {cone.lines[0]}"
        )
    return cone


def zero_cone(n: int) -> Cone:
    """The trivial cone {0}."""
    return make_cone([], n=n, check_rank=False)


def positive_orthant(n: int) -> Cone:
    """The closed nonnegative orthant as a cone."""
    return make_cone(la.identity_rows(n), n=n, check_rank=False)


@dataclass(frozen=True)
class Location:
    """Result of a containment query: kind plus the minimal containing face."""

    kind: str
    face: Cone | None = None


def cone_contains(cone: Cone, v: Sequence) -> Location:
    """Locate a rational vector relative to the cone (interior is relative)."""
    vec = tuple(Fraction(a) for a in v)
    if len(vec) != cone.n:
        raise DimensionMismatch(f"vector length {len(vec)} vs ambient {cone.n}")
    if any(la.dot(e, vec) != 0 for e in cone.equations):
        return Location(OUTSIDE)
    values = [la.dot(f, vec) for f in cone.facets]
    if any(val < 0 for val in values):
        return Location(OUTSIDE)
    active = [f for f, val in zip(cone.facets, values) if val == 0]
    if not active:
        return Location(INTERIOR)
    lines_f, rays_f = halfspaces_to_generators(
        tuple(cone.equations) + tuple(active), cone.facets, cone.n
    )
    return Location(BOUNDARY, _cone_from_canonical(rays_f, lines_f, cone.n))


def cone_contains_point(cone: Cone, v: Sequence) -> bool:
    """Closed containment test via the facet description."""
    vec = tuple(a if isinstance(a, (int, Fraction)) else Fraction(a) for a in v)
    if len(vec) != cone.n:
        raise DimensionMismatch(f"vector length {len(vec)} vs ambient {cone.n}")
    if any(la.dot(e, vec) != 0 for e in cone.equations):
        return False
    return all(la.dot(f, vec) >= 0 for f in cone.facets)


def cone_intersect(a: Cone, b: Cone) -> Cone:
    """Exact intersection, canonical form (may be any face, down to {0})."""
    if a.n != b.n:
        raise DimensionMismatch(f"ambient ranks differ: {a.n} vs {b.n}")
    lines, rays = halfspaces_to_generators(
        tuple(a.equations) + tuple(b.equations),
        tuple(a.facets) + tuple(b.facets),
        a.n,
    )
    return _cone_from_canonical(rays, lines, a.n)


def cone_faces(cone: Cone) -> tuple[Cone, ...]:
    """All faces (the cone itself included), each in canonical form."""
    found: dict[tuple, Cone] = {}
    for k in range(len(cone.facets) + 1):
        for subset in itertools.combinations(cone.facets, k):
            lines, rays = halfspaces_to_generators(
                tuple(cone.equations) + subset, cone.facets, cone.n
            )
            face = _cone_from_canonical(rays, lines, cone.n)
            found[(face.rays, face.lines)] = face
    return tuple(sorted(found.values(), key=lambda c: (c.dim, c.rays, c.lines)))


def cone_is_face(face: Cone, cone: Cone) -> bool:
    """Is ``face`` a face of ``cone``?  Exact: active-facet characterization."""
    if face.n != cone.n:
        raise DimensionMismatch(f"ambient ranks differ: {face.n} vs {cone.n}")
    gens = list(face.rays) + [tuple(-a for a in l) for l in face.lines] + list(face.lines)
    for g in gens:
        if not cone_contains_point(cone, g):
            return False
    active = [f for f in cone.facets if all(la.dot(f, g) == 0 for g in gens)]
    lines, rays = halfspaces_to_generators(
        tuple(cone.equations) + tuple(active), cone.facets, cone.n
    )
    return (rays, lines) == (face.rays, face.lines)


def cone_subset(inner: Cone, outer: Cone) -> bool:
    """Is every point of ``inner`` contained in ``outer``?"""
    gens = list(inner.rays) + list(inner.lines) + [
        tuple(-a for a in l) for l in inner.lines
    ]
    if not gens:
        return True
    return all(cone_contains_point(outer, g) for g in gens)
