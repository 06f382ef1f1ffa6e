"""Generalized simplicial complexes with integral-affine structure.

Cells are simplices with ordered vertex lists and named codimension-1 face
maps; self-identifications are allowed (an edge may start and end at the
same vertex), subject to the usual simplicial identities.  Each m-cell
carries the order-simplex chart

    O_m = {1 >= x_1 >= ... >= x_m >= 0},

whose face embeddings prepend 1, append 0, or duplicate a coordinate; all
transition maps lie in GL(Z) acting affinely, which is what makes exact
scale subdivision possible.

Provided here: dual complexes of curve-type stratifications (analytic mode
keeps branch data and can produce loops, algebraic mode cannot), collapse
from analytic to algebraic, exact N-fold scale subdivision by lattice
alcoves, rational point enumeration, Euler characteristics, simplicial maps
induced by vertex assignments, exact polyhedral fibers of such maps, and
fiber complexes of compatible maps of fans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import _linalg as la
from ._polyhedra import polyhedron_info
from .errors import (
    DimensionMismatch,
    IncoherentIncidence,
    MissingProvenance,
    NoAffineStructure,
    NotCompatible,
    NotSimplicial,
    PointOutsideTarget,
    ValidationError,
)
from .fans import Fan
from .lattice import (
    INTERIOR,
    Cone,
    cone_contains,
    cone_contains_point,
    cone_faces,
    cone_is_face,
)

QVec = tuple[Fraction, ...]


# -- complexes ---------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """A simplex: dim+1 ordered codimension-1 faces, named."""

    name: str
    dim: int
    faces: tuple[str, ...]


@dataclass(frozen=True)
class DeltaComplex:
    """Cells of all dimensions, closed under faces, identities verified."""

    cells: tuple[Cell, ...]
    affine: bool = True
    provenance: Optional[str] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return max(c.dim for c in self.cells)

    def cell(self, name: str) -> Cell:
        for c in self.cells:
            if c.name == name:
                return c
        raise KeyError(f"no cell named {name!r}")

    def by_dim(self, d: int) -> tuple[Cell, ...]:
        return tuple(c for c in self.cells if c.dim == d)


def make_complex(cells: Sequence[tuple[str, Sequence[str]]],
                 affine: bool = True,
                 provenance: Optional[str] = None) -> DeltaComplex:
    """Build and validate a complex from (name, face names) pairs.

    Vertices are pairs with an empty face list; an m-cell must list m+1
    faces of dimension m-1, and iterated faces must satisfy the simplicial
    identity d_i d_j = d_{j-1} d_i for i < j.
    """
    built: dict[str, Cell] = {}
    pending = [(str(n), tuple(str(f) for f in fs)) for n, fs in cells]
    if not pending:
        raise ValidationError("a complex needs at least one cell")
    names = [n for n, _ in pending]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate cell names in {sorted(names)}")
    for name, faces in sorted(pending, key=lambda p: len(p[1])):
        dim = len(faces) - 1 if faces else 0
        for f in faces:
            if f not in built:
                raise ValidationError(
                    f"cell {name!r} refers to unknown or deeper face {f!r}")
            if built[f].dim != dim - 1:
                raise ValidationError(
                    f"cell {name!r} of dimension {dim} has face {f!r} of "
                    f"dimension {built[f].dim}")
        built[name] = Cell(name, dim, faces)
    for c in built.values():
        if c.dim < 2:
            continue
        for i, j in itertools.combinations(range(c.dim + 1), 2):
            left = built[c.faces[j]].faces[i]
            right = built[c.faces[i]].faces[j - 1]
            if left != right:
                raise ValidationError(
                    f"simplicial identity fails on {c.name!r} at ({i},{j}): "
                    f"{left!r} != {right!r}")
    ordered = tuple(sorted(built.values(), key=lambda c: (c.dim, c.name)))
    return DeltaComplex(ordered, affine=affine, provenance=provenance)


def cell_vertices(x: DeltaComplex, name: str) -> tuple[str, ...]:
    """Ordered vertex names of a cell (repeats allowed)."""
    c = x.cell(name)
    if c.dim == 0:
        return (name,)
    head = cell_vertices(x, c.faces[-1])
    tail = cell_vertices(x, c.faces[0])
    return head + (tail[-1],)


def count_cells(x: DeltaComplex) -> dict[int, int]:
    """Number of cells in each dimension."""
    out: dict[int, int] = {}
    for c in x.cells:
        out[c.dim] = out.get(c.dim, 0) + 1
    return out


def euler_characteristic(x: DeltaComplex) -> int:
    return sum((-1) ** d * k for d, k in count_cells(x).items())


def component_ratio(fine: DeltaComplex, coarse: DeltaComplex) -> Fraction:
    """Ratio of top-cell counts; N^m for an N-fold subdivision in dim m."""
    if fine.dim != coarse.dim:
        raise DimensionMismatch(
            f"top dimensions differ: {fine.dim} vs {coarse.dim}")
    d = fine.dim
    return Fraction(len(fine.by_dim(d)), len(coarse.by_dim(d)))


# -- ready-made complexes ----------------------------------------------------


def point_complex(name: str = "pt") -> DeltaComplex:
    return make_complex([(name, [])])


def segment_complex() -> DeltaComplex:
    return make_complex([("z0", []), ("z1", []), ("e", ["z1", "z0"])])


def triangle_complex() -> DeltaComplex:
    return make_complex([
        ("a", []), ("b", []), ("c", []),
        ("bc", ["c", "b"]), ("ac", ["c", "a"]), ("ab", ["b", "a"]),
        ("T", ["bc", "ac", "ab"]),
    ])


def square_complex() -> DeltaComplex:
    """The unit square as two triangles glued along the diagonal.

    Vertices a=(0,0), b=(1,0), c=(0,1), d=(1,1); the diagonal runs a-d.
    """
    return make_complex([
        ("a", []), ("b", []), ("c", []), ("d", []),
        ("ab", ["b", "a"]), ("ad", ["d", "a"]), ("ac", ["c", "a"]),
        ("bd", ["d", "b"]), ("cd", ["d", "c"]),
        ("abd", ["bd", "ad", "ab"]),
        ("acd", ["cd", "ad", "ac"]),
    ])


def tetrahedron_boundary() -> DeltaComplex:
    """Four triangles glued as the boundary of a 3-simplex (chi = 2)."""
    cells = _simplex_cells(3)
    return make_complex([c for c in cells if len(c[1]) != 4])


def tetrahedron_solid() -> DeltaComplex:
    return make_complex(_simplex_cells(3))


def _simplex_cells(m: int) -> list[tuple[str, list[str]]]:
    """All faces of the standard m-simplex on vertices v0..vm."""
    out = []
    for k in range(1, m + 2):
        for sub in itertools.combinations(range(m + 1), k):
            name = "v" + "".join(str(i) for i in sub)
            faces = ["v" + "".join(str(i) for i in sub[:j] + sub[j + 1:])
                     for j in range(k)] if k > 1 else []
            out.append((name, faces))
    return out


def cycle_complex(m: int) -> DeltaComplex:
    """Cycle with m vertices and m edges; m = 1 is a loop on one vertex."""
    if m < 1:
        raise ValueError("a cycle needs at least one edge")
    cells: list[tuple[str, list[str]]] = [(f"v{i}", []) for i in range(m)]
    for i in range(m):
        cells.append((f"e{i}", [f"v{(i + 1) % m}", f"v{i}"]))
    return make_complex(cells)


# -- stratification incidence ------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    name: str
    codim: int
    branches: int


@dataclass(frozen=True)
class StrataIncidence:
    """Closure incidence of a stratified space, with branch counts."""

    mode: str
    strata: tuple[Stratum, ...]
    closures: tuple[tuple[str, str], ...]

    def stratum(self, name: str) -> Stratum:
        for s in self.strata:
            if s.name == name:
                return s
        raise KeyError(f"no stratum named {name!r}")


def make_incidence(mode: str, strata, closures) -> StrataIncidence:
    """Validate mode, codimension monotonicity, and branch arithmetic."""
    if mode not in ("analytic", "algebraic"):
        raise ValidationError(f"unknown incidence mode {mode!r}")
    ss = tuple(Stratum(str(n), int(c), int(b)) for n, c, b in strata)
    names = [s.name for s in ss]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate stratum names in {sorted(names)}")
    for s in ss:
        if s.codim < 0 or s.branches < 1:
            raise ValidationError(
                f"stratum {s.name!r} needs codim >= 0 and branches >= 1")
        # a stratum where k+1 local branches meet has codimension k
        if s.branches != s.codim + 1:
            raise ValidationError(
                f"stratum {s.name!r} has {s.branches} branches but "
                f"codimension {s.codim}; expected codim + 1 branches")
    inc = StrataIncidence(mode, ss, tuple((str(a), str(b)) for a, b in closures))
    for lower, upper in inc.closures:
        lo, up = inc.stratum(lower), inc.stratum(upper)
        if lo.codim <= up.codim:
            raise ValidationError(
                f"closure pair ({lower!r}, {upper!r}) must strictly increase "
                f"codimension: {lo.codim} vs {up.codim}")
    return inc


def from_incidence(inc: StrataIncidence) -> DeltaComplex:
    """Dual complex of a curve-type stratification.

    Components become vertices.  In analytic mode a double point on one
    component closes up into a loop; in algebraic mode branches along a
    single component are invisible and contribute nothing.
    """
    deep = [s for s in inc.strata if s.codim > 1]
    if deep:
        raise IncoherentIncidence(
            f"strata of codimension > 1 are not supported here: "
            f"{sorted(s.name for s in deep)}")
    components = [s for s in inc.strata if s.codim == 0]
    nodes = [s for s in inc.strata if s.codim == 1]
    cells: list[tuple[str, list[str]]] = [(s.name, []) for s in components]
    for node in nodes:
        linked = sorted({upper for lower, upper in inc.closures
                         if lower == node.name})
        for u in linked:
            if inc.stratum(u).codim != 0:
                raise IncoherentIncidence(
                    f"node {node.name!r} closure-linked to non-component "
                    f"{u!r}")
        if len(linked) == 2:
            cells.append((node.name, [linked[1], linked[0]]))
        elif len(linked) == 1:
            if inc.mode == "analytic":
                cells.append((node.name, [linked[0], linked[0]]))
            # algebraic mode cannot separate the branches: nothing to add
        else:
            raise IncoherentIncidence(
                f"node {node.name!r} touches {len(linked)} components; "
                f"expected 1 or 2")
    return make_complex(cells, provenance=inc.mode)


def polygon_incidence(m: int, mode: str = "analytic") -> StrataIncidence:
    """Incidence of a cycle of m rational curves (one curve self-glued if 1)."""
    if m < 1:
        raise ValueError("need at least one component")
    strata = [(f"C{i}", 0, 1) for i in range(m)]
    strata += [(f"n{i}", 1, 2) for i in range(m)]
    closures = []
    for i in range(m):
        closures.append((f"n{i}", f"C{i}"))
        if (i + 1) % m != i:
            closures.append((f"n{i}", f"C{(i + 1) % m}"))
    return make_incidence(mode, strata, closures)


def nodal_cubic_incidence(mode: str = "analytic") -> StrataIncidence:
    """An irreducible curve with one double point."""
    return make_incidence(
        mode, [("C", 0, 1), ("p", 1, 2)], [("p", "C")])


# -- maps of complexes -------------------------------------------------------


@dataclass(frozen=True)
class ComplexMap:
    """A simplicial map: each cell lands on a target cell monotonically."""

    source: DeltaComplex
    target: DeltaComplex
    vertex_map: tuple[tuple[str, str], ...]
    cell_images: tuple[tuple[str, tuple[str, tuple[int, ...]]], ...]

    def vertex_image(self, name: str) -> str:
        return dict(self.vertex_map)[name]

    def cell_image(self, name: str) -> tuple[str, tuple[int, ...]]:
        return dict(self.cell_images)[name]


def _monotone_surjections(m: int, k: int):
    """All weakly monotone surjections {0..m} -> {0..k}."""
    if k > m:
        return
    for cuts in itertools.combinations(range(1, m + 1), k):
        phi = []
        value = 0
        for j in range(m + 1):
            if value < k and j == cuts[value]:
                value += 1
            phi.append(value)
        yield tuple(phi)


def _reduce_image(x: DeltaComplex, cell_name: str, phi: tuple[int, ...]
                  ) -> tuple[str, tuple[int, ...]]:
    """Collapse unused target vertices: canonical (cell, surjection) pair."""
    cell = x.cell(cell_name)
    k = cell.dim
    while True:
        missing = [r for r in range(k + 1) if r not in phi]
        if not missing:
            return cell_name, phi
        r = missing[0]
        cell_name = x.cell(cell_name).faces[r]
        cell = x.cell(cell_name)
        k -= 1
        phi = tuple(v - 1 if v > r else v for v in phi)


def _delta(i: int, m: int) -> tuple[int, ...]:
    """The i-th face inclusion {0..m-1} -> {0..m} (skip i)."""
    return tuple(j if j < i else j + 1 for j in range(m))


def induced_map(source: DeltaComplex, target: DeltaComplex,
                vertex_map: Mapping[str, str],
                cell_images: Optional[Mapping] = None) -> ComplexMap:
    """Simplicial map determined by a vertex assignment.

    Each cell's image is the lowest-dimensional target cell whose vertex
    sequence matches the mapped vertices monotonically.  When parallel
    target cells share a vertex sequence the choice is ambiguous and must
    be supplied through cell_images.
    """
    vm = {str(a): str(b) for a, b in vertex_map.items()}
    for v in source.by_dim(0):
        if v.name not in vm:
            raise NotSimplicial(f"vertex {v.name!r} has no image")
        img = vm[v.name]
        if not any(c.name == img and c.dim == 0 for c in target.cells):
            raise NotSimplicial(f"{v.name!r} maps to non-vertex {img!r}")
    given = {str(k): (str(c), tuple(int(i) for i in phi))
             for k, (c, phi) in (cell_images or {}).items()}
    target_verts = {c.name: cell_vertices(target, c.name)
                    for c in target.cells}
    images: dict[str, tuple[str, tuple[int, ...]]] = {}
    for cell in sorted(source.cells, key=lambda c: c.dim):
        u = tuple(vm[v] for v in cell_vertices(source, cell.name))
        if cell.name in given:
            name, phi = given[cell.name]
            tcell = target.cell(name)
            if len(phi) != cell.dim + 1 or sorted(set(phi)) != list(
                    range(tcell.dim + 1)) or list(phi) != sorted(phi):
                raise ValidationError(
                    f"cell_images[{cell.name!r}] is not a monotone "
                    f"surjection onto {name!r}")
            if tuple(target_verts[name][p] for p in phi) != u:
                raise NotSimplicial(
                    f"cell_images[{cell.name!r}] conflicts with the vertex "
                    f"assignment")
            images[cell.name] = (name, phi)
            continue
        matches = []
        for k in range(cell.dim + 1):
            for tcell in target.by_dim(k):
                tv = target_verts[tcell.name]
                for phi in _monotone_surjections(cell.dim, k):
                    if tuple(tv[p] for p in phi) == u:
                        matches.append((tcell.name, phi))
            if matches:
                break
        if not matches:
            raise NotSimplicial(
                f"vertices of {cell.name!r} map to {u}, which matches no "
                f"target cell")
        if len(matches) > 1:
            raise ValidationError(
                f"image of {cell.name!r} is ambiguous ({matches}); pass "
                f"cell_images")
        images[cell.name] = matches[0]
    # face coherence: the image of a face is the reduced image of the cell
    for cell in source.cells:
        if cell.dim == 0:
            continue
        name, phi = images[cell.name]
        for i in range(cell.dim + 1):
            face_phi = tuple(phi[j] for j in _delta(i, cell.dim))
            expected = _reduce_image(target, name, face_phi)
            if images[cell.faces[i]] != expected:
                raise NotSimplicial(
                    f"face {i} of {cell.name!r} maps to "
                    f"{images[cell.faces[i]]}, expected {expected}")
    return ComplexMap(
        source, target,
        tuple(sorted(vm.items())),
        tuple(sorted(images.items())),
    )


def identity_map(x: DeltaComplex) -> ComplexMap:
    """The identity, with every cell assigned to itself explicitly."""
    return induced_map(
        x, x, {v.name: v.name for v in x.by_dim(0)},
        {c.name: (c.name, tuple(range(c.dim + 1))) for c in x.cells})


def collapse_to_algebraic(x: DeltaComplex
                          ) -> tuple[DeltaComplex, ComplexMap]:
    """Forget branch data: collapse loop edges of an analytic dual complex."""
    if x.provenance is None:
        raise MissingProvenance(
            "complex has no stratification provenance; build it through "
            "from_incidence")
    if x.provenance == "algebraic":
        return x, identity_map(x)
    if x.dim > 1:
        raise IncoherentIncidence("collapse is defined for curve-type duals")
    loops = [c for c in x.by_dim(1) if c.faces[0] == c.faces[1]]
    kept = [c for c in x.cells if c not in loops]
    collapsed = make_complex(
        [(c.name, list(c.faces)) for c in kept], provenance="algebraic")
    images = {c.name: (c.name, tuple(range(c.dim + 1))) for c in kept}
    for c in loops:
        images[c.name] = (c.faces[0], (0, 0))
    mapping = induced_map(
        x, collapsed, {v.name: v.name for v in x.by_dim(0)}, images)
    return collapsed, mapping


# -- points and scale subdivision --------------------------------------------


def canonical_point(x: DeltaComplex, name: str, coords: Sequence
                    ) -> tuple[str, QVec]:
    """Unique (cell, interior barycentric coordinates) form of a point."""
    cell = x.cell(name)
    t = tuple(Fraction(c) for c in coords)
    if len(t) != cell.dim + 1:
        raise DimensionMismatch(
            f"{len(t)} coordinates for a {cell.dim}-cell")
    if any(c < 0 for c in t) or sum(t) != 1:
        raise ValueError(f"{t} is not a barycentric point")
    while cell.dim > 0:
        zeros = [j for j, c in enumerate(t) if c == 0]
        if not zeros:
            break
        j = zeros[0]
        name = cell.faces[j]
        cell = x.cell(name)
        t = t[:j] + t[j + 1:]
    return name, t


def rational_points(x: DeltaComplex, level: int) -> frozenset:
    """All points with barycentric denominators dividing the level."""
    if level < 1:
        raise ValueError("level must be a positive integer")
    points = set()
    for cell in x.cells:
        d = cell.dim
        # interior points: positive multiples of 1/level summing to 1
        for comp in itertools.combinations(range(1, level), d):
            cuts = (0,) + comp + (level,)
            t = tuple(Fraction(cuts[i + 1] - cuts[i], level)
                      for i in range(d + 1))
            points.add((cell.name, t))
    return frozenset(points)


def _alcoves(m: int, level: int):
    """Unimodular alcoves of the dilated order simplex level*O_m.

    Each alcove is the ordered vertex chain b, b+e_{pi(1)}, ..., b+1 for an
    integer base point and a permutation; exactly level**m of them fit.
    """
    if m == 0:
        yield ((),)
        return
    bases = [b for b in itertools.product(range(level + 1), repeat=m)
             if all(b[i] >= b[i + 1] for i in range(m - 1))]
    for b in bases:
        for pi in itertools.permutations(range(m)):
            chain = [tuple(b)]
            cur = list(b)
            ok = True
            for step in pi:
                cur[step] += 1
                good = all(cur[i] >= cur[i + 1] for i in range(m - 1)) \
                    and cur[0] <= level and cur[-1] >= 0
                if not good:
                    ok = False
                    break
                chain.append(tuple(cur))
            if ok:
                yield tuple(chain)


def _push_face(x: DeltaComplex, name: str, verts: tuple[tuple[int, ...], ...],
               level: int) -> tuple[str, tuple[tuple[int, ...], ...]]:
    """Canonical carrier of a lattice simplex: drop walls it lies in."""
    cell = x.cell(name)
    while cell.dim > 0:
        m = cell.dim
        wall = None
        for j in range(m + 1):
            if j == 0 and all(v[0] == level for v in verts):
                wall = 0
            elif j == m and all(v[m - 1] == 0 for v in verts):
                wall = m
            elif 0 < j < m and all(v[j - 1] == v[j] for v in verts):
                wall = j
            if wall is not None:
                break
        if wall is None:
            break
        name = cell.faces[wall]
        cell = x.cell(name)
        if wall == 0:
            verts = tuple(v[1:] for v in verts)
        elif wall == m:
            verts = tuple(v[:-1] for v in verts)
        else:
            verts = tuple(v[:wall] + v[wall + 1:] for v in verts)
    return name, verts


def _bary(y: tuple[int, ...], level: int) -> QVec:
    """Order-simplex lattice point to barycentric coordinates."""
    ext = (level,) + tuple(y) + (0,)
    return tuple(Fraction(ext[i] - ext[i + 1], level)
                 for i in range(len(y) + 1))


def _sub_name(carrier: str, verts) -> str:
    if not verts[0] and len(verts) == 1:
        return carrier
    return carrier + "|" + "_".join(
        ".".join(str(c) for c in v) for v in verts)


@dataclass(frozen=True)
class SubdivisionResult:
    """An N-fold scale subdivision with its cells located in the original."""

    complex: DeltaComplex
    original: DeltaComplex
    level: int
    carriers: tuple[tuple[str, tuple[str, tuple[tuple[int, ...], ...]]], ...]

    def carrier(self, name: str) -> tuple[str, tuple[tuple[int, ...], ...]]:
        return dict(self.carriers)[name]

    def push_point(self, name: str, coords: Sequence) -> tuple[str, QVec]:
        """Locate a point of the subdivision in the original complex."""
        carrier, verts = self.carrier(name)
        weights = tuple(Fraction(c) for c in coords)
        if len(weights) != len(verts):
            raise DimensionMismatch(
                f"{len(weights)} coordinates for a {len(verts) - 1}-cell")
        barys = [_bary(v, self.level) for v in verts]
        t = tuple(sum(w * b[i] for w, b in zip(weights, barys))
                  for i in range(len(barys[0])))
        return canonical_point(self.original, carrier, t)

    def vertex_location(self, name: str) -> tuple[str, QVec]:
        return self.push_point(name, (Fraction(1),))


def scale_subdivide(x: DeltaComplex, level: int) -> SubdivisionResult:
    """Exact N-fold subdivision along the integral-affine structure."""
    if not x.affine:
        raise NoAffineStructure(
            "the complex carries no integral-affine charts")
    if level < 1:
        raise ValueError("subdivision level must be a positive integer")
    found: dict[tuple, int] = {}
    for cell in x.cells:
        for alcove in _alcoves(cell.dim, level):
            for k in range(1, len(alcove) + 1):
                for sub in itertools.combinations(alcove, k):
                    key = _push_face(x, cell.name, sub, level)
                    found[key] = len(sub) - 1
    cells = []
    for (carrier, verts), d in sorted(found.items()):
        name = _sub_name(carrier, verts)
        if d == 0:
            cells.append((name, []))
        else:
            # face i omits vertex i, then falls to its own canonical carrier
            faces = []
            for i in range(d + 1):
                dropped = verts[:i] + verts[i + 1:]
                fkey = _push_face(x, carrier, dropped, level)
                faces.append(_sub_name(*fkey))
            cells.append((name, faces))
    carriers = tuple(sorted(
        (_sub_name(carrier, verts), (carrier, verts))
        for (carrier, verts) in found))
    return SubdivisionResult(
        complex=make_complex(cells, affine=True, provenance=x.provenance),
        original=x,
        level=level,
        carriers=carriers,
    )


# -- fibers of simplicial maps -----------------------------------------------


@dataclass(frozen=True)
class FiberComplex:
    """Exact polyhedral fiber of a simplicial map over a rational point."""

    point: tuple[str, QVec]
    faces_by_dim: tuple[tuple[int, int], ...]
    euler: int

    @property
    def f_vector(self) -> tuple[int, ...]:
        counts = dict(self.faces_by_dim)
        if not counts:
            return ()
        return tuple(counts.get(d, 0) for d in range(max(counts) + 1))

    @property
    def is_empty(self) -> bool:
        return not self.faces_by_dim


def _occurrences(x: DeltaComplex, name: str, face_name: str):
    """Monotone embeddings of face_name as an iterated face of the cell."""
    cell = x.cell(name)
    fdim = x.cell(face_name).dim
    for kept in itertools.combinations(range(cell.dim + 1), fdim + 1):
        cur = name
        for j in sorted(set(range(cell.dim + 1)) - set(kept), reverse=True):
            cur = x.cell(cur).faces[j]
        if cur == face_name:
            yield kept


def _polytope_faces_by_vertices(vertices, rows, n):
    """Faces of a polytope as vertex sets: close row-active sets under meet."""
    all_verts = frozenset(vertices)
    seeds = []
    for coeffs, const in rows:
        active = frozenset(
            v for v in vertices
            if sum(c * vc for c, vc in zip(coeffs, v)) + const == 0)
        if active:
            seeds.append(active)
    faces = {all_verts}
    queue = list(seeds)
    while queue:
        fs = queue.pop()
        if fs in faces or not fs:
            continue
        faces.add(fs)
        for other in seeds:
            meet = fs & other
            if meet and meet not in faces:
                queue.append(meet)
    return faces


def _affine_dim(points) -> int:
    pts = list(points)
    p0 = pts[0]
    return la.mat_rank([la.vec_sub(p, p0) for p in pts[1:]])


def _push_fiber_face(x: DeltaComplex, name: str, verts):
    """Canonical (cell, vertex coordinates) key for a glued fiber face."""
    cell = x.cell(name)
    vs = tuple(sorted(verts))
    while cell.dim > 0:
        zero_walls = [j for j in range(cell.dim + 1)
                      if all(v[j] == 0 for v in vs)]
        if not zero_walls:
            break
        j = zero_walls[0]
        name = cell.faces[j]
        cell = x.cell(name)
        vs = tuple(sorted(v[:j] + v[j + 1:] for v in vs))
    return name, vs


def map_fiber(mapping: ComplexMap, cell_name: str, coords: Sequence
              ) -> FiberComplex:
    """The exact fiber of the map over a rational point of the target."""
    try:
        target_cell = mapping.target.cell(cell_name)
    except KeyError as exc:
        raise PointOutsideTarget(str(exc)) from exc
    try:
        tau, p = canonical_point(mapping.target, cell_name, coords)
    except (ValueError, DimensionMismatch) as exc:
        raise PointOutsideTarget(str(exc)) from exc
    del target_cell
    faces: dict[tuple, int] = {}
    for cell in mapping.source.cells:
        image, phi = mapping.cell_image(cell.name)
        k = mapping.target.cell(image).dim
        m = cell.dim
        for kept in _occurrences(mapping.target, image, tau):
            index_of = {r: i for i, r in enumerate(kept)}
            equations = []
            for r in range(k + 1):
                coeffs = tuple(1 if phi[j] == r else 0 for j in range(m + 1))
                const = -p[index_of[r]] if r in index_of else Fraction(0)
                equations.append((coeffs, const))
            rows = [(tuple(1 if i == j else 0 for i in range(m + 1)),
                     Fraction(0)) for j in range(m + 1)]
            equations.append((tuple([1] * (m + 1)), Fraction(-1)))
            info = polyhedron_info(equations, rows, m + 1)
            if info is None:
                continue
            piece_faces = _polytope_faces_by_vertices(
                info.vertices, rows, m + 1)
            for fs in piece_faces:
                key = _push_fiber_face(mapping.source, cell.name, fs)
                faces[key] = _affine_dim(key[1])
    counts: dict[int, int] = {}
    for d in faces.values():
        counts[d] = counts.get(d, 0) + 1
    euler = sum((-1) ** d * c for d, c in counts.items())
    return FiberComplex(
        point=(tau, p),
        faces_by_dim=tuple(sorted(counts.items())),
        euler=euler,
    )


@dataclass(frozen=True)
class FiberComparison:
    """Side-by-side of a computed fiber and a reference dual complex."""

    fiber_euler: int
    reference_euler: int

    @property
    def match(self) -> bool:
        return self.fiber_euler == self.reference_euler


def compare_fiber(fiber: FiberComplex, reference: DeltaComplex
                  ) -> FiberComparison:
    return FiberComparison(fiber.euler, euler_characteristic(reference))


# -- fibers of maps of fans --------------------------------------------------


@dataclass(frozen=True)
class ToricFiberComplex:
    """Source cones sitting over the relative interior of a base cone."""

    base: Cone
    cells: tuple[tuple[int, tuple[Cone, ...]], ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** d * len(cs) for d, cs in self.cells)

    @property
    def counts(self) -> dict[int, int]:
        return {d: len(cs) for d, cs in self.cells}


def _image_cone_in(rows, cone: Cone, target: Cone) -> bool:
    """Does the matrix image of the cone land inside the target cone?"""
    gens = list(cone.rays) + list(cone.lines) + [
        tuple(-a for a in l) for l in cone.lines]
    return all(cone_contains_point(target, la.mat_mul_vec(rows, g))
               for g in gens)


def toric_fiber_complex(matrix: Sequence[Sequence[int]], source: Fan,
                        target: Fan, base: Cone) -> ToricFiberComplex:
    """Fiber of a compatible map of fans over the interior of a base cone."""
    rows = [tuple(int(a) for a in row) for row in matrix]
    if any(len(r) != source.n for r in rows) or len(rows) != target.n:
        raise DimensionMismatch(
            f"matrix shape does not map rank {source.n} to rank {target.n}")
    for sigma in source.maximal:
        if not any(_image_cone_in(rows, sigma, tau) for tau in target.maximal):
            raise NotCompatible(
                f"image of {sigma} lies in no cone of the target fan")
    if not any(cone_is_face(base, tau) for tau in target.maximal):
        raise ValidationError("the base cone is not a cone of the target fan")
    seen: dict[tuple, Cone] = {}
    for sigma in source.maximal:
        for face in cone_faces(sigma):
            seen[(face.rays, face.lines)] = face
    levels: dict[int, list[Cone]] = {}
    for face in seen.values():
        if not _image_cone_in(rows, face, base):
            continue
        # the image of the relative interior lies in the relative interior
        # of the base exactly when the image of one relint point does
        probe = la.mat_mul_vec(rows, face.relint_point())
        if cone_contains(base, probe).kind == INTERIOR:
            levels.setdefault(face.dim - base.dim, []).append(face)
    cells = tuple(
        (d, tuple(sorted(cs, key=lambda c: (c.rays, c.lines))))
        for d, cs in sorted(levels.items()))
    return ToricFiberComplex(base, cells)
