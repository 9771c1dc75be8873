"""Face-to-face lattice tilings and their dual cells.

A centrally symmetric tile ``P`` translated by every vector of the integer
lattice gives a face-to-face tiling of space.  This module stores the tiling
as a finite quotient: faces of the tiling are grouped into translation
orbits, and a concrete face is an orbit representative plus an integer
shift.  On top of that quotient it computes stars, dual cells (convex hulls
of the centers of the tiles sharing a face), the fan type of low-dimensional
dual cells, and the relative position of parallelogram subcells inside a
four-dimensional dual cell.

Coordinates are taken in the lattice basis, so the lattice is always
``Z^d`` and the geometry of the tile is carried by a Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import ratpoly
from . import lattice as lat
from ._lp import (Vec, frac, lex_positive, primitive, rank, strictly_feasible,
                  vadd, vec, vsub)
from .ratpoly import GeometryError, Hyperplane, Polytope


class VenkovFailure(Exception):
    """The candidate tile cannot tile space face-to-face by translations."""


class UnexpectedStarSize(Exception):
    """A codimension-2 face is shared by a number of tiles other than 3 or 4."""


class UnclassifiableCell(Exception):
    """A three-dimensional dual cell matches none of the five known shapes."""


class NotSubcells(Exception):
    """The given parallelograms are not subcells of the given 4-cell."""


# ---------------------------------------------------------------------------
# Data model.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceRef:
    """A face of the tiling: orbit index plus integer translation."""

    orbit: int
    shift: Vec


@dataclass(frozen=True)
class FaceOrbit:
    """A translation class of faces.

    ``vertices`` is the representative face (the lexicographically smallest
    member that is a face of the base tile).  ``tile_shifts`` lists the
    lattice translations of the tiles containing the representative.
    """

    index: int
    dim: int
    vertices: tuple[Vec, ...]
    tile_shifts: tuple[Vec, ...]


@dataclass(frozen=True)
class DualCell:
    """Convex hull of the centers of all tiles sharing one face.

    ``combdim`` is the combinatorial dimension (codimension of the face in
    the tiling); ``dim`` is the measured affine dimension of the hull, which
    may be smaller.  ``face_vertices`` keeps the vertices of the defining
    face so direction-space checks need no back-reference to the complex.
    """

    verts: tuple[Vec, ...]
    combdim: int
    dim: int
    face: FaceRef
    face_vertices: tuple[Vec, ...]

    def hull(self) -> Polytope:
        return ratpoly.from_vertices(self.verts)


@dataclass(frozen=True)
class FanType:
    """Shape tag of a dual cell: A/B in codimension 2, I..V in codimension 3."""

    tag: str
    name: str


FAN_A = FanType("A", "triangle")
FAN_B = FanType("B", "parallelogram")
FAN_I = FanType("I", "parallelepiped")
FAN_II = FanType("II", "triangular_prism")
FAN_III = FanType("III", "octahedron")
FAN_IV = FanType("IV", "pyramid_over_parallelogram")
FAN_V = FanType("V", "simplex")


class TilingComplex:
    """Quotient of a face-to-face lattice tiling by its translation group.

    Attributes:
        gram: Gram matrix of the lattice basis.
        prototile: the base tile (tile of the lattice point at the origin).
        center: center of symmetry of the base tile.
        orbits: face orbits of every dimension, in a fixed order.
        adjacency: for each orbit, the star of its representative face --
            references to every face of the tiling containing it, the
            representative itself included.
    """

    def __init__(self, gram, prototile: Polytope, center: Vec,
                 orbits: tuple[FaceOrbit, ...],
                 adjacency: tuple[tuple[FaceRef, ...], ...]):
        self.gram = gram
        self.prototile = prototile
        self.center = center
        self.orbits = orbits
        self.adjacency = adjacency
        self.dim = prototile.ambient_dim

    def orbit_counts(self) -> dict[int, int]:
        """Number of face orbits in each dimension."""
        out: dict[int, int] = {}
        for o in self.orbits:
            out[o.dim] = out.get(o.dim, 0) + 1
        return out

    def face_vertices(self, f: FaceRef) -> tuple[Vec, ...]:
        """Vertices of a concrete face of the tiling."""
        rep = self.orbits[f.orbit].vertices
        return tuple(vadd(v, f.shift) for v in rep)

    def tiles_of(self, f: FaceRef) -> tuple[Vec, ...]:
        """Lattice translations of the tiles containing the face."""
        return tuple(vadd(s, f.shift)
                     for s in self.orbits[f.orbit].tile_shifts)

    def find_face(self, vertices) -> FaceRef:
        """Locate the face of the tiling with the given vertex set.

        Raises:
            KeyError: no face of the tiling has that vertex set.
        """
        target = sorted(vec(v) for v in vertices)
        for o in self.orbits:
            if len(o.vertices) != len(target):
                continue
            mu = vsub(target[0], o.vertices[0])
            if any(x.denominator != 1 for x in mu):
                continue
            if [vadd(v, mu) for v in o.vertices] == target:
                return FaceRef(o.index, mu)
        raise KeyError("no face of the tiling has the given vertices")


# ---------------------------------------------------------------------------
# Building the quotient complex.
# ---------------------------------------------------------------------------


def _face_coords(p: Polytope) -> list[tuple[Vec, ...]]:
    """All nonempty faces of ``p`` as sorted vertex tuples, the tile included."""
    fl = ratpoly.face_lattice(p)
    out = []
    for d, faces in sorted(fl.faces_by_dim.items()):
        if d < 0:
            continue
        for idxset in faces:
            out.append(tuple(sorted(p.vertices[i] for i in idxset)))
    return out

def _lattice_shift(f: tuple[Vec, ...], g: tuple[Vec, ...]) -> Vec | None:
    """Integer vector ``mu`` with ``f + mu == g``, or None."""
    if len(f) != len(g):
        return None
    mu = vsub(g[0], f[0])
    if any(x.denominator != 1 for x in mu):
        return None
    if all(vadd(v, mu) == w for v, w in zip(f, g)):
        return mu
    return None


def _centroid(verts) -> Vec:
    n = len(verts)
    d = len(verts[0])
    return tuple(sum(v[k] for v in verts) / n for k in range(d))


def _double(v: Vec) -> Vec:
    return tuple(2 * x for x in v)


def _intersect(p1: Polytope, p2: Polytope) -> Polytope | None:
    """Exact intersection of two bounded polytopes, or None when empty."""
    try:
        return ratpoly.from_halfspaces(
            p1.facets + p2.facets,
            equations=p1.equations + p2.equations,
            dim=p1.ambient_dim,
        )
    except ratpoly.EmptyInput:
        return None


def _check_face_to_face(p: Polytope, center: Vec) -> None:
    """Verify that across each facet the neighbor tile meets ``p`` in it."""
    for inc in p.incidence:
        fverts = sorted(p.vertices[i] for i in inc)
        t = vsub(_double(_centroid(fverts)), _double(center))
        if any(x.denominator != 1 for x in t):
            raise VenkovFailure(
                "facet center is not at half a lattice vector from the tile "
                "center; the translates cannot meet face-to-face")
        shared = _intersect(p, p.translate(t))
        if shared is None or sorted(shared.vertices) != fverts:
            raise VenkovFailure(
                "tile and its facet neighbor do not meet in that facet")


def build_complex(gram, prototile: Polytope | None = None) -> TilingComplex:
    """Build the quotient complex of a face-to-face lattice tiling.

    Args:
        gram: Gram matrix of the lattice basis (coordinates are taken in
            that basis, so lattice vectors are integer tuples).
        prototile: optional explicit tile.  When omitted the Voronoi cell of
            the Gram matrix is used.  An explicit tile must satisfy the same
            symmetry-and-belts conditions and must meet each of its facet
            neighbors face-to-face.

    Raises:
        VenkovFailure: the (explicit or Voronoi) tile fails the symmetry or
            belt conditions, or does not tile face-to-face.
        ValueError: dimension above five.
    """
    d = len(gram)
    if d > 5:
        raise ValueError("tilings are supported up to dimension 5 only")
    if prototile is None:
        report = lat.venkov_check(gram)
        if not report.passed:
            raise VenkovFailure(report)
        cell = lat.dv_cell(gram)
    else:
        cell = prototile
        if cell.ambient_dim != d:
            raise ValueError("prototile dimension disagrees with the Gram matrix")
        report = lat.venkov_check_cell(cell)
        if not report.passed:
            raise VenkovFailure(report)
        _check_face_to_face(cell, _centroid(cell.vertices))
    center = _centroid(cell.vertices)

    faces = _face_coords(cell)
    # Group the faces of the base tile into lattice-translation orbits.
    orbit_of: dict[tuple[Vec, ...], int] = {}
    groups: list[list[tuple[Vec, ...]]] = []
    for f in faces:
        for gi, grp in enumerate(groups):
            if _lattice_shift(grp[0], f) is not None:
                grp.append(f)
                orbit_of[f] = gi
                break
        else:
            groups.append([f])
            orbit_of[f] = len(groups) - 1

    # Representative: lexicographically smallest member.  Each member G
    # satisfies rep == G + lam_G, and the tile P + lam_G contains rep.
    orbits: list[FaceOrbit] = []
    lam_of: dict[tuple[Vec, ...], Vec] = {}
    order = sorted(range(len(groups)),
                   key=lambda gi: (_face_dim(groups[gi][0]), min(groups[gi])))
    renumber = {gi: i for i, gi in enumerate(order)}
    for gi in order:
        grp = groups[gi]
        rep = min(grp)
        shifts = []
        for g in grp:
            lam = _lattice_shift(g, rep)
            lam_of[g] = lam
            shifts.append(lam)
        orbits.append(FaceOrbit(
            index=renumber[gi],
            dim=_face_dim(rep),
            vertices=rep,
            tile_shifts=tuple(sorted(shifts)),
        ))
    orbits.sort(key=lambda o: o.index)

    face_set = set(faces)
    adjacency: list[tuple[FaceRef, ...]] = []
    for o in orbits:
        rep = o.vertices
        repset = set(rep)
        star: set[FaceRef] = set()
        for lam in o.tile_shifts:
            # Faces of the tile P + lam containing rep are the faces G of P
            # with G containing rep - lam.
            base = set(vsub(v, lam) for v in rep)
            for g in faces:
                if base <= set(g):
                    q = renumber[orbit_of[g]]
                    star.add(FaceRef(q, vsub(lam, lam_of[g])))
        adjacency.append(tuple(sorted(star, key=lambda r: (r.orbit, r.shift))))

    cpx = TilingComplex(gram=[[frac(x) for x in row] for row in gram],
                        prototile=cell, center=center,
                        orbits=tuple(orbits), adjacency=tuple(adjacency))
    _validate_complex(cpx)
    return cpx


def _face_dim(verts: tuple[Vec, ...]) -> int:
    return rank([vsub(v, verts[0]) for v in verts[1:]])


def _validate_complex(c: TilingComplex) -> None:
    d = c.dim
    counts = c.orbit_counts()
    if counts.get(d, 0) != 1:
        raise GeometryError("tiling quotient must have exactly one tile orbit")
    for o in c.orbits:
        if o.dim == d - 1 and len(o.tile_shifts) != 2:
            raise GeometryError(
                "a facet of a face-to-face tiling must lie in exactly 2 tiles")


# ---------------------------------------------------------------------------
# Stars and dual cells.
# ---------------------------------------------------------------------------


def star(c: TilingComplex, f: FaceRef) -> tuple[FaceRef, ...]:
    """All faces of the tiling containing ``f`` (including ``f`` itself)."""
    return tuple(FaceRef(g.orbit, vadd(g.shift, f.shift))
                 for g in c.adjacency[f.orbit])


def dual_cell(c: TilingComplex, f: FaceRef) -> DualCell:
    """Hull of the centers of the tiles containing ``f``.

    The construction checks three facts about the center set: the points
    are in convex position, they are the only lattice translates of the
    tile center inside their hull, and no two of them differ by twice a
    lattice vector.
    """
    orbit = c.orbits[f.orbit]
    shifts = [vadd(s, f.shift) for s in orbit.tile_shifts]
    verts = tuple(sorted(vadd(c.center, s) for s in shifts))
    hull = ratpoly.from_vertices(verts)
    if set(hull.vertices) != set(verts):
        raise GeometryError("tile centers of a star must be in convex position")
    _check_lattice_points(hull, c.center, verts)
    for a, b in combinations(shifts, 2):
        if all((x - y) % 2 == 0 for x, y in zip(a, b)):
            raise GeometryError(
                "two tile centers of a star are congruent mod 2")
    return DualCell(
        verts=verts,
        combdim=c.dim - orbit.dim,
        dim=hull.dim,
        face=f,
        face_vertices=c.face_vertices(f),
    )


def _check_lattice_points(hull: Polytope, center: Vec, verts: tuple[Vec, ...]) -> None:
    """The lattice translates of ``center`` in ``hull`` are exactly ``verts``."""
    d = hull.ambient_dim
    lo = [min(v[k] for v in verts) for k in range(d)]
    hi = [max(v[k] for v in verts) for k in range(d)]
    vset = set(verts)
    from math import ceil, floor
    ranges = [range(ceil(lo[k] - center[k]), floor(hi[k] - center[k]) + 1)
              for k in range(d)]
    for z in product(*ranges):
        pt = vadd(center, vec(z))
        if hull.contains(pt) and pt not in vset:
            raise GeometryError("hull of a star contains an extra tile center")


# ---------------------------------------------------------------------------
# Fan types.
# ---------------------------------------------------------------------------


def classify_d2(c: TilingComplex, f: FaceRef) -> FanType:
    """Fan type of a codimension-2 face: A for 3 tiles, B for 4.

    Raises:
        ValueError: the face does not have dimension d-2.
        UnexpectedStarSize: the face lies in a number of tiles other than 3
            or 4, which cannot happen in a face-to-face tiling by centrally
            symmetric tiles.
    """
    orbit = c.orbits[f.orbit]
    if orbit.dim != c.dim - 2:
        raise ValueError("fan classification needs a face of dimension d-2")
    n = len(orbit.tile_shifts)
    if n not in (3, 4):
        raise UnexpectedStarSize(f"codimension-2 face lies in {n} tiles")
    dc = dual_cell(c, f)
    if n == 3:
        if len(dc.verts) != 3 or dc.dim != 2:
            raise GeometryError("3-tile star must have a triangle dual cell")
        return FAN_A
    if len(dc.verts) != 4 or dc.dim != 2:
        raise GeometryError("4-tile star must have a parallelogram dual cell")
    s = _centroid(dc.verts)
    if not all(tuple(2 * s[k] - v[k] for k in range(len(v))) in set(dc.verts)
               for v in dc.verts):
        raise GeometryError("4-point dual 2-cell is not centrally symmetric")
    return FAN_B


def _is_parallelepiped(hull: Polytope) -> bool:
    if len(hull.vertices) != 8 or len(hull.facets) != 6 or hull.dim != 3:
        return False
    return all(len(inc) == 4 for inc in hull.incidence)


def classify_dual3(dc: DualCell) -> FanType:
    """Shape of a three-dimensional dual cell.

    The five possibilities are told apart by the vertex count together with
    the number of triangular facets, and the answer is cross-checked against
    the face lattice of the hull.

    Raises:
        ValueError: ``dc`` does not have combinatorial dimension 3.
        UnclassifiableCell: the hull matches none of the five shapes.
    """
    if dc.combdim != 3:
        raise ValueError("fan classification needs a dual cell of codimension 3")
    hull = dc.hull()
    if hull.dim != 3:
        raise UnclassifiableCell(
            f"dual 3-cell spans only dimension {hull.dim}")
    nv = len(hull.vertices)
    tri = sum(1 for inc in hull.incidence if len(inc) == 3)
    nf = len(hull.facets)
    if nv == 8 and tri == 0 and nf == 6:
        return FAN_I
    if nv == 6 and tri == 2 and nf == 5:
        return FAN_II
    if nv == 6 and tri == 8 and nf == 8:
        return FAN_III
    if nv == 5 and tri == 4 and nf == 5:
        return FAN_IV
    if nv == 4 and tri == 4 and nf == 4:
        return FAN_V
    raise UnclassifiableCell(
        f"dual 3-cell with {nv} vertices, {nf} facets ({tri} triangles)")


def is_3_irreducible(c: TilingComplex) -> tuple[bool, tuple[int, FanType] | None]:
    """Whether no dual 3-cell is a parallelepiped or a triangular prism.

    Returns:
        ``(True, None)`` when every codimension-3 dual cell has fan type
        III, IV or V; otherwise ``(False, (orbit_index, fan_type))`` naming
        an offending orbit.
    """
    if c.dim < 3:
        raise ValueError("3-irreducibility needs dimension at least 3")
    for o in c.orbits:
        if o.dim != c.dim - 3:
            continue
        ft = classify_dual3(dual_cell(c, FaceRef(o.index, (Fraction(0),) * c.dim)))
        if ft.tag in ("I", "II"):
            return (False, (o.index, ft))
    return (True, None)


# ---------------------------------------------------------------------------
# Parallelogram subcells of a dual 4-cell.
# ---------------------------------------------------------------------------


def _parallelogram_edges(verts: tuple[Vec, ...]) -> list[tuple[Vec, Vec]]:
    """The four edges of a 4-point centrally symmetric 2-cell."""
    s = _double(_centroid(verts))
    return [(v, w) for v, w in combinations(verts, 2) if vadd(v, w) != s]


def _is_parallelogram(verts: tuple[Vec, ...]) -> bool:
    if len(verts) != 4:
        return False
    if rank([vsub(v, verts[0]) for v in verts[1:]]) != 2:
        return False
    s = _double(_centroid(verts))
    return all(vsub(s, v) in set(verts) for v in verts)


def classify_parallelogram_pair(pi1: DualCell, pi2: DualCell,
                                d4: DualCell) -> str:
    """Relative position of two parallelogram subcells of a dual 4-cell.

    Returns one of ``"complementary"`` (they share one vertex and affinely
    span dimension 4), ``"adjacent"`` (they share an edge and span dimension
    3), ``"translate"`` (one is a translate of the other, off its own
    plane), or ``"skew"`` (disjoint, spanning dimension 4, with exactly one
    pair of parallel edge directions).

    Raises:
        NotSubcells: an input is not a parallelogram subcell of ``d4``, the
            two parallelograms are equal, or their position matches none of
            the four configurations.
    """
    v1, v2 = set(pi1.verts), set(pi2.verts)
    d4v = set(d4.verts)
    if d4.combdim != 4:
        raise NotSubcells("the containing cell must have codimension 4")
    for dc, vs in ((pi1, v1), (pi2, v2)):
        if not vs <= d4v:
            raise NotSubcells("parallelogram vertices must be tile centers "
                              "of the 4-cell's star")
        if not _is_parallelogram(dc.verts):
            raise NotSubcells("subcell is not a parallelogram")
    if v1 == v2:
        raise NotSubcells("the two parallelograms must be distinct")

    h1, h2 = ratpoly.from_vertices(pi1.verts), ratpoly.from_vertices(pi2.verts)
    x = _intersect(h1, h2)
    span = rank([vsub(v, pi1.verts[0]) for v in (pi1.verts + pi2.verts)])

    if x is not None and len(x.vertices) == 1:
        pt = x.vertices[0]
        if pt in v1 and pt in v2 and span == 4:
            return "complementary"
    if x is not None and len(x.vertices) == 2 and span == 3:
        a, b = x.vertices
        if ({a, b} <= v1 and {a, b} <= v2
                and vadd(a, b) != _double(_centroid(pi1.verts))
                and vadd(a, b) != _double(_centroid(pi2.verts))):
            return "adjacent"
    if x is None:
        dirs1 = {lex_positive(primitive(vsub(w, v)))
                 for v, w in _parallelogram_edges(pi1.verts)}
        dirs2 = {lex_positive(primitive(vsub(w, v)))
                 for v, w in _parallelogram_edges(pi2.verts)}
        common = dirs1 & dirs2
        if len(common) == 2 and span == 3:
            t = vsub(_centroid(pi2.verts), _centroid(pi1.verts))
            if {vadd(v, t) for v in pi1.verts} == v2:
                return "translate"
        if len(common) == 1 and span == 4:
            return "skew"
    raise NotSubcells("parallelogram pair matches none of the four "
                      "configurations of subcells of a dual 4-cell")


# ---------------------------------------------------------------------------
# Dual cells meeting their own lattice translates.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TranslateSlice:
    """Intersection of a dual cell with a lattice translate of itself.

    ``intersection`` is None when the two bodies are disjoint; otherwise it
    holds the vertex set of the common face.  ``hyperplane`` separates the
    cell from its translate in either case.
    """

    intersection: tuple[Vec, ...] | None
    hyperplane: Hyperplane


def translate_intersection(dc: DualCell, t) -> TranslateSlice:
    """Meet a dual cell with its translate by a nonzero lattice vector.

    When the two bodies meet, the returned hyperplane ``N`` certifies the
    whole configuration at once: it cuts the cell and its translate exactly
    in their intersection (so the intersection is an exposed face of both),
    and it is parallel to the direction space of the face of the tiling
    that defines the dual cell.  The certificate is found by an exact
    strict-feasibility program over the vertices.

    Raises:
        ValueError: ``t`` is zero or not a lattice vector.
        GeometryError: no such hyperplane exists (the input was not the
            dual cell of a face).
    """
    t = vec(t)
    if all(x == 0 for x in t):
        raise ValueError("translation vector must be nonzero")
    if any(x.denominator != 1 for x in t):
        raise ValueError("translation vector must be a lattice vector")
    body = dc.hull()
    moved = body.translate(t)
    x = _intersect(body, moved)
    if x is None:
        return TranslateSlice(intersection=None,
                              hyperplane=ratpoly.separate(body, moved))

    # Find (a, alpha) with a.v = alpha on the intersection, a.v < alpha on
    # the remaining vertices of the cell, a.w > alpha on the remaining
    # vertices of the translate, and a constant on the defining face.
    d = body.ambient_dim
    on = set(x.vertices)
    fdirs = [vsub(v, dc.face_vertices[0]) for v in dc.face_vertices[1:]]
    eqs = [v + (Fraction(-1),) for v in on]
    eqs += [u + (Fraction(0),) for u in fdirs]
    strict = [tuple(-c for c in v) + (Fraction(1),)
              for v in body.vertices if v not in on]
    strict += [w + (Fraction(-1),)
               for w in moved.vertices if w not in on]
    wit = strictly_feasible(strict, eqs, d + 1)
    if wit is None:
        raise GeometryError(
            "no hyperplane cuts the cell and its translate exactly in their "
            "intersection while staying parallel to the defining face")
    normal, offset = wit[:d], wit[d]
    g = primitive(normal)
    j = next(i for i, c in enumerate(normal) if c != 0)
    h = Hyperplane(normal=g, offset=offset * g[j] / normal[j])
    return TranslateSlice(intersection=tuple(sorted(x.vertices)), hyperplane=h)


# ---------------------------------------------------------------------------
# Audit of the free-segment condition over a whole complex.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkinnyReport:
    """Outcome of auditing every dual cell orbit of a complex."""

    checked: int
    failures: tuple[str, ...]
    passed: bool


def skinny_audit(c: TilingComplex) -> SkinnyReport:
    """Check every dual cell orbit for the no-free-segment condition.

    Each orbit's dual cell must admit no segment that can slide inside it,
    and each three-dimensional dual cell may have at most 8 vertices, with
    8 attained only by parallelepipeds.
    """
    failures: list[str] = []
    checked = 0
    zero = (Fraction(0),) * c.dim
    for o in c.orbits:
        dc = dual_cell(c, FaceRef(o.index, zero))
        checked += 1
        hull = dc.hull()
        if not ratpoly.is_skinny(hull):
            failures.append(
                f"orbit {o.index} (dim {o.dim}): dual cell admits a sliding segment")
        if dc.dim == 3:
            nv = len(hull.vertices)
            if nv > 8:
                failures.append(
                    f"orbit {o.index} (dim {o.dim}): dual 3-cell has {nv} vertices")
            elif nv == 8 and not _is_parallelepiped(hull):
                failures.append(
                    f"orbit {o.index} (dim {o.dim}): 8-vertex dual 3-cell "
                    "is not a parallelepiped")
    return SkinnyReport(checked=checked, failures=tuple(failures),
                        passed=not failures)
