"""Voronoi cells of lattices given by rational Gram matrices.

The lattice is Z^d with inner product <x, y> = x.G.y for a symmetric positive
definite rational G.  Facet vectors of the Voronoi cell around the origin are
found exactly as the strict norm minimizers of the nonzero classes of
Z^d / 2Z^d; no floating point and no basis reduction is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from . import _lp, ratpoly
from ._lp import Vec, dot, frac, vec


class FacetNotCentrallySymmetric(Exception):
    """A facet of the cell is not symmetric about its own center."""


def _check_gram(gram) -> list[list[Fraction]]:
    g = [[frac(x) for x in row] for row in gram]
    d = len(g)
    if any(len(row) != d for row in g):
        raise ValueError("gram matrix must be square")
    for i in range(d):
        for j in range(d):
            if g[i][j] != g[j][i]:
                raise ValueError("gram matrix must be symmetric")
    # Positive definiteness via leading principal minors.
    for k in range(1, d + 1):
        if _det([row[:k] for row in g[:k]]) <= 0:
            raise ValueError("gram matrix must be positive definite")
    return g


def _det(m) -> Fraction:
    n = len(m)
    m = [list(row) for row in m]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for j in range(c, n):
                m[i][j] -= f * m[c][j]
    return out


def gram_norm(gram, v: Sequence) -> Fraction:
    """The quadratic form v.G.v."""
    v = vec(v)
    return sum(
        v[i] * frac(gram[i][j]) * v[j] for i in range(len(v)) for j in range(len(v))
    )


def relevant_vectors(gram) -> tuple[Vec, ...]:
    """Facet vectors of the Voronoi cell of (Z^d, G).

    A nonzero lattice vector v is a facet vector iff +/-v are the unique
    minimizers of the norm in the class v + 2Z^d.  Minimization is an exact
    windowed search: every candidate with norm at most the class
    representative's is inside the computed coordinate box.

    Returns:
        lex-sorted tuple of integer vectors (both signs included).
    """
    g = _check_gram(gram)
    d = len(g)
    # Integerize the form for fast comparisons.
    den = 1
    for row in g:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    gi = [[int(x * den) for x in row] for row in g]

    def q(v):
        return sum(v[i] * gi[i][j] * v[j] for i in range(d) for j in range(d))

    reps = [c for c in itertools.product((0, 1), repeat=d) if any(c)]
    bound = max(q(c) for c in reps)  # integerized class-minimum upper bound
    ginv = _lp.invert(g)
    box = []
    for i in range(d):
        # v.G.v >= v_i^2 / (G^-1)_ii, so |v_i|^2 <= bound/den * (G^-1)_ii.
        lim = Fraction(bound, den) * ginv[i][i]
        box.append(isqrt(lim.numerator // lim.denominator))
    best: dict[tuple, int] = {}
    argmin: dict[tuple, list] = {}
    for v in itertools.product(*[range(-b, b + 1) for b in box]):
        cls = tuple(x & 1 for x in v)
        if not any(cls):
            continue  # the zero class of Z^d / 2Z^d never yields facets
        nv = q(v)
        if nv > bound:
            continue
        cur = best.get(cls)
        if cur is None or nv < cur:
            best[cls] = nv
            argmin[cls] = [v]
        elif nv == cur:
            argmin[cls].append(v)
    out = []
    for cls, mins in argmin.items():
        if len(mins) == 2:
            out.extend(vec(m) for m in mins)
    return tuple(sorted(out))


def dv_cell(gram) -> ratpoly.Polytope:
    """Voronoi cell of the origin: {x : v.G.x <= v.G.v / 2 for facet vectors v}."""
    return dv_cell_with_vectors(gram)[0]


def dv_cell_with_vectors(gram):
    """Voronoi cell plus the facet -> lattice-vector correspondence.

    Returns:
        (cell, vectors) with vectors[i] the facet vector of cell.facets[i].
    """
    g = _check_gram(gram)
    d = len(g)
    rel = relevant_vectors(g)
    halfspaces = []
    for v in rel:
        n = tuple(dot(vec(row), v) for row in g)  # G v
        halfspaces.append((n, gram_norm(g, v) / 2))
    cell = ratpoly.from_halfspaces(halfspaces)
    vectors = []
    for n, b in cell.facets:
        match = None
        for v, (hn, hb) in zip(rel, halfspaces):
            pn = _lp.primitive(hn)
            k = next(i for i in range(d) if hn[i] != 0)
            if pn == n and hb * (pn[k] / hn[k]) == b:
                match = v
                break
        if match is None:  # pragma: no cover - every facet comes from a vector
            raise AssertionError("facet without a lattice vector")
        vectors.append(match)
    return cell, tuple(vectors)


# ---------------------------------------------------------------------------
# Belts.
# ---------------------------------------------------------------------------


def _direction_key(verts: list[Vec]):
    rows, _ = _lp.rref([_lp.vsub(v, verts[0]) for v in verts[1:]])
    return tuple(rows)


def belts_of(cell: ratpoly.Polytope) -> list[list[int]]:
    """Belts of a centrally symmetric polytope, as facet-index cycles.

    A belt collects the facets sharing translates of a fixed (d-2)-face; the
    walk steps from a facet to its neighbour across the current face, moving
    to the parallel opposite face inside each facet.  For d == 2 the single
    belt is the cycle of all edges.

    Raises:
        FacetNotCentrallySymmetric: some facet has no parallel opposite face
            to continue the walk through.
    """
    d = cell.dim
    if d < 2:
        return []
    if d == 2:
        return [list(range(len(cell.facets)))]
    fl = ratpoly.face_lattice(cell)
    ridges = list(fl.faces_by_dim.get(d - 2, ()))
    # Facets containing each ridge (exactly two in a polytope).
    facet_sets = [set(inc) for inc in cell.incidence]
    ridge_facets = []
    for r in ridges:
        fs = [i for i, s in enumerate(facet_sets) if r <= s]
        ridge_facets.append(fs)
    # Group ridges by direction space.
    key_of = []
    for r in ridges:
        verts = [cell.vertices[i] for i in sorted(r)]
        key_of.append(_direction_key(verts))
    belts: list[list[int]] = []
    seen_ridges: set[int] = set()
    order = sorted(range(len(ridges)), key=lambda i: tuple(sorted(ridges[i])))
    for start in order:
        if start in seen_ridges:
            continue
        key = key_of[start]
        cycle: list[int] = []
        ridge = start
        facet = ridge_facets[start][0]
        while True:
            seen_ridges.add(ridge)
            cycle.append(facet)
            # Step across the ridge to the other facet.
            a, b = ridge_facets[ridge]
            facet = b if facet == a else a
            # Inside `facet`, move to the other ridge parallel to the class.
            cands = [
                i
                for i in range(len(ridges))
                if i != ridge
                and key_of[i] == key
                and facet in ridge_facets[i]
            ]
            if len(cands) != 1:
                raise FacetNotCentrallySymmetric(
                    "facet has no unique parallel opposite face"
                )
            ridge = cands[0]
            if ridge == start:
                seen_ridges.add(ridge)
                cycle.append(facet)
                break
        # The walk appends the entry facet twice (once per half turn) when it
        # closes; normalize to the facet cycle.
        if cycle[0] == cycle[-1]:
            cycle = cycle[:-1]
        belts.append(cycle)
    return belts


@dataclass(frozen=True)
class VenkovReport:
    """Outcome of the symmetry-and-belts audit of a Voronoi cell."""

    facet_count: int
    centrally_symmetric: bool
    facets_centrally_symmetric: bool
    belt_lengths: tuple[int, ...]
    passed: bool


def venkov_check_cell(cell: ratpoly.Polytope) -> VenkovReport:
    """Audit an explicit tile: central symmetry, facet symmetry, belt sizes.

    The tile must be centrally symmetric (about its own vertex centroid),
    every facet must be symmetric about its own center, and every belt must
    have four or six facets.
    """
    d = cell.ambient_dim
    n = len(cell.vertices)
    centroid = tuple(sum(v[k] for v in cell.vertices) / n for k in range(d))
    vset = set(cell.vertices)
    cs = all(tuple(2 * centroid[k] - v[k] for k in range(d)) in vset for v in cell.vertices)
    facet_cs = True
    for inc in cell.incidence:
        verts = [cell.vertices[i] for i in sorted(inc)]
        n = len(verts)
        center = tuple(sum(v[k] for v in verts) / n for k in range(cell.ambient_dim))
        fset = set(verts)
        if not all(tuple(2 * center[k] - v[k] for k in range(len(v))) in fset for v in verts):
            facet_cs = False
            break
    lengths: tuple[int, ...] = ()
    belts_ok = False
    if facet_cs:
        try:
            lengths = tuple(sorted(len(b) for b in belts_of(cell)))
            belts_ok = all(l in (4, 6) for l in lengths)
        except FacetNotCentrallySymmetric:
            belts_ok = False
    ok = cs and facet_cs and belts_ok if cell.dim >= 3 else cs and facet_cs
    return VenkovReport(
        facet_count=len(cell.facets),
        centrally_symmetric=cs,
        facets_centrally_symmetric=facet_cs,
        belt_lengths=lengths,
        passed=bool(ok),
    )


def venkov_check(gram) -> VenkovReport:
    """Audit the Voronoi cell of a Gram matrix.  See ``venkov_check_cell``."""
    return venkov_check_cell(dv_cell(gram))


# ---------------------------------------------------------------------------
# JSON input for lattices.
# ---------------------------------------------------------------------------


def gram_from_json(obj: dict) -> list[list[Fraction]]:
    g = [[ratpoly.frac_from_json(x) for x in row] for row in obj["gram"]]
    if "dim" in obj and obj["dim"] != len(g):
        raise ValueError("dim field disagrees with gram size")
    return g


def gram_to_json(gram) -> dict:
    g = [[frac(x) for x in row] for row in gram]
    return {
        "dim": len(g),
        "gram": [[ratpoly.frac_to_json(x) for x in row] for row in g],
    }
