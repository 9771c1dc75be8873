"""Canonical scalings of facet stars and their propagation.

A scaling assigns a positive factor to every facet orbit of a tiling
complex.  Around each codimension-2 face the scaled facet normals must
admit signs making their sum vanish; three-facet ("hexagonal") stars force
the factors up to one common multiplier, four-facet ("quadruple") stars
only tie parallel facets together.  These local conditions generate ratio
constraints whose consistent global solutions are found by propagation
along a spanning tree with exact closure checks on every remaining edge.

All normals are rational: the frame fixes one primitive integer normal per
facet orbit and the scale factors absorb vector lengths, so every equation
in this module is an exact kernel condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import tiling
from ._lp import Vec, frac, nullspace, primitive
from .tiling import DualCell, FaceRef, TilingComplex


class NoPositiveSolution(Exception):
    """A facet star admits no positive scaling; the input cannot tile."""


class NotPrimitiveVertex(Exception):
    """The vertex star does not consist of exactly d+1 tiles."""


class HypothesisViolated(Exception):
    """The two dual 3-cells flanking the parallelogram are not pyramids."""


# ---------------------------------------------------------------------------
# Normal frames.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFrame:
    """One primitive integer normal per facet orbit, with a fixed sign."""

    normals: dict[int, Vec]


def build_frame(c: TilingComplex) -> NormalFrame:
    """Fix a canonical normal representative for every facet orbit."""
    normals: dict[int, Vec] = {}
    p = c.prototile
    for o in c.orbits:
        if o.dim != c.dim - 1:
            continue
        for inc, (n, _) in zip(p.incidence, p.facets):
            if frozenset(p.vertices[i] for i in inc) == frozenset(o.vertices):
                normals[o.index] = n
                break
        else:
            raise ValueError("facet orbit representative is not a facet of "
                             "the base tile")
    return NormalFrame(normals=normals)


# ---------------------------------------------------------------------------
# Scaling families.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarScaling:
    """A family of positive scalings of the facet orbits of one star.

    ``factors`` is a representative member; ``dof`` counts the independent
    positive parameters of the family, and ``unique`` says whether the
    family is a single ray (``dof == 1``).
    """

    kind: str
    factors: dict[int, Fraction]
    dof: int
    unique: bool


def _facet_refs(c: TilingComplex, st) -> list[FaceRef]:
    return [r for r in st if c.orbits[r.orbit].dim == c.dim - 1]


def _normalize_ray(factors: dict[int, Fraction]) -> dict[int, Fraction]:
    vals = primitive(tuple(factors[k] for k in sorted(factors)))
    return dict(zip(sorted(factors), vals))


def star_scaling_d2(c: TilingComplex, f: FaceRef,
                    frame: NormalFrame) -> StarScaling:
    """Scaling family of the facets around a codimension-2 face.

    A three-facet star pins the three factors to the kernel ray of the
    stacked normals (signs are free, magnitudes are not); a four-facet
    star leaves one factor per parallel pair free.

    Raises:
        NoPositiveSolution: the kernel of a three-facet star is degenerate,
            which cannot happen for a genuine face-to-face tiling.
    """
    ft = tiling.classify_d2(c, f)
    refs = _facet_refs(c, tiling.star(c, f))
    orbs = sorted({r.orbit for r in refs})
    if ft.tag == "A":
        if len(orbs) != 3:
            raise NoPositiveSolution(
                "three-tile star must touch three facet orbits")
        cols = [frame.normals[o] for o in orbs]
        rows = [tuple(col[j] for col in cols) for j in range(c.dim)]
        kernel = nullspace(rows, ncols=3)
        if len(kernel) != 1 or any(x == 0 for x in kernel[0]):
            raise NoPositiveSolution(
                "facet normals around a three-tile face admit no scaling "
                "with all factors nonzero")
        coeffs = kernel[0]
        return StarScaling(
            kind="unique_ray",
            factors=_normalize_ray({o: abs(x) for o, x in zip(orbs, coeffs)}),
            dof=1,
            unique=True,
        )
    if len(orbs) != 2:
        raise NoPositiveSolution("four-tile star must touch two facet orbits")
    return StarScaling(kind="two_parameter",
                       factors={o: Fraction(1) for o in orbs},
                       dof=2, unique=False)


class _RatioForest:
    """Union-find over facet orbits carrying exact multiplier constraints.

    ``value[o] = mult[o] * value[root]`` for every orbit in a component;
    linking two orbits with a required ratio either merges components or
    checks the ratio exactly.
    """

    def __init__(self, nodes):
        self.parent = {n: n for n in nodes}
        self.mult = {n: Fraction(1) for n in nodes}

    def find(self, n):
        if self.parent[n] == n:
            return n, Fraction(1)
        root, m = self.find(self.parent[n])
        self.parent[n] = root
        self.mult[n] *= m
        return root, self.mult[n]

    def link(self, a, b, ratio) -> bool:
        """Require value[a] = ratio * value[b]; False on exact conflict."""
        ra, ma = self.find(a)
        rb, mb = self.find(b)
        if ra == rb:
            return ma == ratio * mb
        self.parent[ra] = rb
        self.mult[ra] = ratio * mb / ma
        return True

    def components(self):
        groups: dict[int, list] = {}
        for n in self.parent:
            root, _ = self.find(n)
            groups.setdefault(root, []).append(n)
        return groups


def _joint_star_solve(c: TilingComplex, f: FaceRef, frame: NormalFrame,
                      require_a: bool = False) -> StarScaling:
    st = tiling.star(c, f)
    orbs = sorted({r.orbit for r in _facet_refs(c, st)})
    forest = _RatioForest(orbs)
    seen = set()
    for r in st:
        if c.orbits[r.orbit].dim != c.dim - 2 or r in seen:
            continue
        seen.add(r)
        ft = tiling.classify_d2(c, r)
        if ft.tag != "A":
            if require_a:
                raise NotPrimitiveVertex(
                    "a vertex star of d+1 tiles cannot contain a "
                    "four-tile codimension-2 face")
            continue
        sub = star_scaling_d2(c, r, frame)
        pairs = sorted(sub.factors)
        for o in pairs[1:]:
            if not forest.link(o, pairs[0],
                               sub.factors[o] / sub.factors[pairs[0]]):
                raise NoPositiveSolution(
                    "ratio constraints of the codimension-2 stars conflict")
    groups = forest.components()
    factors: dict[int, Fraction] = {}
    for members in groups.values():
        for o in members:
            _, m = forest.find(o)
            factors[o] = m
    dof = len(groups)
    if dof == 1:
        factors = _normalize_ray(factors)
    return StarScaling(kind="unique_ray" if dof == 1 else "family",
                       factors=factors, dof=dof, unique=dof == 1)


def star_scaling_d3(c: TilingComplex, f: FaceRef,
                    frame: NormalFrame) -> StarScaling:
    """Joint scaling family of all facets around a codimension-3 face.

    Solves every three-facet condition inside the star simultaneously.
    The family is a single ray exactly when the dual 3-cell is an
    octahedron, a pyramid over a parallelogram, or a simplex.

    Raises:
        ValueError: the face does not have dimension d-3.
        NoPositiveSolution: the ratio constraints conflict.
    """
    if c.orbits[f.orbit].dim != c.dim - 3:
        raise ValueError("joint star scaling needs a face of dimension d-3")
    return _joint_star_solve(c, f, frame)


def primitive_vertex_scaling(c: TilingComplex, f: FaceRef,
                             frame: NormalFrame) -> StarScaling:
    """Scaling of the facets around a vertex lying in exactly d+1 tiles.

    The dual cell of such a vertex is a simplex, every codimension-2 face
    of its star is a three-tile face, and the joint solution is a single
    positive ray.  Each triple condition is re-verified exactly on the
    returned factors.

    Raises:
        NotPrimitiveVertex: the vertex star is not d+1 tiles, or a
            four-tile codimension-2 face shows up inside it.
    """
    orbit = c.orbits[f.orbit]
    if orbit.dim != 0:
        raise NotPrimitiveVertex("primitive scaling needs a vertex")
    if len(orbit.tile_shifts) != c.dim + 1:
        raise NotPrimitiveVertex(
            f"vertex lies in {len(orbit.tile_shifts)} tiles, "
            f"expected {c.dim + 1}")
    sol = _joint_star_solve(c, f, frame, require_a=True)
    if not sol.unique:
        raise NoPositiveSolution(
            "triple conditions of a primitive vertex star do not chain into "
            "a single ray")
    # Re-verify each triple identity on the joint solution.
    st = tiling.star(c, f)
    for r in st:
        if c.orbits[r.orbit].dim != c.dim - 2:
            continue
        sub = star_scaling_d2(c, r, frame)
        orbs = sorted(sub.factors)
        base = orbs[0]
        for o in orbs[1:]:
            assert (sol.factors[o] * sub.factors[base]
                    == sol.factors[base] * sub.factors[o])
    return sol


# ---------------------------------------------------------------------------
# Gain functions and propagation.
# ---------------------------------------------------------------------------


GainFunction = dict[tuple[int, int], Fraction]


@dataclass(frozen=True)
class ScalingAssignment:
    """A positive scale factor for every facet orbit."""

    factors: dict[int, Fraction]

    def __post_init__(self):
        if any(v <= 0 for v in self.factors.values()):
            raise ValueError("scale factors must be positive")


@dataclass(frozen=True)
class InconsistencyWitness:
    """A closed orbit circuit whose gain product is not one."""

    circuit: tuple[int, ...]
    gain_product: Fraction


def adjacent_facet_pairs(c: TilingComplex) -> set[tuple[int, int]]:
    """Unordered facet-orbit pairs sharing some codimension-2 face."""
    pairs: set[tuple[int, int]] = set()
    zero = (Fraction(0),) * c.dim
    for o in c.orbits:
        if o.dim != c.dim - 2:
            continue
        orbs = sorted({r.orbit
                       for r in _facet_refs(c, tiling.star(c, FaceRef(o.index, zero)))})
        for i, a in enumerate(orbs):
            for b in orbs[i + 1:]:
                pairs.add((a, b))
    return pairs


def gain_from_d2(c: TilingComplex, frame: NormalFrame) -> GainFunction:
    """Gains induced by the unique rays of all three-facet stars."""
    gain: GainFunction = {}
    zero = (Fraction(0),) * c.dim
    for o in c.orbits:
        if o.dim != c.dim - 2:
            continue
        ref = FaceRef(o.index, zero)
        if tiling.classify_d2(c, ref).tag != "A":
            continue
        sub = star_scaling_d2(c, ref, frame)
        for a in sub.factors:
            for b in sub.factors:
                if a != b:
                    gain[(a, b)] = sub.factors[b] / sub.factors[a]
    return gain


def bridge_gain(c: TilingComplex, gain: GainFunction) -> GainFunction:
    """Extend a gain function so its graph reaches every facet orbit.

    Facet orbits meeting only at four-tile ridges carry no ratio
    constraint, so components of the gain graph can be joined freely.
    Unit gains are added along facet-adjacent pairs, one bridge per
    component merge, scanning pairs in sorted order.

    Returns:
        A new gain function whose graph is connected whenever the facet
        adjacency graph is.
    """
    facet_orbs = sorted(o.index for o in c.orbits if o.dim == c.dim - 1)
    comp = {o: o for o in facet_orbs}

    def root(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in gain:
        comp[root(a)] = root(b)
    out = dict(gain)
    for a, b in sorted(adjacent_facet_pairs(c)):
        if root(a) != root(b):
            out[(a, b)] = out[(b, a)] = Fraction(1)
            comp[root(a)] = root(b)
    return out


def propagate(c: TilingComplex, gain: GainFunction, seed: int):
    """Spread a seed factor through the gain graph and check every circuit.

    Returns:
        A ScalingAssignment when the gain is closed along all circuits of
        the quotient graph, otherwise an InconsistencyWitness holding one
        violating circuit.

    Raises:
        ValueError: a gain pair is not facet-adjacent, reciprocity fails,
            a gain is not positive, or the gain graph does not reach every
            facet orbit from the seed.
    """
    gain = {k: frac(v) for k, v in gain.items()}
    facet_orbs = sorted(o.index for o in c.orbits if o.dim == c.dim - 1)
    adjacent = adjacent_facet_pairs(c)
    for (a, b), t in gain.items():
        if t <= 0:
            raise ValueError("gains must be positive")
        if (min(a, b), max(a, b)) not in adjacent:
            raise ValueError(f"facet orbits {a} and {b} share no "
                             "codimension-2 face")
        if gain.get((b, a)) is None or t * gain[(b, a)] != 1:
            raise ValueError("gain reciprocity T[a,b]*T[b,a] = 1 fails")
    if seed not in facet_orbs:
        raise ValueError("seed must be a facet orbit")

    neighbors: dict[int, list[int]] = {o: [] for o in facet_orbs}
    for a, b in gain:
        neighbors[a].append(b)
    factors = {seed: Fraction(1)}
    parent: dict[int, int] = {seed: seed}
    queue = [seed]
    while queue:
        a = queue.pop(0)
        for b in sorted(neighbors[a]):
            if b not in factors:
                factors[b] = factors[a] * gain[(a, b)]
                parent[b] = a
                queue.append(b)
    if set(factors) != set(facet_orbs):
        raise ValueError("gain graph does not connect all facet orbits")

    for (a, b), t in sorted(gain.items()):
        if factors[b] != factors[a] * t:
            # Close the failing edge with the tree path from b back to a.
            path_a = _root_path(parent, a)
            path_b = _root_path(parent, b)
            while (len(path_a) > 1 and len(path_b) > 1
                   and path_a[-2] == path_b[-2]):
                path_a.pop()
                path_b.pop()
            circuit = tuple([a] + path_b + list(reversed(path_a))[1:])
            prod = Fraction(1)
            for x, y in zip(circuit, circuit[1:]):
                prod *= gain[(x, y)]
            return InconsistencyWitness(circuit=circuit, gain_product=prod)
    return ScalingAssignment(factors=factors)


def _root_path(parent: dict[int, int], n: int) -> list[int]:
    path = [n]
    while parent[path[-1]] != path[-1]:
        path.append(parent[path[-1]])
    return path


def verify_canonical(c: TilingComplex, s: ScalingAssignment,
                     frame: NormalFrame, ref_overrides=None):
    """Check the sign-closure condition on every codimension-2 star.

    For each codimension-2 orbit, searches the (at most 2^4) sign vectors
    for one making the scaled normal sum exactly zero.  ``ref_overrides``
    optionally replaces the factor of individual facet references (used by
    fault-injection tests to model a translation-variant assignment).

    Returns:
        ``(True, None)`` or ``(False, orbit_index)`` with the first star
        where no sign choice works.
    """
    overrides = ref_overrides or {}
    zero = (Fraction(0),) * c.dim
    for o in c.orbits:
        if o.dim != c.dim - 2:
            continue
        refs = _facet_refs(c, tiling.star(c, FaceRef(o.index, zero)))
        vals = [overrides.get(r, s.factors[r.orbit]) for r in refs]
        normals = [frame.normals[r.orbit] for r in refs]
        d = c.dim
        found = False
        for signs in product((1, -1), repeat=len(refs)):
            total = tuple(
                sum(e * v * n[j] for e, v, n in zip(signs, vals, normals))
                for j in range(d))
            if all(x == 0 for x in total):
                found = True
                break
        if not found:
            return (False, o.index)
    return (True, None)


# ---------------------------------------------------------------------------
# Coherence of parallelogram dual cells.
# ---------------------------------------------------------------------------


def pyramid_flanks(c: TilingComplex, pi: DualCell,
                   d4: DualCell) -> tuple[FaceRef, FaceRef]:
    """The two codimension-3 faces between the faces of ``d4`` and ``pi``.

    Raises:
        ValueError: the inputs are not a parallelogram dual 2-cell and a
            dual 4-cell with nested defining faces.
        HypothesisViolated: a flank's dual 3-cell is not a pyramid.
    """
    if pi.combdim != 2 or d4.combdim != 4:
        raise ValueError("need a dual 2-cell and a dual 4-cell")
    f2, f4 = pi.face, d4.face
    v4 = set(c.face_vertices(f4))
    v2 = set(c.face_vertices(f2))
    if not v4 <= v2:
        raise ValueError("the 4-cell's face must lie in the 2-cell's face")
    flanks = [r for r in tiling.star(c, f4)
              if c.orbits[r.orbit].dim == c.dim - 3
              and v4 <= set(c.face_vertices(r)) <= v2]
    if len(flanks) != 2:
        raise ValueError("face interval is not a rhombus")
    for r in flanks:
        try:
            tag = tiling.classify_dual3(tiling.dual_cell(c, r)).tag
        except tiling.UnclassifiableCell:
            tag = "?"
        if tag != "IV":
            raise HypothesisViolated(
                "a dual 3-cell flanking the parallelogram is not a pyramid "
                "over a parallelogram")
    return flanks[0], flanks[1]


def test_coherence(c: TilingComplex, pi: DualCell, d4: DualCell,
                   frame: NormalFrame) -> bool:
    """Whether the two pyramid star scalings agree on the parallelogram.

    Each flank's star scaling is a single ray; both assign factors to the
    two facet orbits of the parallelogram's quadruple star, and coherence
    means the two factor ratios are equal.

    Raises:
        HypothesisViolated: a flanking dual 3-cell is not a pyramid.
        ValueError: malformed inputs.
    """
    fa, fb = pyramid_flanks(c, pi, d4)
    sa = star_scaling_d3(c, fa, frame)
    sb = star_scaling_d3(c, fb, frame)
    if not (sa.unique and sb.unique):
        raise NoPositiveSolution("pyramid star scaling is not a single ray")
    quad = star_scaling_d2(c, pi.face, frame)
    oa, ob = sorted(quad.factors)
    return sa.factors[oa] * sb.factors[ob] == sa.factors[ob] * sb.factors[oa]
