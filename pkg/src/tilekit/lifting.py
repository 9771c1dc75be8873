"""Lifting a canonically scaled planar tiling to a convex function.

Crossing the edge between two tiles changes the gradient of the lift by the
scaled edge normal, so a scaling that closes up around every vertex defines
a piecewise-linear function on the plane: the lift.  Its graph is a union
of planar tiles tangent to the graph of one rational quadratic form, which
this module recovers and certifies (tangency, gradient agreement, and
convexity of the lift), all in exact arithmetic.

Normals here are covectors in lattice-basis coordinates: every identity is
a pairing of coordinate tuples, so no square roots appear.  Relative to
unit-normal conventions this scales each edge orbit by a positive constant,
which cancels from every verified identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor

from ._lp import Vec, dot, vadd, vec, vsub
from .ratpoly import GeometryError
from .scaling import NormalFrame, ScalingAssignment, verify_canonical
from .tiling import TilingComplex


class InconsistentScaling(Exception):
    """The scaling does not close up around some circuit of tiles."""


class PointOnSkeletonAmbiguity(Exception):
    """Evaluation at a vertex of the tiling; no tile owns the point."""


class NotPositiveDefinite(Exception):
    """The recovered quadratic form fails the rational pivot test."""


@dataclass
class Generatrissa:
    """Piecewise-linear lift of a planar tiling, one gradient per tile.

    Tiles are indexed by their lattice shifts; ``base_tile`` carries
    gradient zero and value zero at its center.  ``jumps`` maps each
    neighbor step ``delta`` to the gradient increment for crossing from a
    tile into its ``delta``-neighbor, together with a point on the shared
    edge of the base tile and its ``delta``-neighbor.  ``gradient_map``
    records the propagated gradients on a window around the base tile.
    """

    complex: TilingComplex
    base_tile: Vec
    jumps: dict[Vec, tuple[Vec, Vec]]
    gradient_map: dict[Vec, Vec]
    basis_gradients: tuple[Vec, Vec]
    _values: dict[Vec, Fraction] = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class QForm2:
    """Rational quadratic form y -> y.A.y in facet-vector coordinates."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    basis: tuple[Vec, Vec]


@dataclass(frozen=True)
class LiftReport:
    tangency: bool
    convexity: bool


# ---------------------------------------------------------------------------
# Construction.
# ---------------------------------------------------------------------------


def _neighbor_jumps(c: TilingComplex, s: ScalingAssignment,
                    frame: NormalFrame) -> dict[Vec, tuple[Vec, Vec]]:
    jumps: dict[Vec, tuple[Vec, Vec]] = {}
    for o in c.orbits:
        if o.dim != c.dim - 1:
            continue
        t1, t2 = o.tile_shifts
        delta = vadd(t1, t2)  # one of the two shifts is the origin
        w = tuple(s.factors[o.index] * x for x in frame.normals[o.index])
        p = o.vertices[0]
        jumps[delta] = (w, p)
        jumps[tuple(-x for x in delta)] = (tuple(-x for x in w),
                                           vsub(p, delta))
    return jumps


def _bfs_tree(jumps, inside, start: Vec):
    """Deterministic BFS tree over tile shifts; parent map keyed by shift."""
    parent: dict[Vec, Vec | None] = {start: None}
    queue = [start]
    while queue:
        a = queue.pop(0)
        for delta in sorted(jumps):
            b = vadd(a, delta)
            if b not in parent and inside(b):
                parent[b] = a
                queue.append(b)
    return parent


def _path_from_base(jumps, target: Vec, cap: int = 20000) -> list[Vec]:
    """Shifts of a deterministic tile path from the origin to ``target``."""
    d = len(target)
    zero = vec([0] * d)
    parent: dict[Vec, Vec | None] = {zero: None}
    queue = [zero]
    seen = 0
    while queue:
        a = queue.pop(0)
        if a == target:
            path = [a]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return list(reversed(path))
        seen += 1
        if seen > cap:
            break
        for delta in sorted(jumps):
            b = vadd(a, delta)
            if b not in parent:
                parent[b] = a
                queue.append(b)
    raise GeometryError("tile adjacency search did not reach the target")


def build_generatrissa(c: TilingComplex, s: ScalingAssignment,
                       frame: NormalFrame, window: int = 2) -> Generatrissa:
    """Propagate gradients from the base tile and verify all closures.

    Args:
        c: a two-dimensional tiling complex.
        s: positive factors per edge orbit; must verify as canonical.
        frame: fixed primitive normals per edge orbit.
        window: half-width of the shift box kept in ``gradient_map``.

    Raises:
        ValueError: the complex is not two-dimensional.
        InconsistentScaling: the scaling fails the vertex-star sign
            condition, or some circuit of tiles fails to close exactly.
    """
    if c.dim != 2:
        raise ValueError("the lift is built for planar tilings only")
    ok, star = verify_canonical(c, s, frame)
    if not ok:
        raise InconsistentScaling(
            f"scaling violates the sign condition at face orbit {star}")
    jumps = _neighbor_jumps(c, s, frame)
    zero = vec([0, 0])

    def inside(b):
        return all(abs(x) <= window for x in b)

    parent = _bfs_tree(jumps, inside, zero)
    grads: dict[Vec, Vec] = {zero: zero}
    order = sorted(parent, key=lambda b: (len(_chain(parent, b)), b))
    for b in order:
        a = parent[b]
        if a is not None:
            grads[b] = vadd(grads[a], jumps[vsub(b, a)][0])
    # Every window adjacency must agree with the tree propagation; this
    # closes all circuits of tiles through the window.
    for a, ga in grads.items():
        for delta, (w, _) in jumps.items():
            b = vadd(a, delta)
            if b in grads and grads[b] != vadd(ga, w):
                raise InconsistentScaling(
                    f"circuit through tiles {a} and {b} does not close")

    e1, e2 = vec([1, 0]), vec([0, 1])
    basis_grads = []
    for e in (e1, e2):
        if e in grads:
            basis_grads.append(grads[e])
        else:
            path = _path_from_base(jumps, e)
            g = zero
            for u, v in zip(path, path[1:]):
                g = vadd(g, jumps[vsub(v, u)][0])
            basis_grads.append(g)
    g1, g2 = basis_grads
    # The gradient is additive over tile steps, hence linear in the shift;
    # check the linear extension against every neighbor step.
    for delta, (w, _) in jumps.items():
        lin = tuple(delta[0] * x + delta[1] * y for x, y in zip(g1, g2))
        if lin != w:
            raise InconsistentScaling(
                f"gradient increments along {delta} are not translation "
                "consistent")
    return Generatrissa(complex=c, base_tile=zero, jumps=jumps,
                        gradient_map=grads, basis_gradients=(g1, g2))


def _chain(parent, b):
    out = [b]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


# ---------------------------------------------------------------------------
# Evaluation.
# ---------------------------------------------------------------------------


def gradient_of(g: Generatrissa, shift) -> Vec:
    """Gradient covector of the lift on the tile at a lattice shift."""
    shift = vec(shift)
    g1, g2 = g.basis_gradients
    return tuple(shift[0] * x + shift[1] * y for x, y in zip(g1, g2))


def _cross_value(g: Generatrissa, a: Vec, delta: Vec,
                 value_a: Fraction) -> Fraction:
    """Value at the center of ``a + delta`` given the value at ``a``'s.

    The two affine pieces agree on the shared edge, so chaining through
    any point of that edge's line is exact and path-independent.
    """
    w, p = g.jumps[delta]
    m = vadd(p, a)
    b = vadd(a, delta)
    ca = vadd(g.complex.center, a)
    cb = vadd(g.complex.center, b)
    return (value_a + dot(gradient_of(g, a), vsub(m, ca))
            + dot(gradient_of(g, b), vsub(cb, m)))


def value_along_path(g: Generatrissa, path) -> Fraction:
    """Lift value at the center of the last tile of an explicit tile path.

    Args:
        path: tile shifts starting at the base tile, each consecutive pair
            differing by a neighbor step.

    Raises:
        ValueError: the path does not start at the base tile or makes a
            step that is not a neighbor step.
    """
    path = [vec(a) for a in path]
    if not path or path[0] != g.base_tile:
        raise ValueError("path must start at the base tile")
    val = Fraction(0)
    for a, b in zip(path, path[1:]):
        if vsub(b, a) not in g.jumps:
            raise ValueError(f"tiles {a} and {b} are not neighbors")
        val = _cross_value(g, a, vsub(b, a), val)
    return val


def center_value(g: Generatrissa, shift) -> Fraction:
    """Lift value at the center of the tile at a lattice shift."""
    shift = vec(shift)
    if shift not in g._values:
        path = _path_from_base(g.jumps, shift)
        g._values[shift] = value_along_path(g, path)
    return g._values[shift]


def eval_G(g: Generatrissa, x) -> Fraction:
    """Value of the lift at a rational point of the plane.

    On an edge both adjacent tiles give the same value (the lift is
    continuous) and the tile with the smaller shift is used.

    Raises:
        PointOnSkeletonAmbiguity: ``x`` is a vertex of the tiling.
    """
    x = vec(x)
    c = g.complex
    if len(x) != c.dim:
        raise ValueError("point dimension mismatch")
    for o in c.orbits:
        if o.dim == 0:
            v = o.vertices[0]
            if all((xi - vi).denominator == 1 for xi, vi in zip(x, v)):
                raise PointOnSkeletonAmbiguity(f"{x} is a vertex of the tiling")
    p = c.prototile
    lo = [min(v[k] for v in p.vertices) for k in range(2)]
    hi = [max(v[k] for v in p.vertices) for k in range(2)]
    owners = []
    for l0 in range(ceil(x[0] - hi[0]), floor(x[0] - lo[0]) + 1):
        for l1 in range(ceil(x[1] - hi[1]), floor(x[1] - lo[1]) + 1):
            lam = vec([l0, l1])
            if p.contains(vsub(x, lam)):
                owners.append(lam)
    if not owners:
        raise GeometryError("point lies in no tile of the tiling")
    lam = min(owners)
    return center_value(g, lam) + dot(gradient_of(g, lam),
                                      vsub(x, vadd(c.center, lam)))


# ---------------------------------------------------------------------------
# The inscribed quadratic form.
# ---------------------------------------------------------------------------


def recover_qform(g: Generatrissa, c: TilingComplex) -> QForm2:
    """Quadratic form whose graph is inscribed in the graph of the lift.

    Two independent facet vectors span the tile centers; in their
    coordinates the form has exact rational coefficients read off the
    gradient increments.

    Raises:
        InconsistentScaling: the mixed coefficients disagree, so no single
            form fits the lift.
        NotPositiveDefinite: the form fails the rational pivot test.
    """
    deltas = sorted(g.jumps)
    l1 = deltas[0]
    l2 = next(d for d in deltas if l1[0] * d[1] - l1[1] * d[0] != 0)
    w1 = g.jumps[l1][0]
    w2 = g.jumps[l2][0]
    if dot(l1, w2) != dot(l2, w1):
        raise InconsistentScaling(
            "mixed increments disagree; the lift fits no quadratic form")
    a11 = dot(l1, w1) / 2
    a22 = dot(l2, w2) / 2
    a12 = dot(l2, w1) / 2
    if not (a11 > 0 and a11 * a22 - a12 * a12 > 0):
        raise NotPositiveDefinite("pivot test failed")
    return QForm2(matrix=((a11, a12), (a12, a22)), basis=(l1, l2))


def qform_value(q: QForm2, x) -> Fraction:
    """Evaluate the form at a point given in lattice-basis coordinates."""
    x = vec(x)
    b1, b2 = q.basis
    det = b1[0] * b2[1] - b1[1] * b2[0]
    y1 = (x[0] * b2[1] - x[1] * b2[0]) / det
    y2 = (b1[0] * x[1] - b1[1] * x[0]) / det
    (a11, a12), (_, a22) = q.matrix
    return a11 * y1 * y1 + 2 * a12 * y1 * y2 + a22 * y2 * y2


def verify_lifting(g: Generatrissa, q: QForm2, c: TilingComplex) -> LiftReport:
    """Check tangency on a 5x5 window of tiles and convexity on all edges.

    Tangency: at every center ``k1*b1 + k2*b2`` with ``|ki| <= 2`` the lift
    value equals the form value and the tile gradient equals the form
    gradient.  Convexity: crossing any edge in the direction of the
    neighbor increases the slope along the crossing.
    """
    b1, b2 = q.basis
    (a11, a12), (_, a22) = q.matrix
    tangency = True
    for k1, k2 in product(range(-2, 3), repeat=2):
        lam = vadd(tuple(k1 * x for x in b1), tuple(k2 * x for x in b2))
        if center_value(g, lam) != qform_value(q, lam):
            tangency = False
            break
        grad = gradient_of(g, lam)
        # In pairing form: <b_i, grad> must match the i-th component of
        # twice A applied to (k1, k2).
        if (dot(b1, grad) != 2 * (a11 * k1 + a12 * k2)
                or dot(b2, grad) != 2 * (a12 * k1 + a22 * k2)):
            tangency = False
            break
    convexity = all(dot(w, delta) > 0 for delta, (w, _) in g.jumps.items())
    return LiftReport(tangency=tangency, convexity=convexity)
