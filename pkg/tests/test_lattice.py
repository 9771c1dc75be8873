"""Tests for Voronoi cells, facet vectors, and belts."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tilekit import lattice, ratpoly
from tilekit.lattice import (
    FacetNotCentrallySymmetric,
    belts_of,
    dv_cell,
    dv_cell_with_vectors,
    gram_norm,
    relevant_vectors,
    venkov_check,
)

import oracles

F = Fraction

Z2 = [[1, 0], [0, 1]]
Z3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
A2 = [[2, 1], [1, 2]]
FCC = [[2, 0, 1], [0, 2, 1], [1, 1, 2]]
BCC = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]


# --- oracle cross-checks come first: the counts frozen below depend on them.


def test_relevant_vectors_match_bruteforce_oracle():
    for gram in (Z2, A2, Z3, FCC, BCC):
        got = [tuple(int(x) for x in v) for v in relevant_vectors(gram)]
        assert got == [
            tuple(int(x) for x in v)
            for v in oracles.relevant_vectors_bruteforce(gram, radius=2)
        ]


def test_relevant_vectors_random_grams_match_oracle():
    rng = random.Random(4242)
    for d in (2, 3):
        for _ in range(6):
            a = [
                [rng.choice([-1, 0, 1]) if i != j else 1 for j in range(d)]
                for i in range(d)
            ]
            gram = [
                [sum(a[k][i] * a[k][j] for k in range(d)) for j in range(d)]
                for i in range(d)
            ]
            try:
                got = [tuple(int(x) for x in v) for v in relevant_vectors(gram)]
            except ValueError:
                continue  # sampled a singular matrix
            want = [
                tuple(int(x) for x in v)
                for v in oracles.relevant_vectors_bruteforce(gram, radius=3)
            ]
            assert got == want


# --- frozen shapes.


def test_square_lattice_cell():
    rel = relevant_vectors(Z2)
    assert rel == ((F(-1), F(0)), (F(0), F(-1)), (F(0), F(1)), (F(1), F(0)))
    cell = dv_cell(Z2)
    assert len(cell.facets) == 4
    assert cell.vertices == (
        (F(-1, 2), F(-1, 2)),
        (F(-1, 2), F(1, 2)),
        (F(1, 2), F(-1, 2)),
        (F(1, 2), F(1, 2)),
    )


def test_hexagonal_lattice_cell():
    rel = relevant_vectors(A2)
    assert set(tuple(int(x) for x in v) for v in rel) == {
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
        (1, -1),
        (-1, 1),
    }
    cell = dv_cell(A2)
    assert len(cell.facets) == 6
    assert len(cell.vertices) == 6


def test_cubic_lattice_cell():
    cell = dv_cell(Z3)
    assert len(cell.facets) == 6
    assert len(cell.vertices) == 8
    assert belts_of(cell) and sorted(len(b) for b in belts_of(cell)) == [4, 4, 4]


def test_face_centered_cell_is_rhombic_dodecahedron():
    cell = dv_cell(FCC)
    fl = ratpoly.face_lattice(cell)
    assert fl.f_vector() == (14, 24, 12)
    lengths = sorted(len(b) for b in belts_of(cell))
    assert lengths == [6, 6, 6, 6]


def test_body_centered_cell_is_truncated_octahedron():
    cell = dv_cell(BCC)
    fl = ratpoly.face_lattice(cell)
    assert fl.f_vector() == (24, 36, 14)
    lengths = sorted(len(b) for b in belts_of(cell))
    assert lengths == [6, 6, 6, 6, 6, 6]


def test_venkov_check_suite():
    for gram in (Z2, Z3, A2, FCC, BCC):
        report = venkov_check(gram)
        assert report.passed
        assert report.centrally_symmetric
        assert report.facets_centrally_symmetric
        assert all(l in (4, 6) for l in report.belt_lengths)


def test_venkov_facet_counts():
    assert venkov_check(Z2).facet_count == 4
    assert venkov_check(Z3).facet_count == 6
    assert venkov_check(A2).facet_count == 6
    assert venkov_check(FCC).facet_count == 12
    assert venkov_check(BCC).facet_count == 14


def test_planar_cells_have_one_belt():
    assert belts_of(dv_cell(Z2)) == [[0, 1, 2, 3]]
    assert len(belts_of(dv_cell(A2))[0]) == 6


def test_facet_vector_correspondence():
    for gram in (Z2, A2, FCC, BCC):
        cell, vectors = dv_cell_with_vectors(gram)
        assert len(vectors) == len(cell.facets)
        g = [[F(x) for x in row] for row in gram]
        for (n, b), v in zip(cell.facets, vectors):
            # Facet plane is {x : v.G.x = |v|^2/2}; the midpoint v/2 lies on it.
            gv = tuple(sum(g[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))
            mid_val = sum(gv[i] * v[i] / 2 for i in range(len(v)))
            assert mid_val == gram_norm(gram, v) / 2
            scale = next(F(n[i]) / gv[i] for i in range(len(v)) if gv[i] != 0)
            assert scale > 0
            assert all(F(n[i]) == scale * gv[i] for i in range(len(v)))
            assert b == scale * gram_norm(gram, v) / 2


def test_belts_reject_prism_with_triangle_facets():
    prism = ratpoly.from_vertices(
        [
            (F(0), F(0), F(0)),
            (F(1), F(0), F(0)),
            (F(0), F(1), F(0)),
            (F(0), F(0), F(1)),
            (F(1), F(0), F(1)),
            (F(0), F(1), F(1)),
        ]
    )
    with pytest.raises(FacetNotCentrallySymmetric):
        belts_of(prism)


def test_gram_validation():
    with pytest.raises(ValueError):
        relevant_vectors([[1, 2], [3, 4]])  # not symmetric
    with pytest.raises(ValueError):
        relevant_vectors([[1, 2], [2, 1]])  # not positive definite
    with pytest.raises(ValueError):
        relevant_vectors([[0, 0], [0, 1]])


def test_fractional_gram():
    gram = [[F(1, 2), 0], [0, F(1, 3)]]
    cell = dv_cell(gram)
    assert cell.vertices == (
        (F(-1, 2), F(-1, 2)),
        (F(-1, 2), F(1, 2)),
        (F(1, 2), F(-1, 2)),
        (F(1, 2), F(1, 2)),
    )


def test_facet_count_bound_random_positive_definite():
    rng = random.Random(171)
    for d in (2, 3, 4):
        for _ in range(4):
            a = [
                [rng.choice([-1, 0, 1]) if i != j else rng.choice([1, 2]) for j in range(d)]
                for i in range(d)
            ]
            gram = [
                [sum(a[k][i] * a[k][j] for k in range(d)) for j in range(d)]
                for i in range(d)
            ]
            try:
                rel = relevant_vectors(gram)
            except ValueError:
                continue  # sampled a singular matrix
            assert len(rel) <= 2 * (2**d - 1)
            assert len(dv_cell(gram).facets) == len(rel)


def test_gram_json_round_trip():
    obj = lattice.gram_to_json([[F(1, 2), 0], [0, 2]])
    assert lattice.gram_from_json(obj) == [[F(1, 2), F(0)], [F(0), F(2)]]
