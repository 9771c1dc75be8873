"""Closed-hypergraph combinatorics: audits, subgraph finding, matchings."""

from __future__ import annotations

import random

import pytest

from tilekit import hypercomb as hc

# Expected moment identity values for the two reference configurations.
FIVE_TEN_IDENTITIES = (
    ("sum_deg", 20, 20),
    ("sum_deg_sq", 40, 40),
    ("sum_excess", 0, 0),
    ("sum_excess_sq", 0, 0),
    ("degree4_count", 0, 0),
)
SIX_ELEVEN_IDENTITIES = (
    ("sum_deg", 24, 24),
    ("sum_deg_sq", 54, 54),
    ("sum_excess", 2, 2),
    ("sum_excess_sq", 2, 2),
    ("degree4_count", 0, 0),
)

# Diagonal matching induced by scheme case 1, per K5 vertex.
CASE1_MATCHING = {
    1: (((1, 2), (1, 5)), ((1, 3), (1, 4))),
    2: (((1, 2), (2, 3)), ((2, 4), (2, 5))),
    3: (((1, 3), (2, 3)), ((3, 4), (3, 5))),
    4: (((1, 4), (2, 4)), ((3, 4), (4, 5))),
    5: (((1, 5), (3, 5)), ((2, 5), (4, 5))),
}


def test_five_ten_reference():
    h = hc.five_ten()
    rep = hc.is_closed(h)
    assert rep.closed and not rep.empty
    assert len(h.edges) == 5 and len(h.vertices) == 10
    assert set(h.degrees().values()) == {2}
    audit = hc.moment_audit(h)
    assert audit.ok
    assert audit.identities == FIVE_TEN_IDENTITIES


def test_six_eleven_reference():
    h = hc.six_eleven()
    assert hc.is_closed(h).closed
    assert len(h.edges) == 6 and len(h.vertices) == 11
    degs = sorted(h.degrees().values())
    assert degs == [2] * 9 + [3, 3]
    apexes = sorted(v for v, d in h.degrees().items() if d == 3)
    assert apexes == ["s", "s'"]
    audit = hc.moment_audit(h)
    assert audit.ok
    assert audit.identities == SIX_ELEVEN_IDENTITIES


def test_closure_witnesses():
    empty = hc.hypergraph([])
    rep = hc.is_closed(empty)
    assert rep.closed and rep.empty

    disjoint = hc.hypergraph([[0, 1, 2, 3], [4, 5, 6, 7]])
    rep = hc.is_closed(disjoint)
    assert not rep.closed and rep.witness == ("intersection", 0, 1, 0)

    doubled = hc.hypergraph([[0, 1, 2, 3], [0, 1, 4, 5]])
    rep = hc.is_closed(doubled)
    assert rep.witness == ("intersection", 0, 1, 2)

    ft = hc.five_ten()
    torn = hc.Hypergraph4(ft.edges[1:])
    rep = hc.is_closed(torn)
    assert not rep.closed and rep.witness[0] == "degree" and rep.witness[2] == 1


def test_moment_audit_requires_closed():
    with pytest.raises(ValueError):
        hc.moment_audit(hc.hypergraph([[0, 1, 2, 3], [4, 5, 6, 7]]))


def test_degree_four_count_cells():
    assert hc.degree_four_count(6, 12) == 3
    assert hc.degree_four_count(7, 13) == 4
    assert hc.degree_four_count(8, 12) == 0
    assert hc.degree_four_count(5, 10) == 0
    # outside R <= V <= 2R
    assert hc.degree_four_count(6, 5) is None
    assert hc.degree_four_count(6, 13) is None
    # formula negative
    assert hc.degree_four_count(9, 11) is None


def test_exhaustive_enumeration_small():
    got = hc.all_closed(6)
    assert {r: len(v) for r, v in got.items()} == {1: 0, 2: 0, 3: 0, 4: 0, 5: 1, 6: 1}
    assert hc.are_isomorphic(got[5][0], hc.five_ten())
    assert hc.are_isomorphic(got[6][0], hc.six_eleven())
    for graphs in got.values():
        for g in graphs:
            assert hc.moment_audit(g).ok


def test_randomized_closed_instances():
    rng = random.Random(20260817)
    produced = 0
    for _ in range(40):
        for r in (5, 6, 8):
            g = hc.random_closed(rng, r)
            if g is None:
                continue
            produced += 1
            audit = hc.moment_audit(g)
            assert audit.ok
            assert audit.r <= audit.v <= 2 * audit.r
            assert audit.degree_bounds_ok
    assert produced >= 100
    # No closed hypergraph on seven hyperedges exists; the generator
    # exhausts its budget without finding one.
    assert all(hc.random_closed(rng, 7, budget=4000) is None for _ in range(5))


def _check_embedding(found: hc.FoundSubgraph, reference: hc.Hypergraph4):
    # The embedding must be a bijection carrying reference hyperedges onto
    # hyperedges of the found subgraph.
    emb = found.embedding
    assert len(set(emb.values())) == len(emb) == len(reference.vertices)
    mapped = {frozenset(emb[v] for v in e) for e in reference.edges}
    assert mapped == set(found.edges)


def test_find_on_references():
    f = hc.find_5_10_or_6_11(hc.five_ten())
    assert f.tag == "five_ten"
    _check_embedding(f, hc.five_ten())

    f = hc.find_5_10_or_6_11(hc.six_eleven())
    assert f.tag == "six_eleven"
    _check_embedding(f, hc.six_eleven())


def _six_eleven_plus(perms):
    # Closed extensions of the 6-11 graph: one extra hyperedge per
    # permutation, each picking one crossing vertex per apex-star edge,
    # all sharing one fresh vertex.
    extra = [frozenset({f"v{k}{p[k - 1]}" for k in (1, 2, 3)} | {"w"})
             for p in perms]
    return hc.Hypergraph4(hc.six_eleven().edges + tuple(extra))


def test_find_strips_composite_graphs():
    big8 = _six_eleven_plus([(1, 2, 3), (2, 3, 1)])
    assert hc.is_closed(big8).closed
    assert (len(big8.edges), len(big8.vertices)) == (8, 12)
    assert hc.moment_audit(big8).ok
    f = hc.find_5_10_or_6_11(big8)
    assert f.tag == "six_eleven"
    _check_embedding(f, hc.six_eleven())

    big9 = _six_eleven_plus([(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    assert hc.is_closed(big9).closed
    assert (len(big9.edges), len(big9.vertices)) == (9, 12)
    f = hc.find_5_10_or_6_11(big9)
    assert f.tag == "six_eleven"


def test_strip_to_minimal():
    big8 = _six_eleven_plus([(1, 2, 3), (2, 3, 1)])
    m = hc.strip_to_minimal(big8)
    assert len(m.edges) < 8
    assert hc.is_closed(m).closed
    assert hc.are_isomorphic(m, hc.six_eleven())
    # References are already minimal.
    assert set(hc.strip_to_minimal(hc.five_ten()).edges) == set(hc.five_ten().edges)
    assert set(hc.strip_to_minimal(hc.six_eleven()).edges) == set(hc.six_eleven().edges)


def test_find_rejects_degenerate_input():
    with pytest.raises(ValueError):
        hc.find_5_10_or_6_11(hc.hypergraph([]))
    with pytest.raises(ValueError):
        hc.find_5_10_or_6_11(hc.hypergraph([[0, 1, 2, 3], [4, 5, 6, 7]]))


def test_canonical_form():
    chain = hc.hypergraph([[0, 1, 2, 3], [0, 4, 5, 6], [1, 4, 7, 8]])
    fan = hc.hypergraph([[0, 1, 2, 3], [0, 4, 5, 6], [0, 7, 8, 9]])
    assert hc.canonical_form(chain) != hc.canonical_form(fan)
    relabeled = hc.hypergraph([["a", "b", "c", "d"], ["a", "x", "y", "z"],
                               ["b", "x", "p", "q"]])
    assert hc.canonical_form(chain) == hc.canonical_form(relabeled)
    assert hc.are_isomorphic(chain, relabeled)
    with pytest.raises(ValueError):
        hc.canonical_form(hc.Hypergraph4(tuple(
            frozenset({(i, j) for j in range(4)}) for i in range(9))))


def test_scheme_validation():
    with pytest.raises(ValueError):
        hc.PloughingScheme(((1, 2, 3, 4, 5),))  # misses edges
    with pytest.raises(ValueError):
        hc.PloughingScheme(((1, 2),))
    with pytest.raises(ValueError):
        hc.PloughingScheme(((1, 1, 2, 3, 1, 4, 2, 5, 4, 3, 5),))
    # A valid scheme passes.
    hc.PloughingScheme(hc.SCHEME_CASES[1])


def test_scheme_cases_and_classes():
    cases = hc.enumerate_k5_schemes()
    assert len(cases) == 8
    assert [len(c.cycles) for c in cases] == [1, 1, 1, 1, 2, 2, 2, 3]
    assert [c.cycles for c in cases] == [hc.SCHEME_CASES[n] for n in range(1, 9)]

    classes = hc.k5_scheme_classes()
    assert len(classes) == 7
    assert sum(1 for c in classes if len(c.cycles) == 1) == 3
    # Canonicalization is idempotent on class representatives.
    for c in classes:
        assert hc.canonical_scheme(c) == c.cycles
    # Cases 3 and 4 are the one redundant pair; all other case pairs are
    # inequivalent.
    for i in range(1, 9):
        for j in range(i + 1, 9):
            equal = hc.schemes_equivalent(cases[i - 1], cases[j - 1])
            assert equal == ((i, j) == (3, 4))
    # Every case belongs to an enumerated class.
    keys = {hc.canonical_scheme(c) for c in classes}
    for c in cases:
        assert hc.canonical_scheme(c) in keys


def test_scheme_to_matching_case1():
    m = hc.scheme_to_matching(hc.enumerate_k5_schemes()[0])
    assert dict(m.pairs) == CASE1_MATCHING


def test_matching_is_traversal_direction_invariant():
    for case in hc.enumerate_k5_schemes():
        flipped = hc.PloughingScheme(tuple(
            (cyc[0],) + tuple(reversed(cyc[1:])) for cyc in case.cycles))
        assert hc.scheme_to_matching(flipped) == hc.scheme_to_matching(case)


def test_matching_relabeling_equivariance():
    rng = random.Random(11)
    perm = list(hc.K5_VERTICES)
    for case in hc.enumerate_k5_schemes():
        rng.shuffle(perm)
        relabeled = hc.PloughingScheme(tuple(
            tuple(perm[v - 1] for v in cyc) for cyc in case.cycles))
        base = hc.scheme_to_matching(case)
        moved = hc.scheme_to_matching(relabeled)
        for v in hc.K5_VERTICES:
            image = tuple(sorted(
                tuple(sorted((tuple(sorted((perm[a - 1], perm[b - 1])))
                              for (a, b) in pair)))
                for pair in base.at(v)))
            assert moved.at(perm[v - 1]) == image


def test_sigma_matchings_orbit_census():
    sig = hc.enumerate_6_11_matchings()
    assert len(sig) == 19
    items = [s.item for s in sig]
    assert items[:18] == list(range(1, 19))
    assert items[18] is None
    extra = sig[18]
    assert (extra.sigma, extra.sigma_prime) == ((1, 2, 3), (2, 3, 1))
    census: dict = {}
    for s in sig:
        census[s.census] = census.get(s.census, 0) + 1
    assert census == {(1, 1): 1, (1, 2): 2, (1, 3): 1,
                      (2, 2): 9, (2, 3): 3, (3, 3): 3}
    # Documented representatives really are pairwise inequivalent.
    keys = {hc.sigma_orbit_key(*rep) for rep in hc.DOCUMENTED_SIGMA_ITEMS.values()}
    assert len(keys) == 18


def test_sigma_swap_reductions():
    sig = {s.item: s for s in hc.enumerate_6_11_matchings() if s.item}
    assert {s.item: s.reduces_to for s in sig.values() if s.reduces_to} == \
        {8: 6, 11: 7, 12: 10}
    for item, target in hc.SIGMA_REDUCTIONS.items():
        assert hc.swap_sigma(sig[item]) == hc.DOCUMENTED_SIGMA_ITEMS[target]


def test_hypergraph_dict_roundtrip():
    h = hc.five_ten()
    data = hc.to_dict(h)
    assert len(data["vertices"]) == 10 and len(data["edges"]) == 5
    back = hc.from_dict(data)
    assert hc.are_isomorphic(h, back)


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        hc.hypergraph([[0, 1, 2]])
    with pytest.raises(ValueError):
        hc.hypergraph([[0, 1, 2, 3], [3, 2, 1, 0]])
