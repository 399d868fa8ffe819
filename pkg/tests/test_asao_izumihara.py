import random

import pytest
from hypothesis import given, settings

from eulermag.asao_izumihara import (
    build_et,
    build_pair,
    direct_emh,
    emh_via_ai,
    emh_via_ai_all,
    verify_chain_isomorphism,
)
from eulermag.complexes import relative_homology, reduced_homology
from eulermag.graph import complete_graph, from_edge_list, path_graph, path_metric
from eulermag.homology import HomologyGroup

from conftest import graphs, random_connected_graph
from oracles import bf_distances, bf_emh, bf_et


def test_butterfly_et4_word_faces(bfly, bfly_dm):
    # every word over {1,2,3} whose trail 0-w-4 has length <= 4
    x = build_et(bfly, bfly_dm, 0, 4, 4)
    assert x.faces == {(1,), (2,), (3,), (1, 2), (1, 3), (2, 1), (2, 3), (3, 2), (1, 2, 3)}


def test_butterfly_et4_vertex_sets(bfly, bfly_dm):
    # forgetting the order recovers the seven printed faces
    x = build_et(bfly, bfly_dm, 0, 4, 4)
    shadow = {tuple(sorted(w)) for w in x.faces}
    assert shadow == {(1, 2, 3), (1, 2), (1, 3), (2, 3), (1,), (2,), (3,)}


def test_butterfly_et3(bfly, bfly_dm):
    x = build_et(bfly, bfly_dm, 0, 4, 3)
    assert x.faces == {(1, 2), (2, 3), (1,), (2,), (3,)}


def test_isolated_endpoints_give_empty_complex():
    g = from_edge_list(2, [])
    for ell in (3, 4, 7):
        assert build_et(g, path_metric(g), 0, 1, ell).is_empty


def test_equal_endpoints_give_empty_complex(bfly, bfly_dm):
    assert build_et(bfly, bfly_dm, 2, 2, 4).is_empty


def test_short_length_rejected(bfly, bfly_dm):
    with pytest.raises(ValueError, match=">= 3"):
        build_et(bfly, bfly_dm, 0, 4, 2)
    with pytest.raises(ValueError):
        build_pair(bfly, 0, 4, 2)


def test_butterfly_pair_relative_basis(bfly):
    pair = build_pair(bfly, 0, 4, 4)
    rel = pair.relative_faces()
    assert rel[2] == [(1, 2, 3)]
    assert rel[1] == [(1, 3), (2, 1), (3, 2)]
    assert 0 not in rel and -1 not in rel


def test_far_endpoints_give_empty_pair():
    g = path_graph(6)
    pair = build_pair(g, 0, 5, 4)
    assert pair.big.is_empty and pair.sub.is_empty


def test_complete_graph_pair():
    pair = build_pair(complete_graph(4), 0, 1, 3)
    assert pair.big.faces == {(2,), (3,), (2, 3), (3, 2)}
    assert pair.sub.faces == {(2,), (3,)}
    hs = emh_via_ai_all(pair)
    assert hs[2] == HomologyGroup(3, 2)


def test_butterfly_isomorphism_and_homology(bfly, bfly_dm):
    pair = build_pair(bfly, 0, 4, 4, bfly_dm)
    report = verify_chain_isomorphism(pair, bfly, bfly_dm)
    assert report.passed and report.sign == -1
    direct = direct_emh(bfly, bfly_dm, 0, 4, 4)
    assert [h.free_rank for h in direct] == [0, 0, 0, 2, 0]
    for k in range(2, 5):
        assert emh_via_ai(pair, bfly_dm, k) == direct[k]
        r = relative_homology((pair.big, pair.sub), k - 2)
        assert (r.free_rank, r.torsion) == (direct[k].free_rank, direct[k].torsion)


def test_degree_two_uses_reduced_homology_when_distance_is_ell():
    g = path_graph(4)
    dm = path_metric(g)
    pair = build_pair(g, 0, 3, 3, dm)
    assert pair.augmented and pair.sub.is_empty
    assert emh_via_ai(pair, dm, 2) == HomologyGroup(2, reduced_homology(pair.big, 0).free_rank)
    assert emh_via_ai(pair, dm, 2) == direct_emh(g, dm, 0, 3, 3)[2]


def test_degree_two_disconnected_big_complex():
    # antipodal vertices of a 6-cycle: the two half-cycles give two components
    g = from_edge_list(6, [(i, (i + 1) % 6) for i in range(6)])
    dm = path_metric(g)
    pair = build_pair(g, 0, 3, 3, dm)
    assert reduced_homology(pair.big, 0).free_rank == 1
    assert emh_via_ai(pair, dm, 2) == HomologyGroup(2, 1) == direct_emh(g, dm, 0, 3, 3)[2]


def test_low_degree_rejected(bfly, bfly_dm):
    with pytest.raises(ValueError):
        emh_via_ai(build_pair(bfly, 0, 4, 4), bfly_dm, 1)


def test_report_json(bfly):
    j = verify_chain_isomorphism(build_pair(bfly, 0, 4, 4), bfly).to_json()
    assert j["status"] == "PASS" and j["mismatches"] == []


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=6))
def test_et_matches_brute_force(g):
    dm = path_metric(g)
    d = bf_distances(g.n, g.edges)
    for a in range(g.n):
        for b in range(g.n):
            for ell in (3, 4, 5):
                assert build_et(g, dm, a, b, ell).faces == bf_et(g.n, d, a, b, ell)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=6))
def test_pair_invariants(g):
    dm = path_metric(g)
    for ell in (3, 4):
        for a in range(g.n):
            for b in range(g.n):
                pair = build_pair(g, a, b, ell, dm)
                assert pair.sub.faces <= pair.big.faces
                for w in pair.big.faces:
                    assert a not in w and b not in w
                    assert dm[a][w[0]] + sum(dm[x][y] for x, y in zip(w, w[1:])) + dm[w[-1]][b] <= ell


def test_isomorphism_on_random_graphs():
    rng = random.Random(3)
    for _ in range(25):
        g = random_connected_graph(rng, rng.randint(3, 6))
        dm = path_metric(g)
        for ell in (3, 4):
            for a in range(g.n):
                for b in range(g.n):
                    pair = build_pair(g, a, b, ell, dm)
                    assert verify_chain_isomorphism(pair, g, dm).passed


def test_homology_matches_independent_oracle():
    rng = random.Random(8)
    for _ in range(15):
        g = random_connected_graph(rng, rng.randint(3, 5))
        for ell in (3, 4):
            for a in range(g.n):
                for b in range(g.n):
                    if a == b:
                        continue
                    ref = bf_emh(g.n, g.edges, ell, (a, b))
                    hs = emh_via_ai_all(build_pair(g, a, b, ell))
                    for h in hs:
                        assert (h.free_rank, list(h.torsion)) == (ref[h.degree][0], ref[h.degree][1])
