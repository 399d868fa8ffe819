import random
from math import factorial

import pytest

from eulermag.complexes import all_reduced_homology
from eulermag.graph import from_edge_list, path_metric
from eulermag.injective_words import (
    build_inj,
    build_inj_filtered,
    count_derangements,
    filtration_relative_homology,
    relative_basis_by_endpoints,
    verify_bjorner_wachs,
    verify_filtration_quotient,
)
from eulermag.trails import enumerate_trails

from conftest import random_connected_graph, random_graph
from oracles import bf_emh, derangements_recurrence


def test_small_word_complexes():
    assert build_inj(1).faces == {(0,)}
    assert build_inj(2).faces == {(0,), (1,), (0, 1), (1, 0)}
    x = build_inj(3)
    assert len(x) == 15
    assert len(x.facets) == 6


@pytest.mark.parametrize("n", range(1, 7))
def test_face_count(n):
    # words with t letters: n! / (n - t)!
    assert len(build_inj(n)) == sum(factorial(n) // factorial(n - t) for t in range(1, n + 1))


def test_cap_bounds_word_length():
    x = build_inj(4, 2)
    assert x.dim == 1 and len(x) == 4 + 12
    with pytest.raises(ValueError):
        build_inj(3, 4)
    with pytest.raises(ValueError):
        build_inj(0)


@pytest.mark.parametrize("n", range(0, 9))
def test_derangements(n):
    assert count_derangements(n) == derangements_recurrence(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_full_word_complex_is_wedge_of_derangement_spheres(n):
    report = verify_bjorner_wachs(n)
    assert report["status"] == "PASS"
    groups = all_reduced_homology(build_inj(n))
    assert groups[-1].degree == n - 1
    assert groups[-1].free_rank == derangements_recurrence(n)
    assert all(g.is_trivial for g in groups[:-1])


def test_cap_enforced():
    with pytest.raises(ValueError, match="cap"):
        verify_bjorner_wachs(7, cap=6)


def test_filtered_examples(bfly, bfly_dm):
    x = build_inj_filtered(bfly, 2, bfly_dm)
    assert (0, 1, 2) in x
    assert (0, 3, 4) not in x  # 2 + 1 = 3 > 2
    assert (0, 3) in x and (0, 3, 2) not in x


def test_filtration_is_nested_and_exhausts():
    g = from_edge_list(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    dm = path_metric(g)
    prev = build_inj_filtered(g, 0, dm)
    assert prev.faces == {(v,) for v in range(5)}
    for ell in range(1, 12):
        cur = build_inj_filtered(g, ell, dm)
        assert prev.faces <= cur.faces
        prev = cur
    assert prev == build_inj(5)


def test_disconnected_graph_words_stay_in_components():
    g = from_edge_list(4, [(0, 1), (2, 3)])
    x = build_inj_filtered(g, 5, path_metric(g))
    assert all({w[0], w[-1]} <= {0, 1} or {w[0], w[-1]} <= {2, 3} for w in x.faces)
    assert x.facets == [(0, 1), (1, 0), (2, 3), (3, 2)]


def test_relative_generators_are_trails(bfly, bfly_dm):
    # new words at filtration step ell are exactly the trails of length ell
    for ell in (1, 2, 3):
        basis = relative_basis_by_endpoints(bfly, ell, bfly_dm)
        words = sorted(w for ws in basis.values() for w in ws)
        trails = sorted(t for k in range(1, ell + 1) for t in enumerate_trails(bfly, bfly_dm, k, ell))
        assert words == trails


def test_filtration_quotient_butterfly(bfly):
    assert [h.free_rank for h in filtration_relative_homology(bfly, 2)] == [0, 0, 12]
    report = verify_filtration_quotient(bfly, 4)
    assert report["status"] == "PASS"


def test_filtration_quotient_random_graphs():
    rng = random.Random(21)
    for _ in range(12):
        g = random_connected_graph(rng, rng.randint(3, 6))
        for ell in (3, 4):
            assert verify_filtration_quotient(g, ell)["status"] == "PASS"


def test_quotient_against_independent_oracle():
    rng = random.Random(4)
    for _ in range(8):
        g = random_graph(rng, rng.randint(2, 5))
        for ell in (1, 2, 3):
            ref = bf_emh(g.n, g.edges, ell)
            got = filtration_relative_homology(g, ell)
            assert [(h.free_rank, list(h.torsion)) for h in got] == [ref[k] for k in range(ell + 1)]


def test_quotient_needs_length_three(bfly):
    with pytest.raises(ValueError):
        verify_filtration_quotient(bfly, 2)
