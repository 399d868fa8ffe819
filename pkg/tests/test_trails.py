import pytest
from hypothesis import given, settings

from eulermag.graph import complete_graph, from_edge_list, path_graph, path_metric
from eulermag.homology import DimensionError
from eulermag.trails import boundary_matrix, build_emc, emc_basis, emh, enumerate_trails

from conftest import graphs
from oracles import bf_boundary, bf_distances, bf_emh, bf_trails


def test_butterfly_two_step_trails(bfly, bfly_dm):
    trails = enumerate_trails(bfly, bfly_dm, 2, 2)
    assert len(trails) == 20
    assert (0, 1, 2) in trails and (0, 2, 3) in trails
    assert all(bfly_dm(x, y) == 1 and bfly_dm(y, z) == 1 for x, y, z in trails)


def test_butterfly_one_step_trails(bfly, bfly_dm):
    trails = enumerate_trails(bfly, bfly_dm, 1, 2)
    assert trails == [(0, 3), (0, 4), (1, 3), (1, 4), (3, 0), (3, 1), (4, 0), (4, 1)]


def test_butterfly_complex_shape(bfly):
    c = build_emc(bfly, 2)
    assert c.gradings == [0, 8, 20]
    assert c.check_d_squared()
    h = emh(bfly, 2)
    assert [x.free_rank for x in h] == [0, 0, 12]
    assert all(x.is_free for x in h)


def test_butterfly_boundary_columns(bfly, bfly_dm):
    b2 = emc_basis(bfly, bfly_dm, 2, 2)
    b1 = emc_basis(bfly, bfly_dm, 1, 2)
    d = boundary_matrix(b2, b1, bfly_dm)
    assert d.column(b2.index[(0, 1, 2)]) == {}
    assert d.column(b2.index[(0, 2, 3)]) == {b1.index[(0, 3)]: -1}


def test_degree_one_boundary_is_empty_map(bfly, bfly_dm):
    b1 = emc_basis(bfly, bfly_dm, 1, 2)
    b0 = emc_basis(bfly, bfly_dm, 0, 2)
    d = boundary_matrix(b1, b0, bfly_dm)
    assert d.shape == (0, 8)


def test_mismatched_bases_rejected(bfly, bfly_dm):
    with pytest.raises(DimensionError):
        boundary_matrix(emc_basis(bfly, bfly_dm, 2, 2), emc_basis(bfly, bfly_dm, 1, 3), bfly_dm)


def test_k_above_ell_is_empty(bfly, bfly_dm):
    assert enumerate_trails(bfly, bfly_dm, 3, 2) == []


def test_zero_trails():
    g = complete_graph(3)
    dm = path_metric(g)
    assert enumerate_trails(g, dm, 0, 0) == [(0,), (1,), (2,)]
    assert enumerate_trails(g, dm, 0, 1) == []
    assert [h.free_rank for h in emh(g, 0)] == [3]


def test_edgeless_graph_has_no_positive_trails():
    g = from_edge_list(4, [])
    dm = path_metric(g)
    for ell in range(1, 4):
        for k in range(ell + 1):
            assert enumerate_trails(g, dm, k, ell) == []
        assert all(h.is_trivial for h in emh(g, ell))


def test_equal_endpoints_give_nothing(bfly, bfly_dm):
    assert enumerate_trails(bfly, bfly_dm, 2, 2, (0, 0)) == []


def test_path_graph_end_to_end_summand_is_acyclic():
    # 0-1-2-3: one 3-trail, two 2-trails, one 1-trail, and every face survives
    g = path_graph(4)
    assert build_emc(g, 3, (0, 3)).gradings == [0, 1, 2, 1]
    assert all(h.is_trivial for h in emh(g, 3, (0, 3)))


def test_merged_torsion_has_no_unit_factors():
    from eulermag.homology import HomologyGroup
    from eulermag.trails import merge_groups

    m = merge_groups(HomologyGroup(1, 0, (2,)), HomologyGroup(1, 1, (3,)))
    assert m == HomologyGroup(1, 1, (6,))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_trails_match_brute_force(g):
    dm = path_metric(g)
    d = bf_distances(g.n, g.edges)
    for ell in range(0, 5):
        for k in range(0, min(ell, 4) + 1):
            assert enumerate_trails(g, dm, k, ell) == bf_trails(g.n, d, k, ell)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=6))
def test_endpoint_trails_match_brute_force(g):
    dm = path_metric(g)
    d = bf_distances(g.n, g.edges)
    for ell in range(1, 5):
        for k in range(1, ell + 1):
            assert enumerate_trails(g, dm, k, ell, (0, 1)) == bf_trails(g.n, d, k, ell, (0, 1))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_boundary_matches_definition(g):
    dm = path_metric(g)
    d = bf_distances(g.n, g.edges)
    for ell in (2, 3, 4):
        for k in range(1, ell + 1):
            rows, cols, m = bf_boundary(g.n, d, k, ell)
            got = boundary_matrix(emc_basis(g, dm, k, ell), emc_basis(g, dm, k - 1, ell), dm)
            assert got.shape == (len(rows), len(cols))
            if rows and cols:
                assert got.to_dense() == m


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_differential_squares_to_zero(g):
    for ell in range(1, 6):
        assert build_emc(g, ell).check_d_squared()


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6))
def test_generators_partition_by_endpoints(g):
    dm = path_metric(g)
    for ell in (2, 3, 4):
        for k in range(1, ell + 1):
            whole = enumerate_trails(g, dm, k, ell)
            parts = []
            for a in range(g.n):
                for b in range(g.n):
                    parts += enumerate_trails(g, dm, k, ell, (a, b))
            assert sorted(parts) == whole


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=5))
def test_homology_matches_independent_smith_form(g):
    for ell in (2, 3, 4):
        ref = bf_emh(g.n, g.edges, ell)
        got = emh(g, ell)
        for h in got:
            rank, torsion = ref[h.degree]
            assert h.free_rank == rank
            assert list(h.torsion) == sorted(torsion)


def test_summands_add_up_to_whole_complex():
    g = from_edge_list(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    from eulermag.homology import all_homology

    whole = all_homology(build_emc(g, 4))
    split = emh(g, 4)
    assert [(h.free_rank, h.torsion) for h in whole] == [(h.free_rank, h.torsion) for h in split]
