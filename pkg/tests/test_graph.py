import itertools
import random

import pytest
from hypothesis import given, strategies as st

from kcramsey.graph import (EdgeLabelling, Graph, GraphError, PreconditionError, anchored_canonical_code,
                            are_isomorphic, canonical_code, canonical_order, edge_from_id, edge_id,
                            format_graph, parse_graph, partition_AB, subgraph_intersection,
                            subgraph_union)

from conftest import graphs


def brute_iso(G, H):
    if G.num_vertices() != H.num_vertices() or G.num_edges() != H.num_edges():
        return False
    gv, hv = G.vertices(), H.vertices()
    target = {frozenset(e) for e in H.edges()}
    for img in itertools.permutations(hv):
        m = dict(zip(gv, img))
        if {frozenset((m[u], m[v])) for u, v in G.edges()} == target:
            return True
    return False


def test_edge_ids_are_colex():
    ids = [edge_id(u, v) for v in range(6) for u in range(v)]
    assert ids == list(range(15))
    assert all(edge_from_id(edge_id(u, v)) == (u, v) for v in range(9) for u in range(v))
    assert edge_id(3, 1) == edge_id(1, 3)


def test_basic_counts():
    K5 = Graph.complete(5)
    assert K5.num_edges() == 10 and K5.min_degree() == 4
    C6 = Graph.cycle(6)
    assert C6.num_edges() == 6 and all(C6.degree(v) == 2 for v in C6.vertices())


def test_immutable():
    G = Graph.complete(3)
    with pytest.raises(AttributeError):
        G.n = 5


def test_rejects_bad_rows():
    with pytest.raises(GraphError):
        Graph(2, [0b10, 0])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_code_invariant_under_relabelling(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    assert canonical_code(G.relabel(perm)) == canonical_code(G)


@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_code_matches_brute_isomorphism(G, H):
    assert (canonical_code(G) == canonical_code(H)) == brute_iso(G, H)


def test_c5_relabelled_is_isomorphic():
    C5 = Graph.cycle(5)
    perm = list(range(5))
    random.Random(0).shuffle(perm)
    assert are_isomorphic(C5, C5.relabel(perm))
    assert not are_isomorphic(C5, Graph.path(5))


@given(graphs(max_n=7))
def test_canonical_order_reproduces_code(G):
    order = canonical_order(G)
    assert sorted(order) == G.vertices()
    pos = {v: i for i, v in enumerate(order)}
    H = G.relabel([pos.get(v, 0) for v in range(G.n)])
    assert canonical_code(H) == canonical_code(G)


def test_anchored_code_respects_anchor():
    K4 = Graph.complete(4)
    assert anchored_canonical_code(K4, [0]) == anchored_canonical_code(K4.relabel([0, 2, 3, 1]), [0])
    P3 = Graph.path(3)
    # end vs middle vertex of a path are different anchors
    assert anchored_canonical_code(P3, [0]) != anchored_canonical_code(P3, [1])


@given(graphs(max_n=7))
def test_text_round_trip(G):
    G = Graph.from_edges(G.n, G.edges())
    assert parse_graph(format_graph(G)) == G


@pytest.mark.parametrize("text", ["", "3\n", "2 1\n0 0\n", "2 2\n0 1\n", "3 2\n0 1\n0 1\n", "2 1\n1 0\n"])
def test_parse_errors(text):
    with pytest.raises(GraphError):
        parse_graph(text)


@given(graphs(max_n=7), graphs(max_n=7))
def test_union_intersection_counts(F1, F2):
    I = subgraph_intersection(F1, F2)
    U = subgraph_union(F1, F2)
    assert I.num_vertices() + U.num_vertices() == F1.num_vertices() + F2.num_vertices()
    assert I.num_edges() + U.num_edges() == F1.num_edges() + F2.num_edges()


def test_partition_ab():
    G = Graph.complete(5)
    part = partition_AB(G, 4)
    assert part.A == frozenset(range(5)) and not part.B
    with pytest.raises(PreconditionError):
        partition_AB(Graph.cycle(5), 3)


def test_edge_labelling_is_bijection():
    lab = EdgeLabelling({edge_id(0, 1): 2, edge_id(1, 2): 1})
    assert lab.in_order() == [edge_id(1, 2), edge_id(0, 1)]
    with pytest.raises(ValueError):
        EdgeLabelling({0: 1, 1: 1})
