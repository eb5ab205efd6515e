import itertools
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from kcramsey.densities import PairParams
from kcramsey.graph import Graph, GraphError, edge_id
from kcramsey.hypergraph import (Hyperedge, Hypergraph, Kind, build_hypergraph, clique_hyperedge,
                                 cycle_hyperedge, enum_cliques, enum_cycles, hypergraph_from_json,
                                 hypergraph_to_json, is_valid_hyperedge, underlying_graph)

from conftest import graphs


def brute_cliques(G, r):
    return {clique_hyperedge(S) for S in itertools.combinations(G.vertices(), r)
            if all(G.has_edge(a, b) for a, b in itertools.combinations(S, 2))}


def brute_cycles(G, ell):
    out = set()
    for S in itertools.combinations(G.vertices(), ell):
        for rest in itertools.permutations(S[1:]):
            cyc = (S[0],) + rest
            if all(G.has_edge(cyc[i], cyc[(i + 1) % ell]) for i in range(ell)):
                out.add(cycle_hyperedge(cyc))
    return out


@given(graphs(max_n=8), st.integers(3, 5))
def test_cliques_match_brute_force(G, r):
    found = enum_cliques(G, r)
    assert len(found) == len(set(found))
    assert set(found) == brute_cliques(G, r)


@given(graphs(max_n=7), st.integers(3, 6))
def test_cycles_match_brute_force(G, ell):
    found = enum_cycles(G, ell)
    assert len(found) == len(set(found))
    assert set(found) == brute_cycles(G, ell)
    assert all(is_valid_hyperedge(E, 3, ell) for E in found)


@pytest.mark.parametrize("n,r,ell", [(6, 4, 4), (8, 4, 5), (10, 4, 4)])
def test_complete_graph_counts(n, r, ell):
    H = build_hypergraph(Graph.complete(n), PairParams(r, ell))
    assert len(H.cliques()) == comb(n, r)
    assert len(H.cycles()) == comb(n, ell) * factorial(ell - 1) // 2
    assert H.num_hypervertices() == comb(n, 2)


def test_k10_sizes():
    H = build_hypergraph(Graph.complete(10), PairParams(4, 4))
    assert (len(H.cliques()), len(H.cycles()), H.num_hypervertices()) == (210, 630, 45)


def test_cycle_c5_and_k4():
    assert len(enum_cycles(Graph.cycle(5), 5)) == 1
    assert len(enum_cycles(Graph.complete(4), 4)) == 3
    assert len(enum_cycles(Graph.complete(4), 3)) == 4


def test_invalid_hyperedges():
    path = Hyperedge.of(Kind.CYCLE, [edge_id(0, 1), edge_id(1, 2), edge_id(2, 3), edge_id(0, 2)])
    assert not is_valid_hyperedge(path, 4, 4)
    two_triangles = Hyperedge.of(Kind.CYCLE, [edge_id(*p) for p in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]])
    assert not is_valid_hyperedge(two_triangles, 4, 6)
    assert is_valid_hyperedge(clique_hyperedge([2, 5, 7, 9]), 4, 4)
    with pytest.raises(GraphError):
        Hyperedge(Kind.CLIQUE, (3, 1))


def test_missing_host_edge_rejected():
    with pytest.raises(GraphError):
        Hypergraph(Graph.cycle(4), [clique_hyperedge([0, 1, 2])])


@given(graphs(min_n=4, max_n=7))
def test_json_round_trip_and_underlying(G):
    H = build_hypergraph(G, PairParams(4, 4))
    back = hypergraph_from_json(hypergraph_to_json(H))
    assert back == H and back.host == H.host
    U = underlying_graph(H)
    assert U.edge_ids() == frozenset(H.hypervertices)
    assert U.is_subgraph_of(G)


def test_relabel_and_removal():
    H = build_hypergraph(Graph.complete(5), PairParams(4, 4))
    perm = [4, 3, 2, 1, 0]
    assert H.relabel(perm) == H
    E = H.cliques()[0]
    assert E not in H.without(E) and len(H.without(E)) == len(H) - 1
    e = E.edges[0]
    assert all(e not in F.edge_set for F in H.without_hypervertex(e))
