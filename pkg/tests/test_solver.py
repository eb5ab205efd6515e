import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kcramsey.densities import PairParams
from kcramsey.graph import Graph
from kcramsey.hypergraph import Hyperedge, Hypergraph, Kind, build_hypergraph, underlying_graph
from kcramsey.solver import (BudgetExceeded, Status, arrow_graph, arrow_hyper, find_crit, is_star_critical,
                             minimality_probe, minimize, ramsey_crit_full_check, witness_is_valid)

HOST = Graph.complete(8)  # 28 edge ids, enough label space for random instances


def brute_arrows(H):
    vs = H.hypervertices
    for bits_ in itertools.product((1, 2), repeat=len(vs)):
        if witness_is_valid(H, dict(zip(vs, bits_))):
            return False
    return True


@st.composite
def hypergraphs(draw, max_vertices=12, max_edges=24):
    nv = draw(st.integers(1, max_vertices))
    m = draw(st.integers(1, max_edges))
    hes = []
    for _ in range(m):
        kind = draw(st.sampled_from([Kind.CLIQUE, Kind.CYCLE]))
        members = draw(st.lists(st.integers(0, nv - 1), min_size=1, max_size=4, unique=True))
        hes.append(Hyperedge.of(kind, members))
    return Hypergraph(HOST, hes, check=False)


@given(hypergraphs())
def test_engines_agree_with_enumeration(H):
    truth = brute_arrows(H)
    for engine in ("compiled", "static", "python"):
        dec = arrow_hyper(H, engine=engine)
        assert dec.is_ramsey == truth
        if not truth:
            assert witness_is_valid(H, dec.witness.assignment)


@given(hypergraphs(max_vertices=10))
def test_core_is_ramsey(H):
    dec = arrow_hyper(H)
    if dec.is_ramsey:
        assert brute_arrows(H.with_hyperedges(dec.core))


@given(hypergraphs(max_vertices=10), st.data())
def test_fixed_colours_restrict_search(H, data):
    vs = list(H.hypervertices)
    chosen = data.draw(st.lists(st.sampled_from(vs), unique=True, max_size=3))
    fixed = {e: data.draw(st.sampled_from([1, 2])) for e in chosen}
    free = [e for e in vs if e not in fixed]
    truth = not any(witness_is_valid(H, {**fixed, **dict(zip(free, c))})
                    for c in itertools.product((1, 2), repeat=len(free)))
    for engine in ("compiled", "python"):
        dec = arrow_hyper(H, fixed=fixed, engine=engine)
        assert dec.is_ramsey == truth
        if not truth:
            assert all(dec.witness.assignment[e] == c for e, c in fixed.items())


@given(hypergraphs(max_vertices=10), hypergraphs(max_vertices=10))
def test_monotone_under_adding_hyperedges(H1, H2):
    union = H1.with_hyperedges(H1.hyperedges + H2.hyperedges)
    if arrow_hyper(H1).is_ramsey:
        assert arrow_hyper(union).is_ramsey


@settings(max_examples=25)
@given(hypergraphs(max_vertices=9, max_edges=30), st.integers(0, 3))
def test_minimize_gives_minimal_ramsey(H, seed):
    if not arrow_hyper(H).is_ramsey:
        return
    M = minimize(H, seed=seed)
    assert M.issubset(H)
    assert minimality_probe(M) == []


def test_budget_is_reported():
    H = build_hypergraph(Graph.complete(10), PairParams(4, 4))
    dec = arrow_hyper(H, budget=1000)
    assert dec.status is Status.BUDGET_EXCEEDED and dec.is_ramsey is None
    with pytest.raises(BudgetExceeded):
        minimize(H, budget=1000)


def test_unknown_engine():
    with pytest.raises(ValueError):
        arrow_hyper(build_hypergraph(Graph.complete(4), PairParams(4, 4)), engine="sat")


@pytest.mark.parametrize("r,ell,k", [(3, 3, 6), (3, 4, 7), (3, 5, 9)])
def test_small_ramsey_numbers(r, ell, k):
    pp = PairParams(r, ell)
    below = arrow_graph(Graph.complete(k - 1), pp)
    assert below.is_ramsey is False
    assert witness_is_valid(build_hypergraph(Graph.complete(k - 1), pp), below.witness.assignment)
    assert arrow_graph(Graph.complete(k), pp).is_ramsey


def test_arrow_graph_witness_covers_every_edge(pp44):
    G = Graph.complete(6)
    dec = arrow_graph(G, pp44)
    assert set(dec.witness.assignment) == set(G.edge_ids())


def test_k6_triangle_critical_structure():
    pp = PairParams(3, 3)
    H = find_crit(Graph.complete(6), pp, seed=1)
    assert H is not None and is_star_critical(H)
    assert ramsey_crit_full_check(H)
    assert minimality_probe(H) == []
    assert underlying_graph(H).min_degree() >= 3


def test_find_crit_none_when_not_ramsey(pp44):
    assert find_crit(Graph.complete(8), pp44) is None


def test_single_cycle_not_star_critical():
    H = build_hypergraph(Graph.cycle(4), PairParams(4, 4))
    cert = is_star_critical(H)
    assert not cert and cert.unmatched is not None
