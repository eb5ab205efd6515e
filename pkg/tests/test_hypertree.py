import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kcramsey.densities import PairParams, lam
from kcramsey.graph import EdgeLabelling, Graph, GraphError, PreconditionError, canonical_code, edge_id
from kcramsey.hypergraph import Hypergraph, build_hypergraph, clique_hyperedge, cycle_hyperedge
from kcramsey.hypertree import (Flower, FingerprintTag, LemmaViolation, RestrictionMode, StepKind, StopReason,
                                audit_flower_step, audit_trace, check_trace, classify_fingerprint,
                                extend_labelling, hyperedge_key, hypertree_batch, hypertree_run,
                                initial_labelling, restricted_hypergraph, step_budget)

E0 = clique_hyperedge([0, 1, 2, 3])


def fixture(n, hes):
    host = Graph.from_edges(n, sorted({p for E in hes for p in E.pairs()}))
    return Hypergraph(host, hes)


# a cycle through edge 01 whose three new edges carry disjoint K4 petals
PERFECT = [E0, cycle_hyperedge([0, 1, 4, 5]), clique_hyperedge([1, 4, 6, 7]),
           clique_hyperedge([4, 5, 8, 9]), clique_hyperedge([5, 0, 10, 11])]
# two petals share vertex 6
SHARED = [E0, cycle_hyperedge([0, 1, 4, 5]), clique_hyperedge([1, 4, 6, 7]),
          clique_hyperedge([4, 5, 6, 8]), clique_hyperedge([5, 0, 9, 10])]
# the cycle meets the seed clique in a two-edge path
PATH = [E0, cycle_hyperedge([0, 1, 2, 4]), clique_hyperedge([2, 4, 5, 6]), clique_hyperedge([4, 0, 7, 8])]


@pytest.mark.parametrize("n,expected", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (1024, 10), (1025, 11)])
def test_step_budget(n, expected):
    assert step_budget(n) == expected == (math.ceil(math.log2(n)) if n > 1 else 0)


def test_initial_labelling_is_lexicographic():
    sigma = initial_labelling(clique_hyperedge([2, 5, 7, 9]))
    assert [sigma[edge_id(u, v)] for u, v in [(2, 5), (2, 7), (2, 9), (5, 7), (5, 9), (7, 9)]] == list(range(1, 7))


@given(st.randoms(use_true_random=False))
def test_extend_labelling_is_canonical(rnd):
    G_prev = Graph.complete(4)
    sigma = initial_labelling(E0)
    G_new = Graph.from_edges(8, G_prev.edges() + [(0, 4), (4, 5), (5, 1), (5, 6), (6, 7)])
    lab = extend_labelling(sigma, G_prev, G_new)
    assert sorted(lab.as_dict().values()) == list(range(1, 12))
    # relabel the new vertices only: the label sequence of new edges is unchanged up to the map
    perm = list(range(4)) + rnd.sample(range(4, 8), 4)
    lab2 = extend_labelling(sigma, G_prev, G_new.relabel(perm))
    mapped = {edge_id(perm[u], perm[v]): lab[edge_id(u, v)] for u, v in G_new.edges()}
    assert lab2.as_dict() == mapped


def test_extend_labelling_rejects_bad_inputs():
    sigma = initial_labelling(E0)
    with pytest.raises(GraphError):
        extend_labelling(sigma, Graph.complete(5), Graph.complete(6))
    with pytest.raises(GraphError):
        extend_labelling(sigma, Graph.complete(4), Graph.cycle(4))


def test_hyperedge_order_prefers_kind_then_labels():
    sigma = initial_labelling(E0)
    K = clique_hyperedge([0, 1, 4, 5])
    C = cycle_hyperedge([0, 1, 4, 5])
    assert hyperedge_key(K, sigma) < hyperedge_key(C, sigma)
    assert hyperedge_key(clique_hyperedge([0, 1, 4, 5]), sigma) < hyperedge_key(clique_hyperedge([2, 3, 4, 5]), sigma)


def test_flower_validation():
    C = cycle_hyperedge([0, 1, 4, 5])
    with pytest.raises(GraphError):
        Flower(C, ((edge_id(1, 4), clique_hyperedge([0, 1, 4, 6])),), edge_id(0, 1))
    with pytest.raises(GraphError):
        Flower(clique_hyperedge([0, 1, 2, 3]), (), 0)


def test_perfect_flower_keeps_lambda(pp44):
    tr = hypertree_run(fixture(12, PERFECT), pp44, n=2, check=False)
    step = tr.steps[1]
    assert step.kind is StepKind.FLOWER and step.new_vertices == 8
    assert tr.lambdas == [Fraction(4, 3), Fraction(4, 3)] and not tr.D_T
    audit = audit_flower_step(tr.steps[0], step, pp44)
    assert audit.ok and audit.A0 == audit.t == 3 and audit.delta == 0
    assert check_trace(tr) == [] and audit_trace(tr) == []


@pytest.mark.parametrize("hes,new", [(SHARED, 7), (PATH, 5)])
def test_degenerate_flowers_lower_lambda(pp44, hes, new):
    tr = hypertree_run(fixture(12, hes), pp44, n=2, check=False)
    step = tr.steps[1]
    assert step.kind is StepKind.FLOWER and step.new_vertices == new
    assert tr.D_T == {1} and tr.delta_obs > 0
    audit = audit_flower_step(tr.steps[0], step, pp44)
    assert audit.ok and audit.delta < 0
    assert audit.delta == lam(step.graph, pp44) - lam(tr.steps[0].graph, pp44)
    assert check_trace(tr) == [] and audit_trace(tr) == []


def test_flower_without_seed_raises(pp44):
    covered = [E0, cycle_hyperedge([0, 1, 2, 3]), cycle_hyperedge([0, 2, 1, 3]), cycle_hyperedge([0, 1, 3, 2])]
    with pytest.raises(LemmaViolation) as err:
        hypertree_run(fixture(4, covered), pp44, n=2, check=False)
    assert err.value.lemma == "existenceofe0"


def test_restriction_modes():
    H = fixture(12, PERFECT)
    H0 = Hypergraph(H.host, [E0, PERFECT[1]], check=False)
    R = restricted_hypergraph(H0, [H])
    assert R.as_set() == {E0, PERFECT[1]}
    with pytest.raises(ValueError):
        restricted_hypergraph(H0, [H, H])
    assert restricted_hypergraph(H0, [H, H], RestrictionMode.BATCH) == R


def test_input_checks(pp44):
    H = build_hypergraph(Graph.cycle(4), pp44)
    with pytest.raises(PreconditionError):
        hypertree_run(H, pp44)
    with pytest.raises(PreconditionError):
        hypertree_run(fixture(12, PERFECT), PairParams(3, 4), check=False)


def test_classify_fingerprint(pp44):
    assert classify_fingerprint(Graph.complete(4), pp44, 64).tag is FingerprintTag.J2
    assert classify_fingerprint(Graph.complete(4), pp44, 65).tag is FingerprintTag.UNCLASSIFIED
    assert classify_fingerprint(Graph.complete(10), pp44, 10**6).tag is FingerprintTag.J1
    # sparse graphs have lambda above lambda(K_4)
    assert classify_fingerprint(Graph.path(6), pp44, 2).tag is FingerprintTag.UNCLASSIFIED


def test_hstar_trace(hstar, pp44):
    tr = hypertree_run(hstar, pp44)
    assert tr.steps[0].kind is StepKind.INIT
    assert all(s.kind is StepKind.CLIQUE for s in tr.steps[1:])
    assert check_trace(tr, hstar) == [] and audit_trace(tr) == []
    assert tr.stop_reason in (StopReason.LAMBDA, StopReason.BUDGET)
    again = hypertree_run(hstar, pp44)
    assert json.dumps(again.to_json()) == json.dumps(tr.to_json())


def test_hstar_relabelling_invariance(hstar, pp44):
    base = canonical_code(hypertree_run(hstar, pp44).fingerprint)
    rnd = random.Random(5)
    for _ in range(3):
        perm = list(range(10))
        rnd.shuffle(perm)
        assert canonical_code(hypertree_run(hstar.relabel(perm), pp44).fingerprint) == base


def test_batch_matches_single_on_one_input(hstar, pp44):
    single = hypertree_run(hstar, pp44)
    batch = hypertree_batch([hstar], pp44)[0]
    assert batch.to_json() == single.to_json()
    both = hypertree_batch([hstar, hstar.relabel(list(reversed(range(10))))], pp44)
    assert all(check_trace(t) == [] for t in both)


def test_trace_json_fields(pp44):
    tr = hypertree_run(fixture(12, PERFECT), pp44, n=2, check=False)
    data = json.loads(json.dumps(tr.to_json()))
    assert data["schema_version"] == 1
    assert data["steps"][1]["kind"] == "FlowerAttach"
    assert data["steps"][1]["lambda"] == {"num": 4, "den": 3}
    assert data["fingerprint"]["canonical_code"] == canonical_code(tr.fingerprint).hex()
    assert data["class"] in ("J1", "J2", "Unclassified")


def test_edge_labelling_extends_previous(pp44):
    tr = hypertree_run(fixture(12, SHARED), pp44, n=2, check=False)
    s0, s1 = tr.steps
    assert all(s1.sigma[e] == s0.sigma[e] for e in s0.sigma.edges())
    assert isinstance(s1.sigma, EdgeLabelling) and len(s1.sigma) == s1.graph.num_edges()
