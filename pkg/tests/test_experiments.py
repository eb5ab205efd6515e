import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kcramsey.experiments import (CorpusItem, McConfig, McPoint, McReport, collect_out, mc_threshold,
                                  monotone_up_to_overlap, parse_csv, perturb_host, sample_gnp,
                                  trial_stream, union_bound_report, verify_lemmas, wilson)
from kcramsey.graph import Graph
from kcramsey.hypergraph import build_hypergraph, clique_hyperedge, cycle_hyperedge, Hypergraph
from kcramsey.hypertree import hypertree_run


def test_gnp_extremes():
    s = trial_stream(0, 0, 0)
    assert sample_gnp(7, 0, s).num_edges() == 0
    assert sample_gnp(7, 1, s) == Graph.complete(7)
    with pytest.raises(ValueError):
        sample_gnp(3, 1.5, s)


def test_gnp_edge_count_moments():
    counts = [sample_gnp(10, 0.5, trial_stream(1, 0, t)).num_edges() for t in range(10_000)]
    sigma = math.sqrt(45 / 4)
    assert abs(np.mean(counts) - 22.5) < 3 * sigma / math.sqrt(len(counts))


@given(st.integers(0, 2**32), st.integers(0, 50), st.integers(0, 1000))
def test_streams_depend_only_on_key(seed, point, trial):
    a = trial_stream(seed, point, trial).random(4)
    b = trial_stream(seed, point, trial).random(4)
    c = trial_stream(seed, point, trial + 1).random(4)
    assert (a == b).all() and not (a == c).all()


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(n=5)
    with pytest.raises(ValueError):
        McConfig(n=5, p_grid=[0.1], c_grid=[1])
    with pytest.raises(ValueError):
        McConfig(n=5, p_grid=[2.0])
    cfg = McConfig(n=12, c_grid=[0, 1])
    assert cfg.exponent() == Fraction(4, 9)
    assert cfg.probabilities() == [0.0, 12 ** (-4 / 9)]


def test_zero_probability_never_ramsey():
    rep = mc_threshold(McConfig(n=12, p_grid=[0.0], trials=20))
    assert rep.points[0].ramsey == 0 and rep.points[0].not_ramsey == 20


def test_complete_host_always_ramsey():
    rep = mc_threshold(McConfig(n=10, p_grid=[1.0], trials=2))
    assert rep.points[0].ramsey == 2


def test_thread_count_does_not_change_report():
    base = McConfig(n=9, p_grid=[0.3, 0.8], trials=12, master_seed=4)
    reports = [mc_threshold(McConfig(**{**base.__dict__, "workers": w})) for w in (1, 3)]
    assert reports[0].to_csv() == reports[1].to_csv()
    assert reports[0].to_json() == reports[1].to_json()


def test_report_round_trips():
    rep = mc_threshold(McConfig(n=8, c_grid=[0.5, 2], trials=5, master_seed=2))
    back = McReport.from_json(rep.to_json())
    assert back.points == rep.points
    rows = parse_csv(rep.to_csv())
    assert [r["p"] for r in rows] == [pt.p for pt in rep.points]
    assert [r["not_ramsey"] for r in rows] == [pt.not_ramsey for pt in rep.points]
    with pytest.raises(ValueError):
        parse_csv("a,b\n")
    with pytest.raises(ValueError):
        McReport.from_json({**rep.to_json(), "schema_version": 99})


def test_wilson_and_monotonicity():
    lo, hi = wilson(0, 200)
    assert lo == 0 and 0 < hi < 0.03
    assert wilson(0, 0) == (0.0, 1.0)
    cfg = McConfig(n=5, p_grid=[0.1, 0.2])

    def point(p, ra, nr):
        lo, hi = wilson(ra, ra + nr)
        return McPoint(p, None, ra, nr, 0, lo, hi)

    assert monotone_up_to_overlap(McReport(cfg, [point(0.1, 10, 90), point(0.2, 8, 92)]))
    assert not monotone_up_to_overlap(McReport(cfg, [point(0.1, 90, 10), point(0.2, 10, 90)]))


def test_verify_flags_non_critical(pp44):
    H = build_hypergraph(Graph.cycle(4), pp44)
    report = verify_lemmas([CorpusItem("c4", "critical", H)], pp44)
    star = next(r for r in report.rows if r.lemma == "star-critical")
    assert not star.ok and star.counterexample
    assert not report.ok


def test_verify_beta_rows(pp44):
    corpus = [CorpusItem("k3", "graph", Graph.complete(3)), CorpusItem("k4", "graph", Graph.complete(4))]
    report = verify_lemmas(corpus, pp44)
    assert report.ok and len(report.rows) == 2
    with pytest.raises(ValueError):
        verify_lemmas([CorpusItem("x", "nonsense", None)], pp44)


def test_verify_trace_rows(pp44):
    hes = [clique_hyperedge([0, 1, 2, 3]), cycle_hyperedge([0, 1, 4, 5]), clique_hyperedge([1, 4, 6, 7]),
           clique_hyperedge([4, 5, 8, 9]), clique_hyperedge([5, 0, 10, 11])]
    host = Graph.from_edges(12, sorted({p for E in hes for p in E.pairs()}))
    tr = hypertree_run(Hypergraph(host, hes), pp44, n=2, check=False)
    report = verify_lemmas([CorpusItem("flower", "trace", tr)], pp44)
    assert report.ok and {r.lemma for r in report.rows} == {"hypertreeBasics", "deg-lambda"}


def test_verify_and_collect_on_hstar(hstar, pp44):
    report = verify_lemmas([CorpusItem("hstar", "critical", hstar)], pp44)
    assert report.ok, report.failures()
    coll = collect_out([hstar, hstar.relabel([9, 8, 7, 6, 5, 4, 3, 2, 1, 0])], pp44, 10)
    assert len(coll) == 1 and len(coll.provenance) == 2
    code, G = next(iter(coll.representatives.items()))
    assert coll.to_json()["fingerprints"][0]["canonical_code"] == code.hex()


def test_collect_empty(pp44):
    assert len(collect_out([], pp44, 10)) == 0


def test_union_bound_examples(pp44):
    rep = union_bound_report(pp44, 2**10)
    expected = 10 ** (4 / 3) * (2 ** (-10 / 24) + 2 ** (-40 / 3))
    assert rep["M"] == "4/3" and rep["epsilon"] == "1/24"
    assert rep["bound"] == pytest.approx(expected, rel=1e-12)
    assert rep["c"] == pytest.approx(2 ** (-8 / 3))
    small = union_bound_report(pp44, 2)
    assert small["bound"] == pytest.approx(2 ** (-1 / 24) + 2 ** (-4 / 3))
    big_eps = union_bound_report(pp44, 2**10, eps=Fraction(1000))
    assert big_eps["bound"] == pytest.approx(10 ** (4 / 3) * 2 ** (-40 / 3), rel=1e-6)
    with pytest.raises(ValueError):
        union_bound_report(pp44, 1)


@settings(max_examples=20)
@given(st.integers(0, 1000), st.integers(1, 3))
def test_perturb_host_contains_base(seed, extra):
    base = Graph.complete(6)
    G = perturb_host(base, extra, trial_stream(seed, 0, 0))
    assert G.n == 6 + extra
    assert base.is_subgraph_of(G.induced(range(6)))
    assert all(2 <= G.degree(w) for w in range(6, G.n))
