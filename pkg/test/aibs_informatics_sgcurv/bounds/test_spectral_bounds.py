import pytest
from pytest import mark, param

from aibs_informatics_sgcurv.bounds.spectral_bounds import (
    Applicability,
    BoundName,
    BoundReport,
    check_all_bounds,
    check_degree_bound,
    check_lichnerowicz_edge,
    check_lichnerowicz_node,
    check_lly_comparison,
    check_resistance_bracket,
    check_two_sided_bound,
)
from aibs_informatics_sgcurv.curvature.core import CurvatureVariant
from aibs_informatics_sgcurv.fixtures import (
    TRIANGLE_EXAMPLE_EPSILON,
    signed_graph_from_labels,
    triangle_example,
)
from aibs_informatics_sgcurv.repelling import repelling_cost_matrix
from aibs_informatics_sgcurv.signed_graph import SignedGraph

K4_EDGES = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
C3 = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], [(1, 3)])
C4 = signed_graph_from_labels(4, [(1, 2), (2, 3), (3, 4), (1, 4)], [(1, 4)])
K4_MATCHING = signed_graph_from_labels(4, K4_EDGES, [(1, 3), (2, 4)])
# negative path 1-2-3-4, positive path 3-1-4-2
K4_BOTH_CONNECTED = signed_graph_from_labels(4, K4_EDGES, [(1, 2), (2, 3), (3, 4)])
NOT_POSITIVE_CONNECTED = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, -1)])
SINGLE_VERTEX = SignedGraph.from_edges(1, [])
ALL_POSITIVE_PATH = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])


def test__BoundReport__evaluate_strict_and_tolerant():
    tolerant = BoundReport.evaluate(BoundName.DEGREE, 1.0, 1.0)
    strict = BoundReport.evaluate(BoundName.RESISTANCE_LOWER, 1.0, 1.0, strict=True)

    assert tolerant.holds is True and tolerant.slack == 0.0
    assert strict.holds is False
    assert tolerant.applicable and strict.applicable


def test__BoundReport__unmet_has_no_values():
    report = BoundReport.unmet(BoundName.TWO_SIDED, "not-negative-connected")
    assert report.applicability == Applicability.HYPOTHESIS_UNMET
    assert report.lhs is None and report.rhs is None and report.holds is None
    assert not report.applicable


@mark.parametrize(
    "graph, eps, reason",
    [
        param(C4, 0.2, None, id="cycle"),
        param(C3, 0.2, "complete-graph", id="complete"),
        param(C4, 0.5, "epsilon-out-of-range", id="beyond consensus index"),
        param(NOT_POSITIVE_CONNECTED, 0.0, "not-positive-connected", id="positive disconnected"),
    ],
)
def test__check_degree_bound__hypotheses(graph, eps, reason):
    report = check_degree_bound(graph, eps)
    assert report.reason == reason
    if reason is None:
        assert report.holds
        assert report.rhs == pytest.approx(2.0)


@mark.parametrize(
    "graph, eps, reason",
    [
        param(K4_BOTH_CONNECTED, 0.05, None, id="both classes connected"),
        param(C3, 0.2, "not-negative-connected", id="single negative edge"),
        param(K4_MATCHING, 0.5, "not-negative-connected", id="negative matching"),
        param(ALL_POSITIVE_PATH, 0.3, "no-negative-edges", id="no negative edges"),
        param(SINGLE_VERTEX, 0.0, "too-small", id="single vertex"),
    ],
)
def test__check_two_sided_bound__hypotheses(graph, eps, reason):
    report = check_two_sided_bound(graph, eps)
    assert report.reason == reason
    if reason is None:
        assert report.holds
        # d⁺_max = 2, μ⁻₀ = 1, hop diameter 1, |V| = 4
        assert report.rhs == pytest.approx(4.0 - 0.05 / 4.0)


def test__check_lichnerowicz_node__unit_edge_is_tight(unit_edge):
    report = check_lichnerowicz_node(unit_edge, 0.0)
    assert report.holds
    assert report.lhs == pytest.approx(2.0) and report.rhs == pytest.approx(2.0)


def test__check_lichnerowicz_node__needs_positive_tau():
    report = check_lichnerowicz_node(C3, 0.2)
    assert report.reason == "nonpositive-node-curvature"


@mark.parametrize(
    "variant, expected_lhs",
    [
        param(CurvatureVariant.SEMIGROUP, 0.8, id="semigroup"),
        param(CurvatureVariant.DISPLAY, 128 / 45, id="tau weighted"),
    ],
)
def test__check_lichnerowicz_edge__k4_matching(variant, expected_lhs):
    report = check_lichnerowicz_edge(K4_MATCHING, 0.5, variant=variant)

    assert report.holds
    assert report.lhs == pytest.approx(expected_lhs)
    assert report.rhs == pytest.approx(4.0)
    assert report.subject == str(variant)


def test__check_lichnerowicz_edge__out_of_range():
    report = check_lichnerowicz_edge(C3, 0.6)
    assert report.reason == "epsilon-out-of-range"


def test__check_resistance_bracket__triangle_example():
    lower, upper = check_resistance_bracket(
        repelling_cost_matrix(triangle_example(), TRIANGLE_EXAMPLE_EPSILON)
    )

    assert lower.strict and lower.holds
    assert lower.lhs == pytest.approx(6.0) and lower.rhs == pytest.approx(7.0)
    assert upper.holds and upper.rhs == pytest.approx(12.0)


def test__check_resistance_bracket__two_vertices_not_strict(unit_edge):
    lower, upper = check_resistance_bracket(repelling_cost_matrix(unit_edge, 0.0))
    assert not lower.strict
    assert lower.holds and upper.holds


def test__check_lly_comparison__one_report_per_edge():
    reports = check_lly_comparison(repelling_cost_matrix(C3, 0.2))
    assert [r.subject for r in reports] == ["0-1", "0-2", "1-2"]
    assert all(r.holds for r in reports)


def test__check_all_bounds__out_of_range_is_unmet():
    reports = check_all_bounds(C3, 0.6)
    assert len(reports) == 6
    assert all(r.reason == "epsilon-out-of-range" for r in reports)


def test__check_all_bounds__k4_matching():
    reports = check_all_bounds(K4_MATCHING, 0.5)
    names = [r.name for r in reports]

    assert names.count(BoundName.LLY_COMPARISON) == 6
    assert len(reports) == 12
    assert all(r.holds for r in reports if r.applicable)
    assert {r.reason for r in reports if not r.applicable} == {
        "complete-graph",
        "not-negative-connected",
    }


def test__check_all_bounds__corpus_applicable_bounds_hold(small_corpus):
    for inst in small_corpus:
        for report in check_all_bounds(inst.graph, inst.epsilon, with_lly=False):
            assert report.holds is not False, f"{report.name} on instance {inst.index}"


@mark.parametrize(
    "graph, two_sided_reason",
    [
        param(ALL_POSITIVE_PATH, "no-negative-edges", id="all positive"),
        param(SINGLE_VERTEX, "too-small", id="single vertex"),
    ],
)
def test__check_all_bounds__degenerate_graphs_report_unmet(graph, two_sided_reason):
    reports = {r.name: r for r in check_all_bounds(graph, 0.3, with_lly=False)}

    assert reports[BoundName.TWO_SIDED].reason == two_sided_reason
    assert reports[BoundName.TWO_SIDED].holds is None
    assert all(r.holds is not False for r in reports.values())
