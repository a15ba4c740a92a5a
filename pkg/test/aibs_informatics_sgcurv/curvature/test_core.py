import numpy as np
import pytest
from aibs_informatics_test_resources import does_not_raise
from pytest import mark, param, raises

from aibs_informatics_sgcurv.curvature.core import (
    edge_curvature,
    edge_lambda,
    extremal_costs,
    heat_expansion_rate,
    heat_limit_estimate,
    is_vertex_transitive_constant,
    node_curvature,
    semigroup_edge_curvature,
)
from aibs_informatics_sgcurv.exceptions import GraphValidationError, HypothesisError
from aibs_informatics_sgcurv.fixtures import signed_graph_from_labels
from aibs_informatics_sgcurv.repelling import repelling_cost_matrix
from aibs_informatics_sgcurv.signed_graph import SignedGraph

K4_EDGES = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


@pytest.fixture
def c3_analysis():
    # 0-based negative edge (0, 2); Ω = (4/3, 10/3, 4/3) at ε = 0.2
    graph = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], [(1, 3)])
    return repelling_cost_matrix(graph, 0.2)


@pytest.fixture
def k4_matching_analysis():
    graph = signed_graph_from_labels(4, K4_EDGES, [(1, 3), (2, 4)])
    return repelling_cost_matrix(graph, 0.5)


def test__node_curvature__three_cycle(c3_analysis):
    node = node_curvature(c3_analysis)

    np.testing.assert_allclose(node.tau, [1.125, -0.5625, 1.125], atol=1e-10)
    assert node.phi == pytest.approx(1.6875)
    assert node.barycentric.sum() == pytest.approx(1.0)
    assert node.min_tau == pytest.approx(-0.5625)
    assert not node.is_nonnegative
    assert node.route_residual < 1e-10


def test__node_curvature__unit_edge(unit_edge):
    node = node_curvature(repelling_cost_matrix(unit_edge, 0.0))

    np.testing.assert_allclose(node.tau, [2.0, 2.0])
    assert node.phi == pytest.approx(4.0)
    assert is_vertex_transitive_constant(node)


def test__node_curvature__single_vertex_raises():
    analysis = repelling_cost_matrix(SignedGraph.from_edges(1, []), 0.0)
    with raises(HypothesisError):
        node_curvature(analysis)


def test__is_vertex_transitive_constant__k4_matching(k4_matching_analysis, c3_analysis):
    node = node_curvature(k4_matching_analysis)
    np.testing.assert_allclose(node.tau, 8.0 / 9.0)
    assert is_vertex_transitive_constant(node)
    assert not is_vertex_transitive_constant(node_curvature(c3_analysis))


@mark.parametrize(
    "edge, expected",
    [
        param((0, 1), 0.0, id="positive edge"),
        param((1, 2), 0.0, id="other positive edge"),
        param((0, 2), 2.0, id="negative edge"),
    ],
)
def test__edge_lambda__three_cycle(c3_analysis, edge, expected):
    assert edge_lambda(c3_analysis, *edge) == pytest.approx(expected, abs=1e-10)


def test__edge_curvature__three_cycle(c3_analysis):
    node = node_curvature(c3_analysis)

    assert edge_curvature(c3_analysis, node.tau, 0, 2) == pytest.approx(3.75)
    assert edge_curvature(c3_analysis, node.tau, 0, 1) == pytest.approx(0.84375)
    assert semigroup_edge_curvature(c3_analysis, node, 0, 2) == pytest.approx(3.2)


@mark.parametrize(
    "edge, raises_error",
    [
        param((0, 1), does_not_raise(), id="edge"),
        param((1, 0), does_not_raise(), id="reversed edge"),
        param((0, 0), raises(GraphValidationError), id="diagonal"),
    ],
)
def test__edge_curvature__requires_edge(unit_edge, edge, raises_error):
    analysis = repelling_cost_matrix(unit_edge, 0.0)
    node = node_curvature(analysis)
    with raises_error:
        assert edge_curvature(analysis, node.tau, *edge) == pytest.approx(8.0)


def test__semigroup_edge_curvature__k4_matching(k4_matching_analysis):
    node = node_curvature(k4_matching_analysis)

    assert semigroup_edge_curvature(k4_matching_analysis, node, 0, 1) == pytest.approx(0.8)
    assert semigroup_edge_curvature(k4_matching_analysis, node, 0, 2) == pytest.approx(3.5)
    assert edge_curvature(k4_matching_analysis, node.tau, 0, 1) == pytest.approx(128 / 45)


def test__heat_expansion_rate__equals_semigroup_curvature(small_corpus):
    for inst in small_corpus:
        analysis = repelling_cost_matrix(inst.graph, inst.epsilon)
        node = node_curvature(analysis)
        for i, j in inst.graph.edge_keys:
            assert heat_expansion_rate(analysis, i, j) == pytest.approx(
                semigroup_edge_curvature(analysis, node, i, j), rel=1e-8, abs=1e-8
            )


def test__heat_limit_estimate__three_cycle(c3_analysis):
    estimate = heat_limit_estimate(c3_analysis, 0, 2, t_seq=(0.01, 0.005, 0.0025))

    assert estimate.expected == pytest.approx(3.2)
    assert estimate.estimate == pytest.approx(3.2, abs=1e-4)
    assert [row.t for row in estimate.rows] == [0.01, 0.005, 0.0025]
    assert estimate.rows[-1].error < estimate.rows[0].error
    assert len(estimate.ratios) == 2


def test__heat_limit_estimate__unit_edge(unit_edge):
    analysis = repelling_cost_matrix(unit_edge, 0.0)
    estimate = heat_limit_estimate(analysis, 0, 1)
    assert estimate.expected == pytest.approx(2.0)
    assert estimate.estimate == pytest.approx(2.0, abs=2e-3)


@mark.parametrize(
    "t_seq",
    [
        param((), id="empty"),
        param((0.05, 0.1), id="ascending"),
        param((0.1, 0.1), id="repeated"),
        param((1.5, 0.5), id="above one"),
        param((0.1, 0.0), id="reaches zero"),
    ],
)
def test__heat_limit_estimate__rejects_time_grid(c3_analysis, t_seq):
    with raises(HypothesisError) as exc_info:
        heat_limit_estimate(c3_analysis, 0, 2, t_seq=t_seq)
    assert exc_info.value.reason == "bad-time-grid"


def test__extremal_costs__unit_edge_n_bound_fails(unit_edge):
    analysis = repelling_cost_matrix(unit_edge, 0.0)
    extremal = extremal_costs(analysis, node_curvature(analysis))

    assert extremal.applicable
    assert extremal.x_cost == pytest.approx(1.0) and extremal.x_bound == pytest.approx(1.0)
    assert extremal.x_bound_holds is True
    assert extremal.n_bound == pytest.approx(0.5)
    assert extremal.n_bound_holds is False
    assert extremal.bounds_ok is True


def test__extremal_costs__k4_matching(k4_matching_analysis):
    extremal = extremal_costs(k4_matching_analysis, node_curvature(k4_matching_analysis))

    assert extremal.x_cost == pytest.approx(2.0)
    assert extremal.n_cost == pytest.approx(1.25)
    assert extremal.x_bound == pytest.approx(2.25)
    assert extremal.n_bound == pytest.approx(1.125)
    assert extremal.bounds_ok is True
    assert extremal.n_bound_holds is False


def test__extremal_costs__not_applicable_with_negative_tau(c3_analysis):
    extremal = extremal_costs(c3_analysis, node_curvature(c3_analysis))

    assert not extremal.applicable
    assert extremal.bounds_ok is None
    assert extremal.x_bound_holds is None and extremal.n_bound_holds is None
