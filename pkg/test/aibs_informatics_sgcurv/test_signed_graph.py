import numpy as np
from aibs_informatics_test_resources import does_not_raise
from pytest import mark, param, raises

from aibs_informatics_sgcurv.exceptions import (
    DisconnectedGraphError,
    GraphParseError,
    GraphValidationError,
)
from aibs_informatics_sgcurv.fixtures import signed_graph_from_labels
from aibs_informatics_sgcurv.signed_graph import (
    SignedEdge,
    SignedGraph,
    SignKind,
    balance_check,
    cycle_sign_products,
    degrees,
    find_negative_edges_sharing_cycle,
    format_edge_list,
    hop_diameter,
    is_complete,
    is_negative_connected,
    is_positive_connected,
    parse_edge_list,
    spanning_tree,
    switch_to_tree_positive,
)

TRIANGLE_TEXT = """\
# unit triangle, negative edge (0, 2)
3
0 1 +1
1 2 +1
0 2 -1
"""


@mark.parametrize(
    "text, expected_edges, raises_error",
    [
        param(
            TRIANGLE_TEXT,
            [(0, 1, 1.0, 1), (0, 2, 1.0, -1), (1, 2, 1.0, 1)],
            does_not_raise(),
            id="comments and default weights",
        ),
        param(
            "2\n1 0 2.5 -1  # trailing comment\n",
            [(0, 1, 2.5, -1)],
            does_not_raise(),
            id="edge normalized to u < v with explicit weight",
        ),
        param("3\n0 1 +1\n1 0 -1\n", None, raises(GraphParseError), id="duplicate edge"),
        param("3\n0 0 +1\n", None, raises(GraphParseError), id="self-loop"),
        param("3\n0 1 0 +1\n", None, raises(GraphParseError), id="zero weight"),
        param("3\n0 1 +2\n", None, raises(GraphParseError), id="unknown sign"),
        param("3\n0 5 +1\n", None, raises(GraphParseError), id="vertex out of range"),
        param("# nothing\n", None, raises(GraphParseError), id="missing vertex count"),
        param("3 4\n", None, raises(GraphParseError), id="malformed header"),
    ],
)
def test__parse_edge_list__handles_documents(text, expected_edges, raises_error):
    with raises_error:
        graph = parse_edge_list(text)
    if expected_edges is not None:
        assert [(e.u, e.v, e.weight, e.sign) for e in graph.edges] == expected_edges


def test__parse_edge_list__reports_line_number():
    with raises(GraphParseError) as exc_info:
        parse_edge_list("# header\n3\n0 1 +1\n1 2 x\n")
    assert exc_info.value.line_number == 4
    assert "line 4" in str(exc_info.value)


def test__format_edge_list__parses_back_to_same_graph():
    graph = SignedGraph.from_edges(4, [(0, 1, 0.1, 1), (1, 2, 1 / 3, 1), (2, 3, 2.0, -1)])
    assert parse_edge_list(format_edge_list(graph)) == graph


@mark.parametrize(
    "n, edges, raises_error",
    [
        param(3, [(0, 1, 1), (1, 2, -1)], does_not_raise(), id="valid"),
        param(0, [], raises(GraphValidationError), id="no vertices"),
        param(2, [(0, 1, -2.0, 1)], raises(GraphValidationError), id="negative weight"),
        param(2, [(0, 1, float("nan"), 1)], raises(GraphValidationError), id="nan weight"),
        param(2, [(0, 1, 0)], raises(GraphValidationError), id="zero sign"),
        param(2, [(0, 2, 1)], raises(GraphValidationError), id="vertex outside range"),
        param(2, [(0, 1, 1), (1, 0, 1)], raises(GraphValidationError), id="duplicate pair"),
    ],
)
def test__SignedGraph__validates_edges(n, edges, raises_error):
    with raises_error:
        SignedGraph.from_edges(n, edges)


def test__SignedGraph__get_edge_looks_up_either_orientation():
    graph = SignedGraph.from_edges(4, [(2, 0, 1.5, -1), (1, 3, 1)])

    assert graph.get_edge(0, 2) == graph.get_edge(2, 0) == SignedEdge(0, 2, 1.5, -1)
    assert graph.get_edge(0, 2).weight == 1.5
    assert graph.get_edge(0, 1) is None
    assert graph.has_edge(3, 1) and not graph.has_edge(2, 3)
    assert graph.sign(2, 0) == -1


def test__SignedGraph__edge_index_not_part_of_identity():
    first = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, -1)])
    second = SignedGraph.from_edges(3, [(2, 1, -1), (1, 0, 1)])

    assert first == second
    assert hash(first) == hash(second)
    assert "_index" not in repr(first)


def test__SignedGraph__weight_matrices_split_by_sign():
    graph = SignedGraph.from_edges(3, [(0, 1, 2.0, 1), (1, 2, 0.5, -1)])
    w_plus = graph.weight_matrix(SignKind.POSITIVE)
    w_minus = graph.weight_matrix(SignKind.NEGATIVE)
    np.testing.assert_array_equal(w_plus + w_minus, graph.weight_matrix())
    assert w_plus[0, 1] == w_plus[1, 0] == 2.0
    assert w_minus[1, 2] == 0.5 and w_minus[0, 1] == 0.0


def test__degrees__positive_and_negative():
    graph = SignedGraph.from_edges(3, [(0, 1, 2.0, 1), (0, 2, 0.5, -1), (1, 2, 1.0, 1)])
    d_plus, d_minus = degrees(graph)
    np.testing.assert_allclose(d_plus, [2.0, 3.0, 1.0])
    np.testing.assert_allclose(d_minus, [0.5, 0.0, 0.5])


def test__connectivity_predicates__sign_classes():
    # positive path 0-1-2 plus negative chord
    graph = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, -1)])
    assert is_positive_connected(graph)
    assert not is_negative_connected(graph)
    assert is_complete(graph)
    assert hop_diameter(graph) == 1


def test__spanning_tree__random_connected_graph(rng):
    n = 8
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    pairs += [(i, i + 1) for i in range(n - 1) if (i, i + 1) not in pairs]
    graph = SignedGraph.from_edges(n, [(i, j, 1 if rng.random() < 0.6 else -1) for i, j in pairs])

    tree = spanning_tree(graph)
    assert len(tree) == n - 1
    assert {v for e in tree for v in e} == set(range(n))
    assert all(graph.has_edge(*e) for e in tree)


def test__spanning_tree__disconnected_raises():
    graph = SignedGraph.from_edges(4, [(0, 1, 1), (2, 3, 1)])
    with raises(DisconnectedGraphError):
        spanning_tree(graph)


def test__switch_to_tree_positive__preserves_cycle_products():
    edges = [(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)]
    graph = signed_graph_from_labels(4, edges, [(1, 2), (3, 4)])
    result = switch_to_tree_positive(graph)

    assert all(result.graph.sign(*e) == 1 for e in result.tree_edges)
    assert cycle_sign_products(graph) == cycle_sign_products(result.graph)
    for edge in graph.edges:
        switched = result.switch_fn[edge.u] * edge.sign * result.switch_fn[edge.v]
        assert result.graph.sign(edge.u, edge.v) == switched


def test__switch_to_tree_positive__rejects_non_tree():
    graph = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, -1)])
    with raises(GraphValidationError):
        switch_to_tree_positive(graph, tree=[(0, 1)])


@mark.parametrize(
    "negative, balanced",
    [
        param([], True, id="all positive"),
        param([(1, 2), (1, 3)], True, id="even cycle sign"),
        param([(1, 3)], False, id="odd negative cycle"),
    ],
)
def test__balance_check__triangles(negative, balanced):
    graph = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], negative)
    verdict = balance_check(graph)

    assert verdict.balanced is balanced
    if balanced:
        side = verdict.bipartition
        assert side is not None and 0 in side
        for edge in graph.edges:
            across = (edge.u in side) != (edge.v in side)
            assert across == (not edge.is_positive)
    else:
        assert verdict.witness_cycle is not None
        product = 1
        for edge in verdict.witness_cycle:
            product *= graph.sign(*edge)
        assert product == -1


def test__find_negative_edges_sharing_cycle__uses_blocks():
    # two triangles joined at vertex 2, one negative edge in each block
    separate = SignedGraph.from_edges(
        5, [(0, 1, -1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, -1), (2, 4, 1)]
    )
    assert find_negative_edges_sharing_cycle(separate) is None

    shared = SignedGraph.from_edges(4, [(0, 1, -1), (1, 2, 1), (2, 3, -1), (0, 3, 1)])
    assert find_negative_edges_sharing_cycle(shared) == ((0, 1), (2, 3))


def test__SignedEdge__ordering_ignores_weight_and_sign():
    assert SignedEdge(0, 1, 3.0, -1) == SignedEdge(0, 1, 1.0, 1)
    assert sorted([SignedEdge(1, 2, 1.0, 1), SignedEdge(0, 2, 1.0, 1)])[0].key == (0, 2)


def test__with_signature__replaces_listed_signs():
    graph = SignedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])
    flipped = graph.with_signature({(1, 2): -1})
    assert flipped.sign(1, 2) == -1 and flipped.sign(0, 1) == 1
    with raises(GraphValidationError):
        flipped.sign(0, 2)
