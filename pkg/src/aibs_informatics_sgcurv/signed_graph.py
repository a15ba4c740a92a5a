"""Signed graph data model, edge-list parsing and structural predicates.

Vertices are 0-based integers. Every edge is undirected, carries a strictly positive
weight and a sign in {+1, -1}; the sign-filtered views (positive subgraph, negative
subgraph, underlying graph) are derived from this single edge table.
"""

from __future__ import annotations

__all__ = [
    "Edge",
    "SignKind",
    "SignedEdge",
    "SignedGraph",
    "SwitchingResult",
    "BalanceVerdict",
    "parse_edge_list",
    "format_edge_list",
    "degrees",
    "is_connected",
    "is_positive_connected",
    "is_negative_connected",
    "is_complete",
    "spanning_tree",
    "switch_to_tree_positive",
    "cycle_sign_products",
    "balance_check",
    "hop_diameter",
    "find_negative_edges_sharing_cycle",
]

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from aibs_informatics_core.collections import StrEnum
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.exceptions import (
    DisconnectedGraphError,
    GraphParseError,
    GraphValidationError,
)

logger = get_logger(__name__)

Edge = Tuple[int, int]

COMMENT_PREFIX = "#"
DEFAULT_WEIGHT = 1.0
SIGN_TOKENS: Dict[str, int] = {"+1": 1, "1": 1, "-1": -1}


class SignKind(StrEnum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNDERLYING = "underlying"


@dataclass(frozen=True, order=True)
class SignedEdge:
    u: int
    v: int
    weight: float = field(compare=False)
    sign: int = field(compare=False)

    @property
    def key(self) -> Edge:
        return (self.u, self.v)

    @property
    def is_positive(self) -> bool:
        return self.sign > 0

    def matches(self, kind: SignKind) -> bool:
        if kind == SignKind.UNDERLYING:
            return True
        return self.is_positive == (kind == SignKind.POSITIVE)


EdgeLike = Union[SignedEdge, Tuple[int, int, int], Tuple[int, int, float, int]]


@dataclass(frozen=True)
class SignedGraph:
    """An undirected, simple, weighted graph with a ±1 signature.

    Edges are normalized on construction (``u < v``, lexicographic order) and validated:
    weights must be finite and strictly positive, signs exactly ±1, vertex ids in
    ``[0, n)``, no self-loops and at most one edge per unordered pair.

    Attributes:
        n: number of vertices.
        edges: normalized edge table.
    """

    n: int
    edges: Tuple[SignedEdge, ...] = ()
    _index: Dict[Edge, SignedEdge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphValidationError(f"Vertex count must be an integer >= 1, got {self.n!r}")
        normalized: Dict[Edge, SignedEdge] = {}
        for edge in self.edges:
            u, v = int(edge.u), int(edge.v)
            if u == v:
                raise GraphValidationError(f"Self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(
                    f"Edge ({u}, {v}) references a vertex outside [0, {self.n})"
                )
            if not (math.isfinite(edge.weight) and edge.weight > 0):
                raise GraphValidationError(
                    f"Edge ({u}, {v}) has non-positive weight {edge.weight}"
                )
            if edge.sign not in (1, -1):
                raise GraphValidationError(
                    f"Edge ({u}, {v}) has sign {edge.sign}, expected +1 or -1"
                )
            key = (min(u, v), max(u, v))
            if key in normalized:
                raise GraphValidationError(f"Duplicate edge {key}")
            normalized[key] = SignedEdge(key[0], key[1], float(edge.weight), int(edge.sign))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(normalized.values())))
        object.__setattr__(self, "_index", normalized)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[EdgeLike]) -> "SignedGraph":
        """Build a graph from ``(u, v, sign)`` or ``(u, v, weight, sign)`` tuples."""
        signed_edges: List[SignedEdge] = []
        for edge in edges:
            if isinstance(edge, SignedEdge):
                signed_edges.append(edge)
            elif len(edge) == 3:
                u, v, s = edge  # type: ignore[misc]
                signed_edges.append(SignedEdge(int(u), int(v), DEFAULT_WEIGHT, int(s)))
            else:
                u, v, w, s = edge  # type: ignore[misc]
                signed_edges.append(SignedEdge(int(u), int(v), float(w), int(s)))
        return cls(n=n, edges=tuple(signed_edges))

    # ---- edge lookups

    @property
    def edge_keys(self) -> List[Edge]:
        return [e.key for e in self.edges]

    @property
    def positive_edges(self) -> Tuple[SignedEdge, ...]:
        return tuple(e for e in self.edges if e.is_positive)

    @property
    def negative_edges(self) -> Tuple[SignedEdge, ...]:
        return tuple(e for e in self.edges if not e.is_positive)

    @property
    def has_negative_edges(self) -> bool:
        return any(not e.is_positive for e in self.edges)

    def get_edge(self, i: int, j: int) -> Optional[SignedEdge]:
        return self._index.get((min(i, j), max(i, j)))

    def has_edge(self, i: int, j: int) -> bool:
        return self.get_edge(i, j) is not None

    def sign(self, i: int, j: int) -> int:
        edge = self.get_edge(i, j)
        if edge is None:
            raise GraphValidationError(f"({i}, {j}) is not an edge")
        return edge.sign

    # ---- matrix and networkx views

    def weight_matrix(self, kind: SignKind = SignKind.UNDERLYING) -> np.ndarray:
        """Symmetric matrix of sign-filtered weights (w⁺, w⁻ or w), zero off-edges."""
        matrix = np.zeros((self.n, self.n))
        for edge in self.edges:
            if edge.matches(kind):
                matrix[edge.u, edge.v] = matrix[edge.v, edge.u] = edge.weight
        return matrix

    def to_networkx(self, kind: SignKind = SignKind.UNDERLYING) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for edge in self.edges:
            if edge.matches(kind):
                graph.add_edge(edge.u, edge.v, weight=edge.weight, sign=edge.sign)
        return graph

    def with_signature(self, signs: Dict[Edge, int]) -> "SignedGraph":
        """Copy of the graph with the signs of the listed edges replaced."""
        return SignedGraph(
            n=self.n,
            edges=tuple(
                SignedEdge(e.u, e.v, e.weight, signs.get(e.key, e.sign)) for e in self.edges
            ),
        )


@dataclass(frozen=True)
class SwitchingResult:
    graph: SignedGraph
    switch_fn: Tuple[int, ...]
    tree_edges: Tuple[Edge, ...]


@dataclass(frozen=True)
class BalanceVerdict:
    balanced: bool
    bipartition: Optional[FrozenSet[int]] = None
    witness_cycle: Optional[Tuple[Edge, ...]] = None


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def _parse_vertex(token: str, n: int, line_number: int) -> int:
    try:
        vertex = int(token)
    except ValueError as e:
        raise GraphParseError(f"invalid vertex id {token!r}", line_number) from e
    if not 0 <= vertex < n:
        raise GraphParseError(f"vertex {vertex} outside [0, {n})", line_number)
    return vertex


def parse_edge_list(text: str) -> SignedGraph:
    """Parse the edge-list format into a validated signed graph.

    The first non-comment line holds the vertex count; every following non-comment line
    reads ``u v [w] s`` with ``s`` in {+1, -1}. ``#`` starts a comment. A missing weight
    column defaults to 1.

    Args:
        text: Document contents.

    Raises:
        GraphParseError: on a malformed line, duplicate edge, self-loop, non-positive
            weight or unknown sign. The message carries the line number.

    Returns:
        The parsed graph with normalized edge order.
    """
    n: Optional[int] = None
    seen: Dict[Edge, int] = {}
    edges: List[SignedEdge] = []

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split(COMMENT_PREFIX, 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 1:
                raise GraphParseError("expected a single vertex count", line_number)
            try:
                n = int(tokens[0])
            except ValueError as e:
                raise GraphParseError(f"invalid vertex count {tokens[0]!r}", line_number) from e
            if n < 1:
                raise GraphParseError(f"vertex count must be >= 1, got {n}", line_number)
            continue

        if len(tokens) not in (3, 4):
            raise GraphParseError(f"expected 'u v [w] s', got {line!r}", line_number)
        u = _parse_vertex(tokens[0], n, line_number)
        v = _parse_vertex(tokens[1], n, line_number)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", line_number)

        weight = DEFAULT_WEIGHT
        if len(tokens) == 4:
            try:
                weight = float(tokens[2])
            except ValueError as e:
                raise GraphParseError(f"invalid weight {tokens[2]!r}", line_number) from e
            if not (math.isfinite(weight) and weight > 0):
                raise GraphParseError(f"weight must be positive, got {tokens[2]}", line_number)

        sign_token = tokens[-1]
        if sign_token not in SIGN_TOKENS:
            raise GraphParseError(f"sign must be +1 or -1, got {sign_token!r}", line_number)

        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(
                f"duplicate edge {key} (first defined at line {seen[key]})", line_number
            )
        seen[key] = line_number
        edges.append(SignedEdge(key[0], key[1], weight, SIGN_TOKENS[sign_token]))

    if n is None:
        raise GraphParseError("missing vertex count")
    graph = SignedGraph(n=n, edges=tuple(edges))
    logger.debug(f"Parsed signed graph with {graph.n} vertices and {len(graph.edges)} edges")
    return graph


def format_edge_list(g: SignedGraph) -> str:
    """Inverse of :func:`parse_edge_list` (weights written with full precision)."""
    lines = [str(g.n)]
    for e in g.edges:
        lines.append(f"{e.u} {e.v} {e.weight!r} {'+1' if e.is_positive else '-1'}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Degrees and connectivity
# --------------------------------------------------------------------------


def degrees(g: SignedGraph) -> Tuple[np.ndarray, np.ndarray]:
    """Positive and negative weighted degrees ``(d⁺, d⁻)``."""
    d_plus = g.weight_matrix(SignKind.POSITIVE).sum(axis=1)
    d_minus = g.weight_matrix(SignKind.NEGATIVE).sum(axis=1)
    return d_plus, d_minus


def is_connected(g: SignedGraph, kind: SignKind = SignKind.UNDERLYING) -> bool:
    """True iff the sign-filtered subgraph spans all vertices and is connected."""
    if g.n == 1:
        return True
    return nx.is_connected(g.to_networkx(kind))


def is_positive_connected(g: SignedGraph) -> bool:
    return is_connected(g, SignKind.POSITIVE)


def is_negative_connected(g: SignedGraph) -> bool:
    return is_connected(g, SignKind.NEGATIVE)


def is_complete(g: SignedGraph) -> bool:
    return len(g.edges) == g.n * (g.n - 1) // 2


def _require_connected(g: SignedGraph, kind: SignKind = SignKind.UNDERLYING) -> None:
    if not is_connected(g, kind):
        msg = f"The {kind} subgraph of the {g.n}-vertex graph is not connected"
        logger.error(msg)
        raise DisconnectedGraphError(msg)


# --------------------------------------------------------------------------
# Trees, switching and balance
# --------------------------------------------------------------------------


def spanning_tree(g: SignedGraph, kind: SignKind = SignKind.UNDERLYING) -> List[Edge]:
    """BFS spanning tree from vertex 0 visiting neighbors in ascending order.

    Raises:
        DisconnectedGraphError: if the selected subgraph is not connected.
    """
    _require_connected(g, kind)
    tree = nx.bfs_edges(g.to_networkx(kind), 0, sort_neighbors=sorted)
    return [(min(u, v), max(u, v)) for u, v in tree]


def _validate_tree(g: SignedGraph, tree: Sequence[Edge]) -> nx.Graph:
    tree_graph = nx.Graph()
    tree_graph.add_nodes_from(range(g.n))
    for u, v in tree:
        if not g.has_edge(u, v):
            raise GraphValidationError(f"Tree edge ({u}, {v}) is not an edge of the graph")
        tree_graph.add_edge(u, v)
    if len(tree) != g.n - 1 or not nx.is_tree(tree_graph):
        raise GraphValidationError(
            f"{len(tree)} edges do not form a spanning tree of the {g.n}-vertex graph"
        )
    return tree_graph


def switch_to_tree_positive(
    g: SignedGraph, tree: Optional[Sequence[Edge]] = None, root: int = 0
) -> SwitchingResult:
    """Switch the signature so every tree edge becomes positive.

    The switching function is the sign product along the tree path from ``root``; the
    output signature is ``f(i)·σ(i,j)·f(j)``.

    Args:
        g: Signed graph.
        tree: Spanning tree of the underlying graph. Defaults to :func:`spanning_tree`.
        root: Root vertex of the path products.

    Raises:
        GraphValidationError: if ``tree`` is not a spanning tree of ``g`` or ``root``
            is out of range.
    """
    if not 0 <= root < g.n:
        raise GraphValidationError(f"Root {root} outside [0, {g.n})")
    tree = list(tree) if tree is not None else spanning_tree(g)
    tree_graph = _validate_tree(g, tree)

    switch_fn = [0] * g.n
    switch_fn[root] = 1
    for parent, child in nx.bfs_edges(tree_graph, root, sort_neighbors=sorted):
        switch_fn[child] = switch_fn[parent] * g.sign(parent, child)

    switched = g.with_signature(
        {e.key: switch_fn[e.u] * e.sign * switch_fn[e.v] for e in g.edges}
    )
    return SwitchingResult(
        graph=switched,
        switch_fn=tuple(switch_fn),
        tree_edges=tuple((min(u, v), max(u, v)) for u, v in tree),
    )


def cycle_sign_products(
    g: SignedGraph, cycles: Optional[List[List[int]]] = None
) -> List[int]:
    """Sign product around each cycle (default: a fundamental cycle basis)."""
    if cycles is None:
        cycles = nx.cycle_basis(g.to_networkx())
    products = []
    for cycle in cycles:
        product = 1
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            product *= g.sign(a, b)
        products.append(product)
    return products


def balance_check(g: SignedGraph) -> BalanceVerdict:
    """Two-color the graph, flipping color across negative edges.

    Returns:
        A verdict with the Harary bipartition (vertices colored like vertex 0) when
        balanced, or a cycle with negative sign product when not.

    Raises:
        DisconnectedGraphError: if the underlying graph is not connected.
    """
    _require_connected(g)
    graph = g.to_networkx()
    color: Dict[int, int] = {0: 1}
    parent: Dict[int, Optional[int]] = {0: None}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in sorted(graph.neighbors(u)):
            expected = color[u] * graph.edges[u, v]["sign"]
            if v not in color:
                color[v] = expected
                parent[v] = u
                queue.append(v)
            elif color[v] != expected:
                cycle = _tree_cycle(parent, u, v)
                logger.debug(f"Balance conflict on edge ({u}, {v}); witness {cycle}")
                return BalanceVerdict(balanced=False, witness_cycle=cycle)
    return BalanceVerdict(
        balanced=True, bipartition=frozenset(i for i, c in color.items() if c > 0)
    )


def _tree_cycle(parent: Dict[int, Optional[int]], u: int, v: int) -> Tuple[Edge, ...]:
    def path_to_root(x: int) -> List[int]:
        path = [x]
        while (p := parent[path[-1]]) is not None:
            path.append(p)
        return path

    u_path, v_path = path_to_root(u), path_to_root(v)
    v_ancestors = set(v_path)
    lca = next(x for x in u_path if x in v_ancestors)
    walk = u_path[: u_path.index(lca) + 1] + list(reversed(v_path[: v_path.index(lca)]))
    closed = walk + [u]
    return tuple((min(a, b), max(a, b)) for a, b in zip(closed, closed[1:]))


# --------------------------------------------------------------------------
# Metric scaffolding
# --------------------------------------------------------------------------


def hop_diameter(g: SignedGraph) -> int:
    """Largest unweighted shortest-path hop count in the underlying graph."""
    _require_connected(g)
    if g.n == 1:
        return 0
    return nx.diameter(g.to_networkx())


def find_negative_edges_sharing_cycle(g: SignedGraph) -> Optional[Tuple[Edge, Edge]]:
    """First pair of distinct negative edges that lie on a common cycle, if any.

    Two distinct edges lie on a common simple cycle exactly when they belong to the same
    biconnected component of the underlying graph.
    """
    negative = {e.key for e in g.negative_edges}
    if len(negative) < 2:
        return None
    for block in nx.biconnected_component_edges(g.to_networkx()):
        in_block = sorted({(min(a, b), max(a, b)) for a, b in block} & negative)
        if len(in_block) >= 2:
            return in_block[0], in_block[1]
    return None
