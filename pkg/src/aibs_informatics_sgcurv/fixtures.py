"""Reference signed graphs with known reference values, and the seeded random corpus.

Reference vertices are 0-based; ``label_edge`` converts the 1-based labels used when the
values were tabulated.
"""

from __future__ import annotations

__all__ = [
    "ReferenceValues",
    "ReferenceCase",
    "CorpusInstance",
    "label_edge",
    "signed_graph_from_labels",
    "triangle_example",
    "TRIANGLE_EXAMPLE_EPSILON",
    "TRIANGLE_EXAMPLE_PINV",
    "TRIANGLE_EXAMPLE_OMEGA",
    "TRIANGLE_EXAMPLE_RESISTANCE",
    "reference_cases",
    "get_reference_case",
    "random_signed_graph",
    "random_corpus",
    "random_tree_like_graph",
]

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple, overload

import numpy as np
from aibs_informatics_core.utils.logging import get_logger

from aibs_informatics_sgcurv.exceptions import SignedGraphError
from aibs_informatics_sgcurv.repelling import consensus_index
from aibs_informatics_sgcurv.signed_graph import (
    Edge,
    SignedEdge,
    SignedGraph,
    find_negative_edges_sharing_cycle,
    is_positive_connected,
)

logger = get_logger(__name__)

WEIGHT_RANGE = (0.5, 2.0)
MAX_REJECTIONS = 1000


def label_edge(i: int, j: int) -> Edge:
    """1-based labels ``(i, j)`` to a normalized 0-based edge."""
    return (min(i, j) - 1, max(i, j) - 1)


def signed_graph_from_labels(
    n: int, edges: Sequence[Tuple[int, int]], negative: Sequence[Tuple[int, int]]
) -> SignedGraph:
    """Unit-weight graph on 1-based labels; edges listed in ``negative`` get sign −1."""
    negative_keys = {label_edge(*e) for e in negative}
    return SignedGraph.from_edges(
        n, [(*label_edge(*e), -1 if label_edge(*e) in negative_keys else 1) for e in edges]
    )


def _complete(n: int) -> List[Tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


# --------------------------------------------------------------------------
# Reference values
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceValues:
    """Tabulated values at one ε, printed to 4 decimal places; "≈ 0" entries are 0.0.

    Attributes:
        epsilon: ε.
        tau: Node curvature per 0-based vertex.
        theta: τ-weighted edge curvature per 0-based edge.
        lambda_corr: Negative-edge correction per 0-based edge.
        tol: Tolerance on printed values.
        zero_tol: Tolerance on entries printed as "≈ 0".
        unenforced: Edges whose tabulated θ and Λ contradict the rest of the row; they
            are reported but never fail.
    """

    epsilon: float
    tau: Dict[int, float] = field(default_factory=dict)
    theta: Dict[Edge, float] = field(default_factory=dict)
    lambda_corr: Dict[Edge, float] = field(default_factory=dict)
    tol: float = 2e-3
    zero_tol: float = 5e-3
    unenforced: FrozenSet[Edge] = frozenset()


@dataclass(frozen=True)
class ReferenceCase:
    name: str
    tag: str
    graph: SignedGraph
    consensus: float
    values: Tuple[ReferenceValues, ...]
    consensus_tol: float = 1e-3


def _tau(**labels: float) -> Dict[int, float]:
    # keys are "v1".."vN"
    return {int(k[1:]) - 1: v for k, v in labels.items()}


def _edges(values: Dict[Tuple[int, int], float]) -> Dict[Edge, float]:
    return {label_edge(*e): v for e, v in values.items()}


def _cycle3() -> ReferenceCase:
    graph = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], [(1, 3)])
    lam = _edges({(1, 2): 0.0, (2, 3): 0.0, (1, 3): 2.0})
    return ReferenceCase(
        name="3-cycle, negative edge (1,3)",
        tag="c3",
        graph=graph,
        consensus=0.5,
        values=(
            ReferenceValues(
                0.2,
                _tau(v1=1.125, v2=-0.5625, v3=1.125),
                _edges({(1, 2): 0.844, (2, 3): 0.844, (1, 3): 3.7501}),
                lam,
            ),
            ReferenceValues(
                0.3,
                _tau(v1=0.8571, v2=-0.7347, v3=0.8571),
                _edges({(1, 2): 0.1399, (2, 3): 0.1399, (1, 3): 3.2857}),
                lam,
            ),
            ReferenceValues(
                0.4999,
                _tau(v1=0.0006, v2=-0.0012, v3=0.0006),
                _edges({(1, 2): 0.0, (2, 3): 0.0, (1, 3): 2.9998}),
                lam,
            ),
        ),
    )


def _cycle4() -> ReferenceCase:
    graph = signed_graph_from_labels(4, [(1, 2), (2, 3), (3, 4), (1, 4)], [(1, 4)])
    lam = _edges({(2, 3): 0.0, (1, 4): 2.0})

    def row(
        eps: float, t23: float, t14: float, th12: float, th23: float, th14: float
    ) -> ReferenceValues:
        return ReferenceValues(
            eps,
            _tau(v1=t14, v2=t23, v3=t23, v4=t14),
            _edges({(1, 2): th12, (3, 4): th12, (2, 3): th23, (1, 4): th14}),
            lam,
        )

    return ReferenceCase(
        name="4-cycle, negative edge (1,4)",
        tag="c4",
        graph=graph,
        consensus=0.33329,
        values=(
            row(0.1, -0.2569, 1.156, 0.1985, -0.8991, 3.2789),
            row(0.2, -0.4211, 0.8421, -1.4387, -1.1229, 2.8491),
            row(0.3332, -0.0012, 0.0012, -3.9964, 0.0, 2.6664),
        ),
    )


def _k4_cases() -> List[ReferenceCase]:
    k4 = _complete(4)
    one_negative = ReferenceCase(
        name="K4, negative edge (1,4)",
        tag="k4",
        graph=signed_graph_from_labels(4, k4, [(1, 4)]),
        consensus=0.9999,
        values=(
            ReferenceValues(
                0.5,
                _tau(v1=2.4242, v2=-0.4848, v3=-0.4848, v4=2.4242),
                _edges(
                    {
                        (1, 2): 4.4329,
                        (3, 4): 4.4329,
                        (2, 4): 4.4329,
                        (1, 3): 4.4329,
                        (2, 3): -3.8784,
                        (1, 4): 7.8484,
                    }
                ),
                _edges({e: (2.0 if e == (1, 4) else 0.0) for e in k4}),
            ),
        ),
    )
    matching = ReferenceCase(
        name="K4, negative edges (1,3), (2,4)",
        tag="k4",
        graph=signed_graph_from_labels(4, k4, [(1, 3), (2, 4)]),
        consensus=1.0,
        values=(
            ReferenceValues(
                0.5,
                _tau(v1=0.8889, v2=0.8889, v3=0.8889, v4=0.8889),
                _edges({e: (4.7778 if e in ((1, 3), (2, 4)) else 2.8445) for e in k4}),
                _edges({e: (2.0 if e in ((1, 3), (2, 4)) else 0.0) for e in k4}),
            ),
        ),
    )
    adjacent = ReferenceCase(
        name="K4, negative edges (1,3), (1,4)",
        tag="k4",
        graph=signed_graph_from_labels(4, k4, [(1, 3), (1, 4)]),
        consensus=0.333,
        values=(
            ReferenceValues(
                0.1,
                _tau(v1=1.7436, v2=-1.1454, v3=1.1819, v4=1.1819),
                _edges(
                    {
                        (1, 3): 5.4994,
                        (1, 4): 5.4994,
                        (2, 3): -0.7033,
                        (2, 4): -0.7033,
                        (1, 2): 1.8578,
                        (3, 4): 1.6693,
                    }
                ),
                _edges(
                    {
                        (1, 3): 2.7021,
                        (1, 4): 2.7021,
                        (2, 3): -0.7286,
                        (2, 4): -0.7286,
                        (1, 2): 0.843,
                        (3, 4): -4.7139,
                    }
                ),
            ),
        ),
    )
    # positive path 1-2-4-3; the tabulated θ(1,3) and Λ(1,3) disagree with the rest of the
    # row while their τ-part 2(τ(1)+τ(3))/Ω(1,3) agrees, so they are reported unenforced
    path_positive = ReferenceCase(
        name="K4, negative edges (1,3), (1,4), (2,3)",
        tag="k4",
        graph=signed_graph_from_labels(4, k4, [(1, 3), (1, 4), (2, 3)]),
        consensus=0.1715,
        values=(
            ReferenceValues(
                0.1,
                _tau(v1=0.8344, v2=-0.3457, v3=0.8344, v4=-0.3457),
                _edges(
                    {
                        (1, 2): -6.0546,
                        (3, 4): -6.0546,
                        (1, 4): 3.16,
                        (2, 3): 3.16,
                        (1, 3): 4.8712,
                        (2, 4): -0.4258,
                    }
                ),
                _edges(
                    {
                        (1, 2): -6.1347,
                        (3, 4): -6.1347,
                        (1, 4): 2.6556,
                        (2, 3): 2.6556,
                        (1, 3): 3.9994,
                        (2, 4): 0.3492,
                    }
                ),
                unenforced=frozenset({label_edge(1, 3)}),
            ),
        ),
    )
    # positive star at vertex 1, negative triangle on {2, 3, 4}
    star = ReferenceCase(
        name="K4, negative triangle (2,3,4)",
        tag="k4",
        graph=signed_graph_from_labels(4, k4, [(2, 3), (2, 4), (3, 4)]),
        consensus=0.3333,
        values=(
            ReferenceValues(
                0.1,
                _tau(v1=-1.4979, v2=1.037, v3=1.037, v4=1.037),
                _edges({e: (-0.717 if e[0] == 1 else 3.6518) for e in k4}),
                _edges({e: (0.0 if e[0] == 1 else 2.0) for e in k4}),
            ),
        ),
    )
    return [one_negative, matching, adjacent, path_positive, star]


def reference_cases() -> List[ReferenceCase]:
    return [_cycle3(), _cycle4(), *_k4_cases()]


@overload
def get_reference_case(name: str, raise_if_missing: Literal[True] = True) -> ReferenceCase: ...


@overload
def get_reference_case(
    name: str, raise_if_missing: Literal[False]
) -> Optional[ReferenceCase]: ...


def get_reference_case(name: str, raise_if_missing: bool = True) -> Optional[ReferenceCase]:
    """Look up a reference case by its exact name."""
    for case in reference_cases():
        if case.name == name:
            return case
    if raise_if_missing:
        raise SignedGraphError(f"No reference case named {name!r}")
    return None


# --------------------------------------------------------------------------
# Worked triangle example
# --------------------------------------------------------------------------


# fmt: off
TRIANGLE_EXAMPLE_EPSILON    = 0.25
TRIANGLE_EXAMPLE_PINV       = (
    ( 0.222, -0.111, -0.111),
    (-0.111,  1.055, -0.944),
    (-0.111, -0.944,  1.055),
)
TRIANGLE_EXAMPLE_OMEGA      = {(0, 1): 1.5, (0, 2): 1.5, (1, 2): 4.0}
TRIANGLE_EXAMPLE_RESISTANCE = 6.996
# fmt: on


def triangle_example() -> SignedGraph:
    """Unit triangle with negative edge (2,3) in 1-based labels."""
    return signed_graph_from_labels(3, [(1, 2), (1, 3), (2, 3)], [(2, 3)])


# --------------------------------------------------------------------------
# Random corpus
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusInstance:
    index: int
    graph: SignedGraph
    epsilon: float
    consensus: Optional[float]


def random_signed_graph(
    rng: np.random.Generator,
    n: int,
    density: Optional[float] = None,
    negative_fraction: Optional[float] = None,
) -> SignedGraph:
    """Random weighted signed graph whose positive subgraph is connected.

    Edges appear independently with probability ``density`` and are negative with
    probability ``negative_fraction``; weights are uniform in [0.5, 2]. Draws that are not
    positive-connected are rejected.

    Raises:
        SignedGraphError: if no positive-connected draw is found.
    """
    p = rng.uniform(0.4, 0.9) if density is None else density
    q = rng.uniform(0.1, 0.5) if negative_fraction is None else negative_fraction
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(MAX_REJECTIONS):
        edges = [
            SignedEdge(u, v, float(rng.uniform(*WEIGHT_RANGE)), -1 if rng.random() < q else 1)
            for u, v in pairs
            if rng.random() < p
        ]
        graph = SignedGraph(n=n, edges=tuple(edges))
        if is_positive_connected(graph):
            return graph
    raise SignedGraphError(
        f"No positive-connected graph after {MAX_REJECTIONS} draws (n={n}, p={p}, q={q})"
    )


def random_tree_like_graph(rng: np.random.Generator, n: int, negatives: int) -> SignedGraph:
    """Positive spanning tree plus negative edges, no two of which share a cycle."""
    order = rng.permutation(n)
    edges: Dict[Edge, SignedEdge] = {}
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(0, k)])
        key = (min(u, v), max(u, v))
        edges[key] = SignedEdge(*key, float(rng.uniform(*WEIGHT_RANGE)), 1)

    candidates = [pair for pair in itertools.combinations(range(n), 2) if pair not in edges]
    rng.shuffle(candidates)
    for u, v in candidates:
        if sum(1 for e in edges.values() if not e.is_positive) >= negatives:
            break
        trial = dict(edges)
        trial[(u, v)] = SignedEdge(u, v, float(rng.uniform(*WEIGHT_RANGE)), -1)
        candidate = SignedGraph(n=n, edges=tuple(trial.values()))
        if find_negative_edges_sharing_cycle(candidate) is None:
            edges = trial
    return SignedGraph(n=n, edges=tuple(edges.values()))


def random_corpus(
    size: int, seed: int, n_range: Tuple[int, int] = (3, 12), epsilon_fraction: float = 0.9
) -> List[CorpusInstance]:
    """Seeded corpus of positive-connected graphs with ε drawn in ``(0, 0.9·ε₀)``.

    Graphs without negative edges draw ε in (0, 1).
    """
    rng = np.random.default_rng(seed)
    corpus = []
    for index in range(size):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        graph = random_signed_graph(rng, n)
        consensus = consensus_index(graph).value
        upper = epsilon_fraction * consensus if consensus is not None else 1.0
        eps = float(rng.uniform(0.0, upper))
        corpus.append(CorpusInstance(index, graph, eps, consensus))
    logger.info(f"Built random corpus of {size} graphs from seed {seed}")
    return corpus
