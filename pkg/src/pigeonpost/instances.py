"""Built-in demand-graph fixtures and deterministic generators."""

from __future__ import annotations

import random

from .demand import DemandGraph


def demo_graph() -> DemandGraph:
    """The showcase instance used throughout the docs and tests.

    Three pure sources (0..2) and three pure destinations (3..5); node 0
    carries three demands, so the coordinator algorithm gathers through
    it and serves everything with five pigeons against a lower bound of
    three.
    """
    return DemandGraph.from_pairs(
        6, [(0, 3), (0, 4), (0, 5), (1, 4), (1, 5), (2, 3)]
    )


def cycle_graph(n: int) -> DemandGraph:
    """Cyclic demand: node i wants to reach node (i + 1) mod n."""
    if n < 2:
        raise ValueError("cycle demand needs at least two nodes")
    return DemandGraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int) -> DemandGraph:
    """Node 0 sends to every other node."""
    if n < 1:
        raise ValueError("star demand needs at least one node")
    return DemandGraph.from_pairs(n, [(0, j) for j in range(1, n)])


def random_graph(n: int, p: float, seed: int) -> DemandGraph:
    """G(n, p) over ordered pairs; identical seeds give identical graphs."""
    if n < 0:
        raise ValueError("node count must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("demand probability must be in [0, 1]")
    rng = random.Random(seed)
    demands = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < p
    ]
    return DemandGraph.from_pairs(n, demands)
