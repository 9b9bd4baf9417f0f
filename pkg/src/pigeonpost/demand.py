"""Demand graphs: the "who must talk to whom" input of every planner.

A demand graph is a directed, unweighted graph on dense node ids
``0..n-1``.  An edge ``(i, j)`` means one unit of information has to move
from node ``i`` to node ``j``.  Nodes with outgoing demand are *sources*,
nodes with incoming demand are *destinations*; a node may be both.

The JSON interchange format is ``{"n": <int>, "demands": [[src, dst], ...]}``.
Canonical serialization sorts the demand list lexicographically so that
identical graphs always produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .jsonutil import canonical_dumps


class DemandGraphError(ValueError):
    """Raised for structurally invalid demand-graph input."""


@dataclass(frozen=True)
class DemandGraph:
    """Directed unweighted demand graph on node ids ``[0, n)``.

    ``duplicates_dropped`` counts input pairs discarded by deduplication;
    it is informational and excluded from equality.
    """

    n: int
    demands: frozenset[tuple[int, int]]
    duplicates_dropped: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DemandGraphError(f"node count must be non-negative, got {self.n}")
        for src, dst in self.demands:
            if src == dst:
                raise DemandGraphError(f"self-demand ({src}, {dst}) is not allowed")
            if not (0 <= src < self.n and 0 <= dst < self.n):
                raise DemandGraphError(
                    f"demand ({src}, {dst}) out of range for n={self.n}"
                )

    @classmethod
    def from_pairs(cls, n: int, pairs) -> DemandGraph:
        """Build a validated graph from (src, dst) pairs, dropping duplicates."""
        seen: set[tuple[int, int]] = set()
        dropped = 0
        for pair in pairs:
            if not isinstance(pair, (tuple, list)) or len(pair) != 2:
                raise DemandGraphError(f"demand entry {pair!r} is not a pair")
            src, dst = pair
            if not isinstance(src, int) or not isinstance(dst, int):
                raise DemandGraphError(f"demand endpoints must be integers: {pair!r}")
            if (src, dst) in seen:
                dropped += 1
            else:
                seen.add((src, dst))
        return cls(n=n, demands=frozenset(seen), duplicates_dropped=dropped)

    def sorted_demands(self) -> list[tuple[int, int]]:
        return sorted(self.demands)

    def restricted_to(self, nodes: frozenset[int]) -> DemandGraph:
        """Same node universe, keeping only demands inside ``nodes``."""
        kept = frozenset(d for d in self.demands if d[0] in nodes and d[1] in nodes)
        return DemandGraph(n=self.n, demands=kept)

    def to_json(self) -> str:
        return canonical_dumps(self.to_json_dict())

    def to_json_dict(self) -> dict:
        return {"n": self.n, "demands": [list(d) for d in self.sorted_demands()]}


def parse_demand_graph(text: str) -> DemandGraph:
    """Parse and validate a demand graph from its JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DemandGraphError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DemandGraphError("demand graph document must be a JSON object")
    if "n" not in doc or "demands" not in doc:
        raise DemandGraphError('demand graph document needs "n" and "demands"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise DemandGraphError('"n" must be an integer')
    demands = doc["demands"]
    if not isinstance(demands, list):
        raise DemandGraphError('"demands" must be a list of [src, dst] pairs')
    return DemandGraph.from_pairs(n, demands)


@dataclass(frozen=True)
class DegreeProfile:
    """Source/destination sets and per-node total (in+out) degree."""

    sources: frozenset[int]
    destinations: frozenset[int]
    degree: tuple[int, ...]


def degree_profile(g: DemandGraph) -> DegreeProfile:
    degree = [0] * g.n
    sources = set()
    destinations = set()
    for src, dst in g.demands:
        sources.add(src)
        destinations.add(dst)
        degree[src] += 1
        degree[dst] += 1
    return DegreeProfile(
        sources=frozenset(sources),
        destinations=frozenset(destinations),
        degree=tuple(degree),
    )


@dataclass(frozen=True)
class ComponentPartition:
    """Weakly connected components of the demand graph.

    Only nodes incident to at least one demand belong to a component;
    the rest are listed in ``isolated``.  Components are ordered by their
    smallest member, which makes every downstream iteration deterministic.
    """

    components: tuple[frozenset[int], ...]
    isolated: frozenset[int]

    def component_of(self, node: int) -> frozenset[int] | None:
        for comp in self.components:
            if node in comp:
                return comp
        return None


def weakly_connected_components(g: DemandGraph) -> ComponentPartition:
    """Components of the undirected support of the demand set."""
    adjacency: dict[int, set[int]] = {}
    for src, dst in g.demands:
        adjacency.setdefault(src, set()).add(dst)
        adjacency.setdefault(dst, set()).add(src)

    seen: set[int] = set()
    components: list[frozenset[int]] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack = [start]
        comp: set[int] = set()
        while stack:
            node = stack.pop()
            if node in comp:
                continue
            comp.add(node)
            stack.extend(adjacency[node] - comp)
        seen |= comp
        components.append(frozenset(comp))

    components.sort(key=min)
    isolated = frozenset(range(g.n)) - seen
    return ComponentPartition(components=tuple(components), isolated=isolated)


def demands_within(g: DemandGraph, component: frozenset[int]) -> list[tuple[int, int]]:
    """Demands with both endpoints inside ``component``, sorted."""
    return sorted(d for d in g.demands if d[0] in component and d[1] in component)


@dataclass(frozen=True)
class PigeonLowerBound:
    """Universal lower bound on the number of pigeons.

    Every source must release at least one pigeon and every destination
    must receive at least one, so ``max(|S|, |D|)`` pigeons are always
    required.  Applying the same argument per weakly connected component
    and summing gives ``component_total``, which is at least as strong
    because components are node-disjoint.
    """

    overall: int
    per_component: tuple[int, ...]
    component_total: int

    def to_json_dict(self) -> dict:
        return {
            "overall": self.overall,
            "per_component": list(self.per_component),
            "component_total": self.component_total,
        }


def lower_bound(g: DemandGraph) -> PigeonLowerBound:
    """``max(|S|, |D|)`` globally and per weakly connected component."""
    profile = degree_profile(g)
    overall = max(len(profile.sources), len(profile.destinations))
    per_component = []
    for comp in weakly_connected_components(g).components:
        sources = len(profile.sources & comp)
        destinations = len(profile.destinations & comp)
        per_component.append(max(sources, destinations))
    return PigeonLowerBound(
        overall=overall,
        per_component=tuple(per_component),
        component_total=sum(per_component),
    )
