"""Hardness-instance generators and the small oracles that validate them.

Two constructions map classic NP-hard problems onto pigeon planning:

* 3-CNF satisfiability to 2-hop planning.  The demand graph has one node
  per clause, two per variable (positive and negated literal), one star
  node, and gadget arms that force a direct pigeon onto every
  clause-to-literal and literal-swap edge.  Gadget arm ``i`` of a forced
  edge ``(a, b)`` consists of nodes ``u[e,i,1..3]`` with demands
  ``(u1,u2), (u1,u3), (u2,u3), (u2,a), (u3,a), (u3,b)``.  The budget is
  ``k = 12n^2 + 18nm + 27n + 39m`` for n variables and m clauses.
  Instances are deliberately too large to solve exactly; validation is
  structural, plus an executable schedule built from a satisfying
  assignment that must pass the 2-hop verifier.

* Vertex cover to multihop planning on the same node set: every
  undirected edge becomes a demand in both directions and the budget is
  ``k' = n + k - 1``.  These instances stay tiny, so the equivalence
  is testable end to end against a brute-force minimum vertex cover.

Node id layout for the 3-CNF construction: clauses ``0..m-1``, positive
literals ``m..m+n-1``, negated literals ``m+n..m+2n-1``, star ``m+2n``,
then three consecutive ids per gadget arm in forced-edge order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .demand import DemandGraph
from .flightplan import Flight, FlightPlan
from .jsonutil import canonical_dumps


class CnfError(ValueError):
    """Raised for malformed DIMACS input or non-3-CNF clauses."""


class ReductionError(ValueError):
    """Raised when a reduction's input precondition fails."""


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula; literals are signed 1-based variable indices."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise CnfError("variable count must be non-negative")
        for clause in self.clauses:
            if len(clause) != 3:
                raise CnfError(f"clause {clause} must have exactly three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range")

    def evaluate(self, assignment) -> bool:
        return all(
            any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause)
            for clause in self.clauses
        )


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS cnf; clauses may span lines and end with 0."""
    num_vars = num_clauses = None
    tokens: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise CnfError("duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"malformed problem line: {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise CnfError(f"malformed problem line: {line!r}") from exc
            continue
        if num_vars is None:
            raise CnfError("clause data before problem line")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError as exc:
            raise CnfError(f"malformed clause line: {line!r}") from exc
    if num_vars is None:
        raise CnfError("missing problem line")

    clauses: list[tuple[int, int, int]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if len(current) != 3:
                raise CnfError(f"clause {current} must have exactly three literals")
            clauses.append((current[0], current[1], current[2]))
            current = []
        else:
            current.append(tok)
    if current:
        raise CnfError("unterminated clause (missing trailing 0)")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise CnfError(
            f"header announces {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, tuple(clauses))


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph; edges stored as (min, max) pairs."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ReductionError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ReductionError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise ReductionError("edges must be normalized as (min, max)")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> UndirectedGraph:
        edges = set()
        for u, v in pairs:
            edges.add((min(u, v), max(u, v)))
        return cls(n=n, edges=frozenset(edges))

    def is_connected(self) -> bool:
        """True when all n nodes form a single component."""
        if self.n <= 1:
            return True
        adjacency: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges:
            adjacency[u].add(v)
            adjacency[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            node = stack.pop()
            for other in adjacency[node]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return len(seen) == self.n


def parse_undirected_graph(text: str) -> UndirectedGraph:
    """Parse ``{"n": <int>, "edges": [[u, v], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReductionError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ReductionError('graph document needs "n" and "edges"')
    if not isinstance(doc["n"], int) or not isinstance(doc["edges"], list):
        raise ReductionError("graph document fields have wrong types")
    return UndirectedGraph.from_pairs(doc["n"], doc["edges"])


@dataclass(frozen=True)
class ReductionOutput:
    """Generated demand graph, decision budget, and node-role annotations."""

    kind: str
    graph: DemandGraph
    budget: int
    roles: tuple[dict, ...]
    forced_edges: tuple[tuple[int, int], ...] = ()
    meta: tuple[tuple[str, int], ...] = ()

    def role_of(self, node: int) -> dict:
        return self.roles[node]

    def to_json(self) -> str:
        return canonical_dumps(self.to_json_dict())

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "budget": self.budget,
            "graph": self.graph.to_json_dict(),
            "forced_edges": [list(e) for e in self.forced_edges],
            "roles": list(self.roles),
            "meta": dict(self.meta),
        }


ARMS_PER_EDGE = "arms_per_forced_edge"


def _literal_node(num_clauses: int, num_vars: int, literal: int) -> int:
    var = abs(literal) - 1
    offset = 0 if literal > 0 else num_vars
    return num_clauses + offset + var


def reduce_3sat_to_twohop(formula: CnfFormula) -> ReductionOutput:
    """Demand graph whose 2-hop budget question encodes satisfiability.

    Forced edges (clause to each of its literals, then both directions
    between complementary literals) each receive ``2n + 4`` gadget arms.
    Duplicate literals inside a clause collapse to one demand edge, so
    the forced-edge list can be shorter than ``2n + 3m``; the emitted
    budget always uses the closed form.
    """
    n = formula.num_vars
    m = len(formula.clauses)
    star = m + 2 * n
    arms = 2 * n + 4

    demands: set[tuple[int, int]] = set()
    forced: list[tuple[int, int]] = []
    forced_seen: set[tuple[int, int]] = set()

    def force(a: int, b: int) -> None:
        if (a, b) not in forced_seen:
            forced_seen.add((a, b))
            forced.append((a, b))

    for clause_idx, clause in enumerate(formula.clauses):
        for literal in clause:
            target = _literal_node(m, n, literal)
            demands.add((clause_idx, target))
            force(clause_idx, target)
        demands.add((clause_idx, star))
    for var in range(1, n + 1):
        positive = _literal_node(m, n, var)
        negative = _literal_node(m, n, -var)
        demands.add((positive, negative))
        demands.add((negative, positive))
        force(positive, negative)
        force(negative, positive)
        demands.add((positive, star))
        demands.add((negative, star))

    roles: list[dict] = []
    for clause_idx in range(m):
        roles.append({"node": clause_idx, "role": "clause", "clause": clause_idx + 1})
    for var in range(1, n + 1):
        roles.append(
            {"node": _literal_node(m, n, var), "role": "literal", "var": var, "positive": True}
        )
    for var in range(1, n + 1):
        roles.append(
            {"node": _literal_node(m, n, -var), "role": "literal", "var": var, "positive": False}
        )
    roles.append({"node": star, "role": "star"})

    base = star + 1
    for edge_idx, (a, b) in enumerate(forced):
        for arm in range(1, arms + 1):
            u1 = base + (edge_idx * arms + (arm - 1)) * 3
            u2, u3 = u1 + 1, u1 + 2
            demands.update(
                [(u1, u2), (u1, u3), (u2, u3), (u2, a), (u3, a), (u3, b)]
            )
            for pos, node in enumerate((u1, u2, u3), start=1):
                roles.append(
                    {
                        "node": node,
                        "role": "gadget",
                        "edge": [a, b],
                        "arm": arm,
                        "pos": pos,
                    }
                )

    total_nodes = base + len(forced) * arms * 3
    budget = 12 * n * n + 18 * n * m + 27 * n + 39 * m
    roles.sort(key=lambda r: r["node"])
    return ReductionOutput(
        kind="3sat-to-twohop",
        graph=DemandGraph.from_pairs(total_nodes, demands),
        budget=budget,
        roles=tuple(roles),
        forced_edges=tuple(forced),
        meta=(
            ("num_vars", n),
            ("num_clauses", m),
            (ARMS_PER_EDGE, arms),
            ("star", star),
        ),
    )


def satisfying_assignment_plan(
    formula: CnfFormula, reduction: ReductionOutput, assignment
) -> FlightPlan:
    """Schedule certifying a satisfying assignment, ready for verification.

    Pigeon placement: one per gadget-arm chain hop (arm head to middle,
    middle to tail, tail to the forced edge's source), one per
    clause-literal occurrence, one per literal-swap direction, and one
    from each true literal (or its negation when false) to the star.
    The gadget chains fly first, then clause flights, then literal
    swaps, then the star flights, so every relay pickup precedes its
    delivery.
    """
    if reduction.kind != "3sat-to-twohop":
        raise ReductionError("witness plans exist only for the 3-CNF reduction")
    n = formula.num_vars
    m = len(formula.clauses)
    if len(assignment) != n:
        raise ReductionError(f"assignment must cover {n} variables")
    meta = dict(reduction.meta)
    star = meta["star"]
    arms = meta[ARMS_PER_EDGE]
    base = star + 1

    def arm_nodes(edge_idx: int, arm: int) -> tuple[int, int, int]:
        u1 = base + (edge_idx * arms + (arm - 1)) * 3
        return u1, u1 + 1, u1 + 2

    flights: list[Flight] = []
    for hop in range(3):
        for edge_idx, (a, _b) in enumerate(reduction.forced_edges):
            for arm in range(1, arms + 1):
                u1, u2, u3 = arm_nodes(edge_idx, arm)
                chain = (u1, u2, u3, a)
                flights.append(Flight(chain[hop], chain[hop + 1]))
    for clause_idx, clause in enumerate(formula.clauses):
        for literal in clause:
            flights.append(Flight(clause_idx, _literal_node(m, n, literal)))
    for var in range(1, n + 1):
        positive = _literal_node(m, n, var)
        negative = _literal_node(m, n, -var)
        flights.append(Flight(positive, negative))
        flights.append(Flight(negative, positive))
    for var in range(1, n + 1):
        chosen = var if assignment[var - 1] else -var
        flights.append(Flight(_literal_node(m, n, chosen), star))
    return FlightPlan(tuple(flights))


def reduce_vertex_cover_to_multihop(g: UndirectedGraph, k: int) -> ReductionOutput:
    """Bidirectional demands on the same node set; budget ``n + k - 1``."""
    if not g.edges:
        raise ReductionError("vertex cover reduction needs at least one edge")
    if not g.is_connected():
        raise ReductionError("vertex cover reduction needs a connected graph")
    demands: set[tuple[int, int]] = set()
    for u, v in g.edges:
        demands.add((u, v))
        demands.add((v, u))
    roles = tuple({"node": v, "role": "original"} for v in range(g.n))
    return ReductionOutput(
        kind="vc-to-multihop",
        graph=DemandGraph.from_pairs(g.n, demands),
        budget=g.n + k - 1,
        roles=roles,
        meta=(("cover_budget", k),),
    )


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: tuple[bool, ...] | None


def sat_bruteforce(formula: CnfFormula, max_vars: int = 20) -> SatResult:
    """Exhaustive satisfiability check; first witness in lexicographic order."""
    if formula.num_vars > max_vars:
        raise ValueError(f"{formula.num_vars} variables exceed limit {max_vars}")
    n = formula.num_vars
    for bits in range(1 << n):
        assignment = tuple(bool((bits >> i) & 1) for i in range(n))
        if formula.evaluate(assignment):
            return SatResult(True, assignment)
    return SatResult(False, None)


def min_vertex_cover_bruteforce(g: UndirectedGraph, max_nodes: int = 16) -> int:
    """Minimum cover size over all node subsets."""
    if g.n > max_nodes:
        raise ValueError(f"{g.n} nodes exceed limit {max_nodes}")
    edges = sorted(g.edges)
    for k in range(g.n + 1):
        for subset in combinations(range(g.n), k):
            chosen = set(subset)
            if all(u in chosen or v in chosen for u, v in edges):
                return k
    return g.n
