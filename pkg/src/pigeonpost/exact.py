"""Exact optimal solvers at desk scale.

Multihop: within one weakly connected component there is always an
optimal solution in which exactly one pigeon flies at a time and each
pigeon starts where the previous one landed, i.e. the flights form a
single node walk.  A demand ``(u, v)`` is served by a walk exactly when
``u`` occurs strictly before some occurrence of ``v``.  Disjoint
components contribute independently, so the optimum is the sum over
components of the shortest covering walk, found here by a uniform-cost
search with an admissible distance bound over states
``(current node, appeared set, satisfied demand set)``.

2-hop: no walk normal form exists, so the solver iteratively deepens
over ordered flight sequences, pruning flights that make no progress and
memoizing on the logical state (satisfied demands plus, per open demand,
the set of relay nodes already holding its data).

Both searches respect an expansion budget; when it runs out they fall
back to a feasible plan and flag the result as not proven optimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from heapq import heappop, heappush

from .demand import DemandGraph, demands_within, lower_bound, weakly_connected_components
from .flightplan import Flight, verify
from .jsonutil import canonical_dumps
from .planners import PlannerResult, cycle_walk, make_result, plan_coordinator


class SearchLimitError(ValueError):
    """Instance exceeds the structural limits of the exact solvers."""


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SearchLimits:
    """Structural and effort caps for the exact searches.

    ``max_nodes`` bounds the whole graph for the 2-hop search and each
    component for the multihop search.  ``max_walk_flights`` optionally
    caps the per-component walk; the default is the always-sufficient
    ``2m - 2``.  Budgets are soft: exceeding them degrades to a feasible
    but unproven answer instead of failing.
    """

    max_nodes: int = 10
    max_demands: int = 40
    max_walk_flights: int | None = None
    expansion_budget: int = 5_000_000
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_demands <= 0 or self.expansion_budget <= 0:
            raise ValueError("search limits must be positive")
        if self.max_walk_flights is not None and self.max_walk_flights <= 0:
            raise ValueError("search limits must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("search limits must be positive")


class _Effort:
    """Shared expansion/time accounting across sub-searches."""

    def __init__(self, limits: SearchLimits):
        self.remaining = limits.expansion_budget
        self.deadline = (
            None if limits.time_budget is None else time.monotonic() + limits.time_budget
        )

    def spend(self, amount: int = 1) -> None:
        self.remaining -= amount
        if self.remaining < 0:
            raise _BudgetExhausted
        if self.deadline is not None and self.remaining % 1024 == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExhausted


def _min_covering_walk(
    nodes: list[int],
    demands: list[tuple[int, int]],
    limits: SearchLimits,
    effort: _Effort,
) -> list[int]:
    """Shortest walk over ``nodes`` serving every demand; raises on budget.

    Uniform-cost search (cost 1 per appended node) guided by a consistent
    lower bound: every not-yet-appeared node and every node that is the
    destination of an unserved demand still needs at least one append,
    and one append adds exactly one node.
    """
    m = len(nodes)
    local = {v: i for i, v in enumerate(nodes)}
    demand_count = len(demands)
    full = (1 << demand_count) - 1
    all_nodes_mask = (1 << m) - 1
    max_flights = limits.max_walk_flights
    if max_flights is None:
        max_flights = 2 * m - 2

    # For each appended node x: demands (u, x) it may serve, as
    # (demand bit, source bit) pairs, plus masks for the distance bound.
    serves: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    dst_of: list[int] = [0] * demand_count
    sources_mask = 0
    for i, (u, v) in enumerate(demands):
        serves[local[v]].append((1 << i, 1 << local[u]))
        dst_of[i] = 1 << local[v]
        sources_mask |= 1 << local[u]

    def bound(appeared: int, satisfied: int) -> int:
        needed = all_nodes_mask & ~appeared
        unsat = full & ~satisfied
        while unsat:
            low = unsat & -unsat
            needed |= dst_of[low.bit_length() - 1]
            unsat &= unsat - 1
        return needed.bit_count()

    heap: list[tuple[int, int, int, tuple[int, int, int]]] = []
    parent: dict[tuple[int, int, int], tuple[tuple[int, int, int] | None, int]] = {}
    best_g: dict[tuple[int, int, int], int] = {}
    tie = 0

    start_mask = sources_mask  # an optimal walk always starts at a source
    while start_mask:
        low = start_mask & -start_mask
        v = low.bit_length() - 1
        state = (v, 1 << v, 0)
        best_g[state] = 0
        parent[state] = (None, v)
        heappush(heap, (bound(1 << v, 0), 0, tie, state))
        tie += 1
        start_mask &= start_mask - 1

    goal: tuple[int, int, int] | None = None
    while heap:
        f, g, _, state = heappop(heap)
        if best_g.get(state, -1) != g:
            continue
        current, appeared, satisfied = state
        if satisfied == full:
            goal = state
            break
        effort.spend()
        if g >= max_flights:
            continue
        for nxt in range(m):
            if nxt == current:
                continue
            gain = 0
            for demand_bit, source_bit in serves[nxt]:
                if not satisfied & demand_bit and appeared & source_bit:
                    gain |= demand_bit
            if not gain and (appeared >> nxt) & 1:
                continue  # re-appending without progress never helps
            new_state = (nxt, appeared | (1 << nxt), satisfied | gain)
            new_g = g + 1
            if best_g.get(new_state, new_g + 1) <= new_g:
                continue
            best_g[new_state] = new_g
            parent[new_state] = (state, nxt)
            heappush(
                heap,
                (new_g + bound(new_state[1], new_state[2]), new_g, tie, new_state),
            )
            tie += 1

    if goal is None:
        # The cycle walk is always feasible within 2m - 2 flights, so an
        # exhausted heap means the caller capped the walk too tightly.
        raise SearchLimitError("walk cap excludes every feasible covering walk")

    walk_local: list[int] = []
    state: tuple[int, int, int] | None = goal
    while state is not None:
        prev, node = parent[state]
        walk_local.append(node)
        state = prev
    return [nodes[i] for i in reversed(walk_local)]


def optimal_multihop(g: DemandGraph, limits: SearchLimits = SearchLimits()) -> PlannerResult:
    """Provably minimal multihop plan, solved per component.

    Components whose search exhausts the budget fall back to the cycle
    plan and the result is flagged as not proven optimal.
    """
    partition = weakly_connected_components(g)
    effort = _Effort(limits)
    flights: list[Flight] = []
    proven = True
    for comp in partition.components:
        nodes = sorted(comp)
        comp_demands = demands_within(g, comp)
        if len(nodes) > limits.max_nodes:
            raise SearchLimitError(
                f"component with {len(nodes)} nodes exceeds max_nodes={limits.max_nodes}"
            )
        if len(comp_demands) > limits.max_demands:
            raise SearchLimitError(
                f"component with {len(comp_demands)} demands exceeds "
                f"max_demands={limits.max_demands}"
            )
        try:
            walk = _min_covering_walk(nodes, comp_demands, limits, effort)
        except _BudgetExhausted:
            walk = cycle_walk(nodes)
            proven = False
        flights.extend(Flight(a, b) for a, b in zip(walk, walk[1:]))
    return make_result(g, flights, "multihop", "exact", proven_optimal=proven)


class _TwoHopSearch:
    """Depth-first search for a feasible 2-hop plan of exactly ``k`` flights."""

    def __init__(self, g: DemandGraph, effort: _Effort):
        self.effort = effort
        self.demands = sorted(g.demands)
        self.demand_index = {d: i for i, d in enumerate(self.demands)}
        self.full = (1 << len(self.demands)) - 1
        self.by_src: dict[int, list[tuple[int, int]]] = {}
        self.by_dst: dict[int, list[tuple[int, int]]] = {}
        for i, (u, v) in enumerate(self.demands):
            self.by_src.setdefault(u, []).append((i, v))
            self.by_dst.setdefault(v, []).append((i, u))
        self.universe = [
            (a, b) for a in range(g.n) for b in range(g.n) if a != b
        ]

    def find_plan(self, k: int) -> list[tuple[int, int]] | None:
        self.memo: dict[tuple[int, tuple[int, ...]], int] = {}
        self.prefix: list[tuple[int, int]] = []
        if self._dfs(0, k, 0, [0] * len(self.demands)):
            return list(self.prefix)
        return None

    def _distance_bound(self, satisfied: int, pending: list[int]) -> int:
        arrivals = 0
        departures = 0
        for i, (u, v) in enumerate(self.demands):
            if not (satisfied >> i) & 1:
                arrivals |= 1 << v
                if pending[i] == 0:
                    departures |= 1 << u
        return max(arrivals.bit_count(), departures.bit_count())

    def _dfs(self, depth: int, k: int, satisfied: int, pending: list[int]) -> bool:
        if satisfied == self.full:
            return True
        if depth + self._distance_bound(satisfied, pending) > k:
            return False
        key = (satisfied, tuple(pending))
        seen = self.memo.get(key)
        if seen is not None and seen <= depth:
            return False
        self.memo[key] = depth

        for a, b in self.universe:
            served = 0
            direct = self.demand_index.get((a, b))
            if direct is not None and not (satisfied >> direct) & 1:
                served |= 1 << direct
            for i, _u in self.by_dst.get(b, ()):
                if not ((satisfied | served) >> i) & 1 and (pending[i] >> a) & 1:
                    served |= 1 << i
            new_satisfied = satisfied | served
            new_pending: list[int] | None = None
            for i, v in self.by_src.get(a, ()):
                if v != b and not (new_satisfied >> i) & 1 and not (pending[i] >> b) & 1:
                    if new_pending is None:
                        new_pending = list(pending)
                    new_pending[i] |= 1 << b
            if not served and new_pending is None:
                continue  # neither serves nor opens a relay: dead weight
            if new_pending is None:
                new_pending = list(pending)
            while served:
                low = served & -served
                new_pending[low.bit_length() - 1] = 0
                served &= served - 1
            self.effort.spend()
            self.prefix.append((a, b))
            if self._dfs(depth + 1, k, new_satisfied, new_pending):
                return True
            self.prefix.pop()
        return False


def optimal_twohop(g: DemandGraph, limits: SearchLimits = SearchLimits()) -> PlannerResult:
    """Provably minimal 2-hop plan via iterative deepening.

    Flight counts run from the universal lower bound up to the
    coordinator plan's count, which is itself a feasible 2-hop solution;
    the first feasible count is optimal.  On budget exhaustion the
    coordinator plan is returned unproven.
    """
    if g.n > limits.max_nodes:
        raise SearchLimitError(f"n={g.n} exceeds max_nodes={limits.max_nodes}")
    if len(g.demands) > limits.max_demands:
        raise SearchLimitError(
            f"{len(g.demands)} demands exceed max_demands={limits.max_demands}"
        )

    fallback = plan_coordinator(g)
    bound = lower_bound(g).overall
    effort = _Effort(limits)
    search = _TwoHopSearch(g, effort)
    try:
        for k in range(bound, fallback.count):
            found = search.find_plan(k)
            if found is not None:
                flights = [Flight(a, b) for a, b in found]
                return make_result(g, flights, "twohop", "exact", proven_optimal=True)
    except _BudgetExhausted:
        return PlannerResult(
            plan=fallback.plan,
            mode="twohop",
            algorithm="exact",
            count=fallback.count,
            lower_bound=fallback.lower_bound,
            ratio=fallback.ratio,
            proven_optimal=False,
            coordinators=fallback.coordinators,
        )
    # Nothing below the coordinator count is feasible, so it is optimal.
    return PlannerResult(
        plan=fallback.plan,
        mode="twohop",
        algorithm="exact",
        count=fallback.count,
        lower_bound=fallback.lower_bound,
        ratio=fallback.ratio,
        proven_optimal=True,
        coordinators=fallback.coordinators,
    )


@dataclass(frozen=True)
class OptimalityCertificate:
    """Machine-checkable record that a result is verified and bound-consistent."""

    mode: str
    count: int
    lower_bound: int
    tight: bool
    valid: bool

    def to_json(self) -> str:
        return canonical_dumps(self.to_json_dict())

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "count": self.count,
            "lower_bound": self.lower_bound,
            "tight": self.tight,
            "valid": self.valid,
        }


def certify(g: DemandGraph, result: PlannerResult) -> OptimalityCertificate:
    """Re-verify a proven-optimal result and re-check it against the bound.

    An invalid certificate signals a solver bug: either the plan fails
    its own verifier or the claimed count undercuts the component-wise
    lower bound.
    """
    if not result.proven_optimal:
        raise ValueError("certificates are only issued for proven-optimal results")
    bound = lower_bound(g).component_total
    report = verify(result.mode, g, result.plan)
    valid = (
        report.satisfied
        and result.count == result.plan.count
        and result.count >= bound
    )
    return OptimalityCertificate(
        mode=result.mode,
        count=result.count,
        lower_bound=bound,
        tight=result.count == bound,
        valid=valid,
    )
