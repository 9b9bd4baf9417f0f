"""Flight plans and the three delivery verifiers.

A pigeon is bred at its *home* node and shipped to a *remote* node; when
released it flies straight home.  A flight plan is a totally ordered
sequence of such flights: the position of a flight in the sequence is its
time slot, and exactly one pigeon flies per slot.  Two flights with the
same endpoints at different slots are legal (parallel pigeons).

Verification answers, per demand, whether the plan delivers it under a
given routing regime:

* ``singlehop`` - a single direct flight per demand,
* ``twohop``    - direct, or one relay ``i -> w -> j`` with the pickup
  flight strictly before the delivery flight,
* ``multihop``  - a chain of flights with strictly ascending slots.

Verifiers never raise on unsatisfied demand; they report it, so planner
output can be debugged demand by demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .demand import DemandGraph
from .jsonutil import canonical_dumps


class FlightPlanError(ValueError):
    """Raised for structurally invalid flights or plan documents."""


@dataclass(frozen=True, order=True)
class Flight:
    """One pigeon: released at ``remote``, landing at its ``home`` node."""

    remote: int
    home: int

    def __post_init__(self) -> None:
        if self.remote == self.home:
            raise FlightPlanError(f"flight cannot start at its home node {self.home}")
        if self.remote < 0 or self.home < 0:
            raise FlightPlanError(f"flight endpoints must be non-negative: {self}")


@dataclass(frozen=True)
class FlightPlan:
    """Ordered flight sequence; index in ``flights`` is the time slot."""

    flights: tuple[Flight, ...]

    @classmethod
    def from_pairs(cls, pairs) -> FlightPlan:
        return cls(tuple(Flight(remote, home) for remote, home in pairs))

    @property
    def count(self) -> int:
        return len(self.flights)

    def max_node(self) -> int:
        return max((max(f.remote, f.home) for f in self.flights), default=-1)

    def to_json(self) -> str:
        return canonical_dumps(self.to_json_dict())

    def to_json_dict(self) -> dict:
        return {
            "flights": [{"remote": f.remote, "home": f.home} for f in self.flights]
        }


def parse_flight_plan(text: str) -> FlightPlan:
    """Parse a plan from ``{"flights": [{"remote": r, "home": h}, ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FlightPlanError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "flights" not in doc:
        raise FlightPlanError('plan document needs a "flights" array')
    flights = []
    for entry in doc["flights"]:
        if not isinstance(entry, dict) or "remote" not in entry or "home" not in entry:
            raise FlightPlanError(f"flight entry {entry!r} needs remote and home")
        remote, home = entry["remote"], entry["home"]
        if not isinstance(remote, int) or not isinstance(home, int):
            raise FlightPlanError(f"flight endpoints must be integers: {entry!r}")
        flights.append(Flight(remote, home))
    return FlightPlan(tuple(flights))


@dataclass(frozen=True)
class DirectWitness:
    slot: int

    def to_json_dict(self) -> dict:
        return {"kind": "direct", "slot": self.slot}


@dataclass(frozen=True)
class RelayWitness:
    via: int
    pickup_slot: int
    delivery_slot: int

    def to_json_dict(self) -> dict:
        return {
            "kind": "relay",
            "via": self.via,
            "pickup_slot": self.pickup_slot,
            "delivery_slot": self.delivery_slot,
        }


@dataclass(frozen=True)
class PathWitness:
    """Chained flights at strictly ascending slots, head-to-tail."""

    slots: tuple[int, ...]
    nodes: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {"kind": "path", "slots": list(self.slots), "nodes": list(self.nodes)}


Witness = DirectWitness | RelayWitness | PathWitness


@dataclass
class VerificationReport:
    """Per-demand delivery witnesses (or ``None``) for one regime."""

    mode: str
    pigeon_count: int
    witnesses: dict[tuple[int, int], Witness | None]

    @property
    def satisfied(self) -> bool:
        return all(w is not None for w in self.witnesses.values())

    def failures(self) -> list[tuple[int, int]]:
        return sorted(d for d, w in self.witnesses.items() if w is None)

    def to_json(self) -> str:
        return canonical_dumps(self.to_json_dict())

    def to_json_dict(self) -> dict:
        demands = []
        for (src, dst), witness in sorted(self.witnesses.items()):
            demands.append(
                {
                    "src": src,
                    "dst": dst,
                    "served": witness is not None,
                    "witness": None if witness is None else witness.to_json_dict(),
                }
            )
        return {
            "mode": self.mode,
            "pigeons": self.pigeon_count,
            "satisfied": self.satisfied,
            "demands": demands,
        }


def _check_endpoints(g: DemandGraph, plan: FlightPlan) -> None:
    if plan.max_node() >= g.n:
        raise FlightPlanError(
            f"plan references node {plan.max_node()} but graph has n={g.n}"
        )


def verify_singlehop(g: DemandGraph, plan: FlightPlan) -> VerificationReport:
    """Each demand needs its own direct flight; earliest slot is the witness."""
    _check_endpoints(g, plan)
    first_slot: dict[tuple[int, int], int] = {}
    for slot, flight in enumerate(plan.flights):
        first_slot.setdefault((flight.remote, flight.home), slot)
    witnesses: dict[tuple[int, int], Witness | None] = {}
    for demand in g.demands:
        slot = first_slot.get(demand)
        witnesses[demand] = None if slot is None else DirectWitness(slot)
    return VerificationReport("singlehop", plan.count, witnesses)


def verify_twohop(g: DemandGraph, plan: FlightPlan) -> VerificationReport:
    """Direct flight, or pickup ``(i, w)`` strictly before delivery ``(w, j)``."""
    _check_endpoints(g, plan)
    first_slot: dict[tuple[int, int], int] = {}
    arrivals: dict[int, list[tuple[int, int]]] = {}  # dst -> [(slot, via)]
    for slot, flight in enumerate(plan.flights):
        first_slot.setdefault((flight.remote, flight.home), slot)
        arrivals.setdefault(flight.home, []).append((slot, flight.remote))

    witnesses: dict[tuple[int, int], Witness | None] = {}
    for src, dst in g.demands:
        direct = first_slot.get((src, dst))
        if direct is not None:
            witnesses[(src, dst)] = DirectWitness(direct)
            continue
        best: tuple[int, int, int] | None = None  # (delivery, pickup, via)
        for delivery_slot, via in arrivals.get(dst, ()):
            pickup = first_slot.get((src, via))
            if pickup is not None and pickup < delivery_slot:
                candidate = (delivery_slot, pickup, via)
                if best is None or candidate < best:
                    best = candidate
        if best is None:
            witnesses[(src, dst)] = None
        else:
            delivery_slot, pickup, via = best
            witnesses[(src, dst)] = RelayWitness(via, pickup, delivery_slot)
    return VerificationReport("twohop", plan.count, witnesses)


def verify_multihop(g: DemandGraph, plan: FlightPlan) -> VerificationReport:
    """Time-respecting reachability via a forward sweep over the slots.

    ``carried[v]`` is the bitmask of origin nodes whose information is
    available at ``v`` so far; each flight merges its remote node's mask
    into its home node's.  Information may wait at a node indefinitely,
    so masks only ever grow.
    """
    _check_endpoints(g, plan)
    n = g.n
    carried = [1 << v for v in range(n)]
    # (node, origin) -> (slot, predecessor node), set when info first lands
    arrival: dict[tuple[int, int], tuple[int, int]] = {}
    for slot, flight in enumerate(plan.flights):
        new = carried[flight.remote] & ~carried[flight.home]
        carried[flight.home] |= new
        while new:
            low = new & -new
            origin = low.bit_length() - 1
            arrival[(flight.home, origin)] = (slot, flight.remote)
            new ^= low

    witnesses: dict[tuple[int, int], Witness | None] = {}
    for src, dst in g.demands:
        if not (carried[dst] >> src) & 1:
            witnesses[(src, dst)] = None
            continue
        slots: list[int] = []
        nodes = [dst]
        node = dst
        while node != src:
            slot, predecessor = arrival[(node, src)]
            slots.append(slot)
            nodes.append(predecessor)
            node = predecessor
        witnesses[(src, dst)] = PathWitness(
            slots=tuple(reversed(slots)), nodes=tuple(reversed(nodes))
        )
    return VerificationReport("multihop", plan.count, witnesses)


VERIFIERS = {
    "singlehop": verify_singlehop,
    "twohop": verify_twohop,
    "multihop": verify_multihop,
}


def verify(mode: str, g: DemandGraph, plan: FlightPlan) -> VerificationReport:
    try:
        verifier = VERIFIERS[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None
    return verifier(g, plan)


@dataclass(frozen=True)
class PlanStats:
    pigeon_count: int
    breeding_counts: tuple[tuple[int, int], ...]  # (home node, pigeons bred)
    release_counts: tuple[tuple[int, int], ...]  # (remote node, pigeons released)

    def bred_at(self, node: int) -> int:
        return dict(self.breeding_counts).get(node, 0)

    def released_at(self, node: int) -> int:
        return dict(self.release_counts).get(node, 0)

    def to_json_dict(self) -> dict:
        return {
            "pigeons": self.pigeon_count,
            "breeding": {str(v): c for v, c in self.breeding_counts},
            "releases": {str(v): c for v, c in self.release_counts},
        }


def plan_stats(plan: FlightPlan) -> PlanStats:
    """Pigeon count plus per-node breeding and release tallies."""
    bred: dict[int, int] = {}
    released: dict[int, int] = {}
    for flight in plan.flights:
        bred[flight.home] = bred.get(flight.home, 0) + 1
        released[flight.remote] = released.get(flight.remote, 0) + 1
    return PlanStats(
        pigeon_count=plan.count,
        breeding_counts=tuple(sorted(bred.items())),
        release_counts=tuple(sorted(released.items())),
    )
