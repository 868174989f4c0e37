"""Explicit-state exploration of the transition system over record states.

Nodes pair a record state with the set of event names executed at least
once on the way there; the pair is the dedup key.  Keeping occurrence
flags in the node identity costs up to a 2^|events| blowup but is what
lets the branch-determinacy check distinguish histories in which a given
event has or has not already fired.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    ConsistencyMode,
    RecordState,
    Subset,
    feasible_set,
    is_consistent,
    measure_of,
    states_equal,
)
from .events import MonotonicityViolation, independent
from .model import EventApplier, Model


@dataclass(frozen=True)
class Node:
    state: RecordState
    occurred: frozenset[str]


@dataclass(frozen=True)
class Edge:
    source: int
    event: str
    target: int
    violations: tuple[MonotonicityViolation, ...]


@dataclass(frozen=True)
class ExplorationLimits:
    max_nodes: int = 100_000
    max_depth: int = 64

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_depth <= 0:
            raise ValueError("exploration limits must be positive")


@dataclass(frozen=True)
class ReachabilityGraph:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    depths: tuple[int, ...]
    truncated: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.nodes)})
        seen: set[RecordState] = set()
        distinct: list[RecordState] = []
        for node in self.nodes:
            if node.state not in seen:
                seen.add(node.state)
                distinct.append(node.state)
        object.__setattr__(self, "_distinct_states", tuple(distinct))

    @property
    def initial(self) -> Node:
        return self.nodes[0]

    def index_of(self, node: Node) -> int:
        return self._index[node]  # type: ignore[attr-defined]

    def distinct_states(self) -> tuple[RecordState, ...]:
        """Record states in first-seen order, each listed once."""
        return self._distinct_states  # type: ignore[attr-defined]


def _normalize(state: RecordState) -> RecordState:
    space = state.records[0].space
    positive = space.positive_mask  # type: ignore[attr-defined]
    return RecordState(tuple(space.from_mask(r.mask & positive) for r in state))


def explore(
    model: Model,
    limits: ExplorationLimits | None = None,
    applier: EventApplier | None = None,
    normalize_null: bool = False,
) -> ReachabilityGraph:
    """Breadth-first closure of the initial node under all events.

    Events are expanded in declaration order, so two runs produce the same
    node and edge ordering.  `normalize_null` drops zero-weight worlds from
    records before dedup; it is off by default because exact guards may
    match differently on normalized states.
    """
    limits = limits or ExplorationLimits()
    applier = applier or EventApplier(model)
    init_state = _normalize(model.initial) if normalize_null else model.initial
    init = Node(init_state, frozenset())
    nodes: list[Node] = [init]
    index: dict[Node, int] = {init: 0}
    depths: list[int] = [0]
    edges: list[Edge] = []
    truncated = False
    queue: deque[int] = deque([0])
    while queue:
        src = queue.popleft()
        if depths[src] >= limits.max_depth:
            if model.events:
                truncated = True
            continue
        node = nodes[src]
        for event in model.events:
            outcome = applier.apply(event, node.state)
            nxt_state = _normalize(outcome.next) if normalize_null else outcome.next
            nxt = Node(nxt_state, node.occurred | {event.name})
            tgt = index.get(nxt)
            if tgt is None:
                if len(nodes) >= limits.max_nodes:
                    truncated = True
                    continue
                tgt = len(nodes)
                index[nxt] = tgt
                nodes.append(nxt)
                depths.append(depths[src] + 1)
                queue.append(tgt)
            edges.append(Edge(src, event.name, tgt, outcome.violations))
    return ReachabilityGraph(tuple(nodes), tuple(edges), tuple(depths), truncated)


def check_gs(graph: ReachabilityGraph, mode: ConsistencyMode) -> list[int]:
    """Indices of explored nodes whose state is not globally consistent."""
    return [
        i for i, node in enumerate(graph.nodes) if not is_consistent(node.state, mode)
    ]


@dataclass(frozen=True)
class DiamondViolation:
    state: RecordState
    e: str
    f: str
    f_then_e: RecordState
    e_then_f: RecordState


def check_diamond(
    graph: ReachabilityGraph,
    model: Model,
    mode: ConsistencyMode | None = None,
    applier: EventApplier | None = None,
) -> list[DiamondViolation]:
    """Compare both application orders of every independent pair at every
    explored state; a mismatch is a commutation failure."""
    mode = mode or model.mode
    applier = applier or EventApplier(model)
    pairs = [
        (e, f)
        for i, e in enumerate(model.events)
        for f in model.events[i + 1 :]
        if independent(e, f)
    ]
    violations: list[DiamondViolation] = []
    for state in graph.distinct_states():
        for e, f in pairs:
            f_then_e = applier.apply(e, applier.apply(f, state).next).next
            e_then_f = applier.apply(f, applier.apply(e, state).next).next
            if not states_equal(f_then_e, e_then_f, mode):
                violations.append(
                    DiamondViolation(state, e.name, f.name, f_then_e, e_then_f)
                )
    return violations


@dataclass(frozen=True)
class MonotonicityFinding:
    event: str
    site: int
    added: Subset
    state: RecordState


def check_monotonicity(graph: ReachabilityGraph) -> list[MonotonicityFinding]:
    """Union of violations recorded on edges, one entry per
    (event, site, source state)."""
    seen: set[tuple[str, int, RecordState]] = set()
    findings: list[MonotonicityFinding] = []
    for edge in graph.edges:
        for violation in edge.violations:
            src_state = graph.nodes[edge.source].state
            key = (violation.event, violation.site, src_state)
            if key not in seen:
                seen.add(key)
                findings.append(
                    MonotonicityFinding(
                        violation.event, violation.site, violation.added, src_state
                    )
                )
    return findings


@dataclass(frozen=True)
class ClockViolation:
    edge: Edge
    mu_source: Fraction
    mu_target: Fraction


def check_clock_monotone(graph: ReachabilityGraph) -> list[ClockViolation]:
    """Edges along which the feasible set gains weight, i.e. the
    information clock ticks backwards.  Empty whenever no edge violates
    shrink-only writing."""
    mus = [measure_of(feasible_set(node.state)) for node in graph.nodes]
    return [
        ClockViolation(edge, mus[edge.source], mus[edge.target])
        for edge in graph.edges
        if mus[edge.target] > mus[edge.source]
    ]
