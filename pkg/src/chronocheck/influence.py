"""Detection of weak and strong operational influence with replayable
witnesses.

Weak influence e -> f: some reachable state and shared site where running
e first changes the set of worlds f rules out there.  Strong influence
e => f: running e first flips which of two disjoint, nontrivial branch
constraints f writes on some observable at a shared site.  Witness search
is deterministic (node insertion order, then site index), so reports are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ConsistencyMode, RecordState, Subset, measure_of
from .model import EventApplier, Model
from .reachability import Node, ReachabilityGraph

ORACLE_MAX_WORLDS = 16


class WitnessPostcheckError(RuntimeError):
    """A constructed observable failed its required separation property."""


@dataclass(frozen=True)
class WeakWitness:
    e: str
    f: str
    node_index: int
    node: Node
    site: int
    delta_without: Subset
    delta_with: Subset


@dataclass(frozen=True)
class StrongWitness:
    e: str
    f: str
    node_index: int
    node: Node
    site: int
    observable: Subset
    branch0: Subset
    branch1: Subset


@dataclass
class InfluenceGraph:
    events: tuple[str, ...]
    weak_edges: dict[tuple[str, str], WeakWitness]
    strong_edges: dict[tuple[str, str], StrongWitness]


def _shared_sites(model: Model, e_name: str, f_name: str) -> list[int]:
    e, f = model.event(e_name), model.event(f_name)
    return sorted(set(e.support) & set(f.support))


def _test_mask(model: Model) -> int:
    # "is this set nonempty" in NONEMPTY mode, "does it carry weight" in
    # POSITIVE_MEASURE mode; both are a single mask intersection
    if model.mode is ConsistencyMode.NONEMPTY:
        return model.space.full_mask  # type: ignore[attr-defined]
    return model.space.positive_mask  # type: ignore[attr-defined]


def weak_influence(
    model: Model,
    graph: ReachabilityGraph,
    e_name: str,
    f_name: str,
    applier: EventApplier | None = None,
) -> WeakWitness | None:
    """First witness that executing e changes f's write effect at a shared
    site, or None.  Pairs with disjoint supports are dismissed outright."""
    shared = _shared_sites(model, e_name, f_name)
    if not shared:
        return None
    applier = applier or EventApplier(model)
    e, f = model.event(e_name), model.event(f_name)
    test = _test_mask(model)
    seen: set[RecordState] = set()
    for idx, node in enumerate(graph.nodes):
        # the first occurrence of a state precedes its duplicates, so
        # skipping repeats cannot change which witness is found first
        if node.state in seen:
            continue
        seen.add(node.state)
        base = node.state
        post_f_base = applier.apply(f, base).next
        shifted = applier.apply(e, base).next
        post_f_shifted = applier.apply(f, shifted).next
        for site in shared:
            delta_without = base[site] - post_f_base[site]
            delta_with = shifted[site] - post_f_shifted[site]
            if (delta_without.mask ^ delta_with.mask) & test:
                return WeakWitness(
                    e.name, f.name, idx, node, site, delta_without, delta_with
                )
    return None


def binary_witness(model: Model, witness: WeakWitness) -> Subset:
    """Observable built as the symmetric difference of the two write
    effects, post-verified to separate the two post-f records with
    positive weight.  Raises WitnessPostcheckError when the construction
    does not separate them, which happens exactly when the entire write
    difference consists of worlds the influencer removed itself."""
    observable = witness.delta_with ^ witness.delta_without
    applier = EventApplier(model)
    e, f = model.event(witness.e), model.event(witness.f)
    base = witness.node.state
    post0 = applier.apply(f, base).next[witness.site]
    post1 = applier.apply(f, applier.apply(e, base).next).next[witness.site]
    separation = (post0 & observable) ^ (post1 & observable)
    if measure_of(separation) == 0:
        raise WitnessPostcheckError(
            f"observable {observable.sorted_labels()} does not separate the "
            f"post-{witness.f} records at node {witness.node_index} "
            f"(site {model.site_name(witness.site)})"
        )
    return observable


def strong_influence(
    model: Model,
    graph: ReachabilityGraph,
    e_name: str,
    f_name: str,
    applier: EventApplier | None = None,
) -> StrongWitness | None:
    """First strong-influence witness in deterministic order, or None.

    For a candidate (state, site) let P0 be f's post-record without a
    prior e and P1 with one.  Some observable carries two disjoint
    nontrivial branches iff both one-sided differences P0\\P1 and P1\\P0
    are nonempty (carry weight, in measured mode): their union is then
    such an observable, and conversely any observable B with disjoint
    nontrivial branches meets both differences.  The emitted witness uses
    the canonical observable P0 xor P1.
    """
    shared = _shared_sites(model, e_name, f_name)
    if not shared:
        return None
    applier = applier or EventApplier(model)
    e, f = model.event(e_name), model.event(f_name)
    test = _test_mask(model)
    seen: set[RecordState] = set()
    for idx, node in enumerate(graph.nodes):
        if node.state in seen:
            continue
        seen.add(node.state)
        base = node.state
        post_f_base = applier.apply(f, base).next
        shifted = applier.apply(e, base).next
        post_f_shifted = applier.apply(f, shifted).next
        for site in shared:
            p0 = post_f_base[site]
            p1 = post_f_shifted[site]
            if (p0.mask & ~p1.mask) & test and (p1.mask & ~p0.mask) & test:
                observable = p0 ^ p1
                return StrongWitness(
                    e.name,
                    f.name,
                    idx,
                    node,
                    site,
                    observable,
                    p0 & observable,
                    p1 & observable,
                )
    return None


def strong_influence_oracle(
    model: Model,
    graph: ReachabilityGraph,
    e_name: str,
    f_name: str,
    applier: EventApplier | None = None,
) -> StrongWitness | None:
    """Literal brute-force witness search enumerating every observable.

    Kept deliberately naive as the independent cross-check for
    strong_influence; refuses spaces with more than ORACLE_MAX_WORLDS
    worlds because it enumerates all 2^|worlds| observables.
    """
    size = model.space.size
    if size > ORACLE_MAX_WORLDS:
        raise ValueError(
            f"oracle enumeration infeasible: {size} worlds > {ORACLE_MAX_WORLDS}"
        )
    shared = _shared_sites(model, e_name, f_name)
    if not shared:
        return None
    applier = applier or EventApplier(model)
    e, f = model.event(e_name), model.event(f_name)
    test = _test_mask(model)
    n_masks = 1 << size
    seen: set[RecordState] = set()
    for idx, node in enumerate(graph.nodes):
        if node.state in seen:
            continue
        seen.add(node.state)
        base = node.state
        post_f_base = applier.apply(f, base).next
        post_f_shifted = applier.apply(f, applier.apply(e, base).next).next
        for site in shared:
            p0 = post_f_base[site].mask
            p1 = post_f_shifted[site].mask
            both = p0 & p1
            for mask in range(n_masks):
                if (
                    both & mask & test == 0
                    and p0 & mask & test
                    and p1 & mask & test
                ):
                    observable = model.space.from_mask(mask)
                    return StrongWitness(
                        e.name,
                        f.name,
                        idx,
                        node,
                        site,
                        observable,
                        model.space.from_mask(p0 & mask),
                        model.space.from_mask(p1 & mask),
                    )
    return None


def verify_strong_witness(model: Model, witness: StrongWitness) -> bool:
    """Re-derive a strong witness from scratch and check its claims."""
    applier = EventApplier(model)
    e, f = model.event(witness.e), model.event(witness.f)
    if witness.site not in set(e.support) & set(f.support):
        return False
    base = witness.node.state
    p0 = applier.apply(f, base).next[witness.site]
    p1 = applier.apply(f, applier.apply(e, base).next).next[witness.site]
    test = _test_mask(model)
    b = witness.observable
    if (p0 & b) != witness.branch0 or (p1 & b) != witness.branch1:
        return False
    exclusive = (witness.branch0.mask & witness.branch1.mask) & test == 0
    nontrivial = bool(witness.branch0.mask & test) and bool(witness.branch1.mask & test)
    return exclusive and nontrivial


def build_influence_graphs(
    model: Model,
    graph: ReachabilityGraph,
    applier: EventApplier | None = None,
) -> InfluenceGraph:
    """Weak and strong edges for every ordered pair of distinct events."""
    applier = applier or EventApplier(model)
    names = model.event_names
    weak: dict[tuple[str, str], WeakWitness] = {}
    strong: dict[tuple[str, str], StrongWitness] = {}
    for e_name in names:
        for f_name in names:
            if e_name == f_name:
                continue
            w = weak_influence(model, graph, e_name, f_name, applier)
            if w is not None:
                weak[(e_name, f_name)] = w
            s = strong_influence(model, graph, e_name, f_name, applier)
            if s is not None:
                strong[(e_name, f_name)] = s
    return InfluenceGraph(names, weak, strong)
