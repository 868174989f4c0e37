import random
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chronocheck import (
    Event,
    EventApplier,
    Model,
    PossibilitySpace,
    RecordState,
    Rule,
    WitnessPostcheckError,
    apply_event,
    binary_witness,
    build_influence_graphs,
    explore,
    independent,
    measure_of,
    strong_influence,
    strong_influence_oracle,
    verify_strong_witness,
    weak_influence,
)
from chronocheck.randmodels import random_model


def brute_force_weak_pairs(model, graph):
    """Oracle: all ordered pairs with a write-effect difference at some
    reachable state and shared site, by direct evaluation."""
    pairs = set()
    for e in model.events:
        for f in model.events:
            if e.name == f.name:
                continue
            shared = set(e.support) & set(f.support)
            for state in graph.distinct_states():
                shifted = apply_event(e, state).next
                for site in shared:
                    d0 = state[site] - apply_event(f, state).next[site]
                    d1 = shifted[site] - apply_event(f, shifted).next[site]
                    if d0 != d1:
                        pairs.add((e.name, f.name))
    return pairs


def test_weak_influence_gadget_witness_values(gadget):
    graph = explore(gadget)
    assert brute_force_weak_pairs(gadget, graph) == {("a", "b"), ("b", "a")}
    witness = weak_influence(gadget, graph, "a", "b")
    assert witness is not None
    assert witness.node_index == 0
    assert witness.node.state == gadget.initial
    assert witness.site == 0
    assert witness.delta_without == gadget.space.subset(["1"])
    assert witness.delta_with == gadget.space.subset(["0"])


def test_weak_influence_requires_shared_site(two_site):
    graph = explore(two_site)
    assert weak_influence(two_site, graph, "e1", "e2") is None
    assert weak_influence(two_site, graph, "e2", "e1") is None


def test_weak_influence_identity_target_has_no_edge(gadget):
    space = gadget.space
    noop = Event.table("noop", [0], [])
    model = Model(
        space, gadget.sites, gadget.initial, gadget.events + (noop,), gadget.mode
    )
    graph = explore(model)
    assert weak_influence(model, graph, "a", "noop") is None
    assert weak_influence(model, graph, "b", "noop") is None


def test_binary_witness_gadget(gadget):
    graph = explore(gadget)
    witness = weak_influence(gadget, graph, "a", "b")
    observable = binary_witness(gadget, witness)
    assert observable == gadget.space.subset(["0", "1"])
    # frozen separation check: post-b record of the full state is {0},
    # of the tightened state it is empty, so the difference within the
    # observable carries weight 1
    applier = EventApplier(gadget)
    post0 = applier.apply_name("b", witness.node.state).next[0]
    post1 = applier.apply_name(
        "b", applier.apply_name("a", witness.node.state).next
    ).next[0]
    assert measure_of((post0 & observable) ^ (post1 & observable)) == 1


def test_binary_witness_one_sided_delta():
    space = PossibilitySpace.create(["w1", "w2"])
    e = Event.table("e", [0], [Rule.of({0: space.full()}, {0: space.subset(["w2"])})])
    f = Event.table("f", [0], [Rule.of({0: space.subset(["w2"])}, {0: space.subset([])})])
    model = Model(space, ("site1",), RecordState((space.full(),)), (e, f))
    graph = explore(model)
    witness = weak_influence(model, graph, "e", "f")
    assert witness is not None
    assert witness.delta_without == space.subset([])
    assert witness.delta_with == space.subset(["w2"])
    assert binary_witness(model, witness) == space.subset(["w2"])


def test_binary_witness_fails_when_influencer_absorbs_the_difference(
    twin_intersect_model,
):
    # both events intersect with the same constant: the write effects
    # differ at the initial state, but the post-update records coincide
    # everywhere, so no observable can separate them
    model = twin_intersect_model
    graph = explore(model)
    witness = weak_influence(model, graph, "e", "f")
    assert witness is not None
    assert witness.delta_without != witness.delta_with
    with pytest.raises(WitnessPostcheckError):
        binary_witness(model, witness)
    # exhaustive confirmation: no (state, observable) pair separates
    applier = EventApplier(model)
    for state in graph.distinct_states():
        post0 = applier.apply_name("f", state).next[0]
        post1 = applier.apply_name("f", applier.apply_name("e", state).next).next[0]
        assert post0 == post1


def brute_force_strong_exists(model, graph, e_name, f_name):
    """Oracle: literal exclusive-branching search over every observable."""
    e, f = model.event(e_name), model.event(f_name)
    shared = set(e.support) & set(f.support)
    test = (
        model.space.full_mask
        if model.mode.value == "nonempty"
        else model.space.positive_mask
    )
    for state in graph.distinct_states():
        shifted = apply_event(e, state).next
        for site in shared:
            p0 = apply_event(f, state).next[site].mask
            p1 = apply_event(f, shifted).next[site].mask
            for mask in range(1 << model.space.size):
                if (
                    p0 & p1 & mask & test == 0
                    and p0 & mask & test
                    and p1 & mask & test
                ):
                    return True
    return False


def test_strong_influence_gadget_b_to_a(gadget):
    graph = explore(gadget)
    witness = strong_influence(gadget, graph, "b", "a")
    assert witness is not None
    assert witness.node.state == gadget.initial
    assert witness.site == 0
    assert witness.observable == gadget.space.subset(["0", "1"])
    assert witness.branch0 == gadget.space.subset(["0"])
    assert witness.branch1 == gadget.space.subset(["1"])
    assert verify_strong_witness(gadget, witness)


def test_strong_influence_gadget_a_to_b_absent(gadget):
    graph = explore(gadget)
    assert not brute_force_strong_exists(gadget, graph, "a", "b")
    assert strong_influence(gadget, graph, "a", "b") is None


def test_strong_influence_independent_events_none(two_site):
    graph = explore(two_site)
    assert strong_influence(two_site, graph, "e1", "e2") is None


def test_oracle_agrees_on_gadget_all_ordered_pairs(gadget):
    graph = explore(gadget)
    for e, f in permutations(gadget.event_names, 2):
        fast = strong_influence(gadget, graph, e, f)
        slow = strong_influence_oracle(gadget, graph, e, f)
        assert (fast is None) == (slow is None)


def test_oracle_agrees_on_two_site(two_site):
    graph = explore(two_site)
    for e, f in permutations(two_site.event_names, 2):
        assert strong_influence(two_site, graph, e, f) is None
        assert strong_influence_oracle(two_site, graph, e, f) is None


def test_oracle_none_when_posts_always_equal(twin_intersect_model):
    graph = explore(twin_intersect_model)
    assert strong_influence_oracle(twin_intersect_model, graph, "e", "f") is None
    assert strong_influence(twin_intersect_model, graph, "e", "f") is None


def test_oracle_refuses_large_spaces():
    space = PossibilitySpace.create([f"w{i}" for i in range(17)])
    model = Model(
        space,
        ("site1",),
        RecordState((space.full(),)),
        (Event.intersect("e", [0], {0: space.full()}),
         Event.intersect("f", [0], {0: space.full()})),
    )
    graph = explore(model)
    with pytest.raises(ValueError):
        strong_influence_oracle(model, graph, "e", "f")


def test_build_influence_graphs_two_site(two_site):
    ig = build_influence_graphs(two_site, explore(two_site))
    assert ig.weak_edges == {}
    assert ig.strong_edges == {}


def test_build_influence_graphs_gadget(gadget):
    ig = build_influence_graphs(gadget, explore(gadget))
    assert set(ig.weak_edges) == {("a", "b"), ("b", "a")}
    assert set(ig.strong_edges) == {("b", "a")}


def test_build_influence_graphs_single_event(gadget):
    model = Model(
        gadget.space, gadget.sites, gadget.initial, (gadget.events[0],), gadget.mode
    )
    ig = build_influence_graphs(model, explore(model))
    assert ig.weak_edges == {} and ig.strong_edges == {}


@given(seed=st.integers(0, 10**9))
def test_strong_witnesses_replay_soundly(seed):
    model = random_model(random.Random(seed))
    graph = explore(model)
    ig = build_influence_graphs(model, graph)
    for witness in ig.strong_edges.values():
        assert verify_strong_witness(model, witness)


@given(seed=st.integers(0, 10**9))
def test_independent_pairs_never_acquire_edges(seed):
    model = random_model(random.Random(seed))
    graph = explore(model)
    ig = build_influence_graphs(model, graph)
    for e, f in list(ig.weak_edges) + list(ig.strong_edges):
        assert not independent(model.event(e), model.event(f))


@given(seed=st.integers(0, 10**9))
def test_weak_witness_deltas_always_differ(seed):
    model = random_model(random.Random(seed))
    graph = explore(model)
    ig = build_influence_graphs(model, graph)
    for witness in ig.weak_edges.values():
        assert witness.delta_without != witness.delta_with
