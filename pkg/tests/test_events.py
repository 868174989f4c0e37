import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chronocheck import (
    Event,
    PossibilitySpace,
    RecordState,
    Rule,
    apply_event,
    independent,
    validate_event_static,
    write_effect,
)
from chronocheck.randmodels import random_model

# independent re-statement of the bundled gadget's update tables, used as
# the oracle for the event-evaluation tests below
GADGET_A = {
    frozenset({"0", "1"}): frozenset({"0"}),
    frozenset({"0"}): frozenset({"1"}),
    frozenset({"1"}): frozenset({"1"}),
}
GADGET_B = {
    frozenset({"0", "1"}): frozenset({"0"}),
    frozenset({"0"}): frozenset(),
    frozenset({"1"}): frozenset({"1"}),
}


def gadget_table_apply(table, record: frozenset) -> frozenset:
    return table.get(record, record)


def record_of(model, state) -> frozenset:
    return frozenset(state[0].labels())


def test_gadget_event_a_tightens_full_record(gadget):
    a = gadget.event("a")
    outcome = apply_event(a, gadget.initial)
    assert record_of(gadget, outcome.next) == gadget_table_apply(
        GADGET_A, frozenset({"0", "1"})
    )
    assert outcome.next[0] == gadget.space.subset(["0"])
    assert outcome.violations == ()


def test_gadget_event_b_may_empty_the_record(gadget):
    b = gadget.event("b")
    state = RecordState((gadget.space.subset(["0"]),))
    outcome = apply_event(b, state)
    assert record_of(gadget, outcome.next) == gadget_table_apply(GADGET_B, frozenset({"0"}))
    assert outcome.next[0].is_empty
    # the empty set is a subset of {0}: shrink-only, no violation
    assert outcome.violations == ()


def test_empty_support_event_is_identity(gadget):
    noop = Event.table("noop", [], [])
    outcome = apply_event(noop, gadget.initial)
    assert outcome.next == gadget.initial
    assert outcome.violations == ()


def test_gadget_event_a_violates_monotonicity_at_singleton(gadget):
    a = gadget.event("a")
    state = RecordState((gadget.space.subset(["0"]),))
    outcome = apply_event(a, state)
    expected = gadget_table_apply(GADGET_A, frozenset({"0"}))
    assert record_of(gadget, outcome.next) == expected == frozenset({"1"})
    assert len(outcome.violations) == 1
    violation = outcome.violations[0]
    assert violation.event == "a"
    assert violation.site == 0
    assert violation.added == gadget.space.subset(["1"])


def test_unmatched_guard_means_identity(gadget):
    a = gadget.event("a")
    state = RecordState((gadget.space.empty(),))
    outcome = apply_event(a, state)
    assert outcome.next == state
    assert outcome.violations == ()


def test_write_effect_gadget_b_at_full(gadget):
    post = gadget_table_apply(GADGET_B, frozenset({"0", "1"}))
    expected = frozenset({"0", "1"}) - post
    assert expected == frozenset({"1"})
    assert write_effect(gadget.event("b"), gadget.initial, 0) == gadget.space.subset(
        sorted(expected)
    )


def test_write_effect_outside_support_is_empty(two_site):
    e1 = two_site.event("e1")
    assert write_effect(e1, two_site.initial, 1).is_empty


def test_write_effect_of_identity_event_is_empty(gadget):
    noop = Event.table("noop", [0], [])
    assert write_effect(noop, gadget.initial, 0).is_empty


def test_write_effect_unknown_site(gadget):
    with pytest.raises(ValueError):
        write_effect(gadget.event("a"), gadget.initial, 5)


def test_independence_is_support_disjointness(two_site, gadget):
    assert independent(two_site.event("e1"), two_site.event("e2"))
    assert not independent(gadget.event("a"), gadget.event("b"))
    assert not independent(gadget.event("a"), gadget.event("a"))


def test_validate_static_locality_defect():
    space = PossibilitySpace.create(["0", "1"])
    rogue = Event.table(
        "rogue", [0], [Rule.of({0: space.full()}, {1: space.subset(["0"])})]
    )
    defects = validate_event_static(rogue, space, 2)
    assert [d.kind for d in defects] == ["locality"]


def test_validate_static_shadowed_rule():
    space = PossibilitySpace.create(["0", "1"])
    event = Event.table(
        "dup",
        [0],
        [
            Rule.of({0: space.full()}, {0: space.subset(["0"])}),
            Rule.of({0: space.full()}, {0: space.subset(["1"])}),
        ],
    )
    kinds = [d.kind for d in validate_event_static(event, space, 1)]
    assert "shadowed_rule" in kinds


def test_validate_static_wildcard_shadows_everything():
    space = PossibilitySpace.create(["0", "1"])
    event = Event.table(
        "wild",
        [0],
        [
            Rule.of({}, {0: space.subset(["0"])}),
            Rule.of({0: space.full()}, {0: space.subset(["1"])}),
        ],
    )
    kinds = [d.kind for d in validate_event_static(event, space, 1)]
    assert "shadowed_rule" in kinds


def test_validate_static_monotonicity_defect():
    space = PossibilitySpace.create(["0", "1"])
    event = Event.table(
        "flip", [0], [Rule.of({0: space.subset(["0"])}, {0: space.subset(["1"])})]
    )
    defects = validate_event_static(event, space, 1)
    assert [d.kind for d in defects] == ["static_monotonicity"]


@given(seed=st.integers(0, 10**9))
def test_locality_sites_outside_support_never_change(seed):
    rng = random.Random(seed)
    model = random_model(rng)
    state = model.initial
    for event in model.events:
        outcome = apply_event(event, state)
        for site in range(len(model.sites)):
            if site not in event.support:
                assert outcome.next[site] == state[site]
        state = outcome.next


@given(seed=st.integers(0, 10**9))
def test_apply_event_is_deterministic(seed):
    rng = random.Random(seed)
    model = random_model(rng)
    for event in model.events:
        assert apply_event(event, model.initial) == apply_event(event, model.initial)


@given(seed=st.integers(0, 10**9))
def test_write_effect_is_always_within_the_record(seed):
    rng = random.Random(seed)
    model = random_model(rng)
    for event in model.events:
        for site in range(len(model.sites)):
            effect = write_effect(event, model.initial, site)
            assert effect.issubset(model.initial[site])
            if site not in event.support:
                assert effect.is_empty


@given(seed=st.integers(0, 10**9))
def test_intersect_events_are_idempotent(seed):
    rng = random.Random(seed)
    model = random_model(rng, intersect_prob=1.0)
    state = model.initial
    for event in model.events:
        once = apply_event(event, state).next
        twice = apply_event(event, once).next
        assert once == twice
