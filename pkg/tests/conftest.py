import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

from chronocheck import (
    Event,
    Model,
    PossibilitySpace,
    RecordState,
    Rule,
    load_fixture,
)


@pytest.fixture
def two_site():
    return load_fixture("two_site")


@pytest.fixture
def gadget():
    return load_fixture("cycle_gadget")


@pytest.fixture
def bd_flip():
    return load_fixture("bd_flip")


def make_aligned_flip_model() -> Model:
    """Two same-site tables whose branch flips line up: running either one
    first steers the other onto the matching branch, so every premise
    check stays clean while the strong influence relation is a 2-cycle."""
    space = PossibilitySpace.create(["0", "1"])
    full, s0, s1 = space.full(), space.subset(["0"]), space.subset(["1"])
    x = Event.table(
        "x",
        [0],
        [Rule.of({0: full}, {0: s0}), Rule.of({0: s0}, {0: s0}), Rule.of({0: s1}, {0: s1})],
    )
    y = Event.table(
        "y",
        [0],
        [Rule.of({0: full}, {0: s1}), Rule.of({0: s0}, {0: s0}), Rule.of({0: s1}, {0: s1})],
    )
    return Model(space, ("site1",), RecordState((full,)), (x, y))


def make_emptying_flip_model() -> Model:
    """Mutually flipping tables whose composition drives the single record
    to the empty set: a strong cycle that global consistency explains."""
    space = PossibilitySpace.create(["0", "1", "2"])
    w = space.subset
    x = Event.table(
        "x",
        [0],
        [
            Rule.of({0: space.full()}, {0: w(["0", "2"])}),
            Rule.of({0: w(["0", "2"])}, {0: w(["0", "2"])}),
            Rule.of({0: w(["1", "2"])}, {0: w(["1", "2"])}),
        ],
    )
    y = Event.table(
        "y",
        [0],
        [
            Rule.of({0: space.full()}, {0: w(["1", "2"])}),
            Rule.of({0: w(["0", "2"])}, {0: w(["0"])}),
            Rule.of({0: w(["1", "2"])}, {0: w(["1", "2"])}),
            Rule.of({0: w(["0"])}, {0: w([])}),
        ],
    )
    return Model(space, ("site1",), RecordState((space.full(),)), (x, y))


def make_twin_intersect_model() -> Model:
    """Two events intersecting the same site with the same constant: the
    second one's write effect differs with and without the first, yet the
    post-update records never differ anywhere."""
    space = PossibilitySpace.create(["w0", "w1"])
    keep = space.subset(["w1"])
    e = Event.intersect("e", [0], {0: keep})
    f = Event.intersect("f", [0], {0: keep})
    return Model(space, ("site1",), RecordState((space.full(),)), (e, f))


@pytest.fixture
def aligned_flip_model():
    return make_aligned_flip_model()


@pytest.fixture
def emptying_flip_model():
    return make_emptying_flip_model()


@pytest.fixture
def twin_intersect_model():
    return make_twin_intersect_model()
