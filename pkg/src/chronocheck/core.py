"""Finite possibility spaces, weighted subsets, and distributed record states.

A possibility space is an ordered list of world labels with a nonnegative
rational weight per world (all weights 1 gives the counting measure).
Subsets are immutable characteristic bit-vectors over that ordering, and a
record state is a per-site vector of subsets.  All arithmetic is exact:
weights are `fractions.Fraction`, and "measure zero" / "measure positive"
tests reduce to integer mask operations against the positive-weight mask,
so they never suffer float drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

WeightLike = Union[Fraction, int, float, str]


class ConsistencyMode(Enum):
    """How consistency of a record state is judged: bare nonemptiness of
    the feasible set, or strictly positive total weight."""

    NONEMPTY = "nonempty"
    POSITIVE_MEASURE = "positive_measure"


@dataclass(frozen=True)
class PossibilitySpace:
    """Ordered finite set of world labels with one weight per world."""

    worlds: tuple[str, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        worlds = tuple(self.worlds)
        weights = tuple(Fraction(w) for w in self.weights)
        if not worlds:
            raise ValueError("possibility space needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ValueError("world labels must be unique")
        if any(not w for w in worlds):
            raise ValueError("world labels must be nonempty strings")
        if len(weights) != len(worlds):
            raise ValueError("one weight per world required")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if sum(weights) <= 0:
            raise ValueError("total weight must be positive")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(worlds)})
        object.__setattr__(self, "full_mask", (1 << len(worlds)) - 1)
        positive = 0
        for i, w in enumerate(weights):
            if w > 0:
                positive |= 1 << i
        object.__setattr__(self, "positive_mask", positive)

    @classmethod
    def create(
        cls,
        worlds: Sequence[str],
        weights: Mapping[str, WeightLike] | None = None,
    ) -> "PossibilitySpace":
        """Build a space; omitted weights default to the counting measure."""
        if weights is None:
            ws = tuple(Fraction(1) for _ in worlds)
        else:
            unknown = set(weights) - set(worlds)
            if unknown:
                raise ValueError(f"weights refer to undeclared worlds: {sorted(unknown)}")
            ws = tuple(Fraction(weights.get(w, 1)) for w in worlds)
        return cls(tuple(worlds), ws)

    @property
    def size(self) -> int:
        return len(self.worlds)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown world label: {label!r}") from None

    def subset(self, labels: Iterable[str]) -> "Subset":
        mask = 0
        for label in labels:
            mask |= 1 << self.index_of(label)
        return Subset(self, mask)

    def from_mask(self, mask: int) -> "Subset":
        if mask & ~self.full_mask:  # type: ignore[attr-defined]
            raise ValueError("mask has bits outside the space")
        return Subset(self, mask)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, self.full_mask)  # type: ignore[attr-defined]

    def measure_mask(self, mask: int) -> Fraction:
        total = Fraction(0)
        while mask:
            low = mask & -mask
            total += self.weights[low.bit_length() - 1]
            mask ^= low
        return total

    def total_weight(self) -> Fraction:
        return self.measure_mask(self.full_mask)  # type: ignore[attr-defined]


def _same_space(a: PossibilitySpace, b: PossibilitySpace) -> bool:
    return a is b or (a.worlds == b.worlds and a.weights == b.weights)


@dataclass(frozen=True, eq=False)
class Subset:
    """Immutable subset of a space's worlds, stored as a bit mask."""

    space: PossibilitySpace
    mask: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subset):
            return NotImplemented
        return self.mask == other.mask and _same_space(self.space, other.space)

    def __hash__(self) -> int:
        return hash(self.mask)

    def _check(self, other: "Subset") -> None:
        if not _same_space(self.space, other.space):
            raise ValueError("subsets belong to different spaces")

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.mask | other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.mask & ~other.mask)

    def __xor__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.mask ^ other.mask)

    def complement(self) -> "Subset":
        return Subset(self.space, self.mask ^ self.space.full_mask)  # type: ignore[attr-defined]

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    __le__ = issubset

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.space.index_of(label) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[str]:
        for i, w in enumerate(self.space.worlds):
            if self.mask >> i & 1:
                yield w

    def labels(self) -> tuple[str, ...]:
        return tuple(self)

    def sorted_labels(self) -> list[str]:
        return sorted(self)

    def __repr__(self) -> str:
        return "Subset({" + ", ".join(self.sorted_labels()) + "})"


@dataclass(frozen=True)
class RecordState:
    """Vector of per-site records; index i holds the constraint at site i."""

    records: tuple[Subset, ...]

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, site: int) -> Subset:
        return self.records[site]

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.records)

    def replace(self, site: int, value: Subset) -> "RecordState":
        recs = list(self.records)
        recs[site] = value
        return RecordState(tuple(recs))


def feasible_set(state: RecordState) -> Subset:
    """Intersection of all site records."""
    if not state.records:
        raise ValueError("record state has no sites")
    space = state.records[0].space
    mask = space.full_mask  # type: ignore[attr-defined]
    for rec in state.records:
        mask &= rec.mask
    return Subset(space, mask)


def is_consistent(state: RecordState, mode: ConsistencyMode) -> bool:
    feasible = feasible_set(state)
    if mode is ConsistencyMode.NONEMPTY:
        return feasible.mask != 0
    return feasible.mask & feasible.space.positive_mask != 0  # type: ignore[attr-defined]


def measure_of(subset: Subset) -> Fraction:
    return subset.space.measure_mask(subset.mask)


def null_equiv(a: Subset, b: Subset) -> bool:
    """True iff the symmetric difference carries zero weight."""
    a._check(b)
    return (a.mask ^ b.mask) & a.space.positive_mask == 0  # type: ignore[attr-defined]


def information_content(state: RecordState) -> float:
    """Negative natural log of the feasible set's weight; +inf at weight 0."""
    mu = measure_of(feasible_set(state))
    if mu == 0:
        return math.inf
    return -math.log(mu)


def restrict(state: RecordState, sites: Iterable[int]) -> tuple[Subset, ...]:
    """Sub-vector of the record state on the given site indices (ascending).

    Site indices are 0-based positions into the model's site list.
    """
    picked = sorted(set(sites))
    for i in picked:
        if i < 0 or i >= len(state):
            raise ValueError(f"unknown site index: {i}")
    return tuple(state[i] for i in picked)


def sets_equal(a: Subset, b: Subset, mode: ConsistencyMode) -> bool:
    if mode is ConsistencyMode.NONEMPTY:
        return a == b
    return null_equiv(a, b)


def restriction_equal(
    a: Sequence[Subset], b: Sequence[Subset], mode: ConsistencyMode
) -> bool:
    if len(a) != len(b):
        return False
    return all(sets_equal(x, y, mode) for x, y in zip(a, b))


def states_equal(a: RecordState, b: RecordState, mode: ConsistencyMode) -> bool:
    return restriction_equal(a.records, b.records, mode)
