"""Runtime model: a possibility space, named sites, an initial record
state, an event list, and the consistency mode everything is judged in."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import ConsistencyMode, PossibilitySpace, RecordState, Subset, _same_space
from .events import Event, EventKind, StaticDefect, UpdateOutcome, apply_event, validate_event_static


@dataclass(frozen=True)
class Model:
    space: PossibilitySpace
    sites: tuple[str, ...]
    initial: RecordState
    events: tuple[Event, ...]
    mode: ConsistencyMode = ConsistencyMode.NONEMPTY

    def __post_init__(self) -> None:
        if not self.sites:
            raise ValueError("a model needs at least one site")
        if len(set(self.sites)) != len(self.sites):
            raise ValueError("site names must be unique")
        if len(self.initial) != len(self.sites):
            raise ValueError("initial record state must cover every site")
        for rec in self.initial:
            if not _same_space(rec.space, self.space):
                raise ValueError("initial records must live in the model's space")
        names = [e.name for e in self.events]
        if len(set(names)) != len(names):
            raise ValueError("event names must be unique")
        n = len(self.sites)
        for event in self.events:
            hard = [
                d
                for d in validate_event_static(event, self.space, n)
                if d.kind == "locality"
            ]
            if hard:
                raise ValueError(f"event {event.name}: {hard[0].message}")
            for sub in self._event_subsets(event):
                if not _same_space(sub.space, self.space):
                    raise ValueError(
                        f"event {event.name} references a foreign possibility space"
                    )
        object.__setattr__(self, "_by_name", {e.name: e for e in self.events})
        object.__setattr__(self, "_site_index", {s: i for i, s in enumerate(self.sites)})

    @staticmethod
    def _event_subsets(event: Event) -> Iterable[Subset]:
        if event.kind is EventKind.INTERSECT:
            for _, sub in event.constants:
                yield sub
        else:
            for rule in event.rules:
                for _, sub in rule.guard:
                    yield sub
                for _, sub in rule.result:
                    yield sub

    @property
    def event_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.events)

    def event(self, name: str) -> Event:
        try:
            return self._by_name[name]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown event: {name!r}") from None

    def site_index(self, name: str) -> int:
        try:
            return self._site_index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown site: {name!r}") from None

    def site_name(self, index: int) -> str:
        return self.sites[index]

    def static_defects(self) -> list[StaticDefect]:
        """Soft defects (shadowed rules, non-shrinking results) per event."""
        out: list[StaticDefect] = []
        for event in self.events:
            out.extend(validate_event_static(event, self.space, len(self.sites)))
        return out


class EventApplier:
    """Memoizes apply_event per (event, record state) for one model."""

    def __init__(self, model: Model) -> None:
        self.model = model
        self._cache: dict[tuple[str, RecordState], UpdateOutcome] = {}

    def apply(self, event: Event, state: RecordState) -> UpdateOutcome:
        key = (event.name, state)
        outcome = self._cache.get(key)
        if outcome is None:
            outcome = apply_event(event, state)
            self._cache[key] = outcome
        return outcome

    def apply_name(self, event_name: str, state: RecordState) -> UpdateOutcome:
        return self.apply(self.model.event(event_name), state)
