"""Event semantics: guarded update tables and constant intersections.

An event owns a support (the sites it may read and write) and an update
rule.  TABLE events match the current records at supported sites against
an ordered list of guards, first match wins, and replace the supported
records with the matched rule's result; no matching rule means identity.
INTERSECT events intersect each supported record with a fixed constant.
Shrink-only behaviour is checked after the fact and reported as data, not
repaired: diagnosing non-monotone writes is part of the tool's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .core import PossibilitySpace, RecordState, Subset


class EventKind(Enum):
    TABLE = "table"
    INTERSECT = "intersect"


def _sorted_items(mapping: Mapping[int, Subset]) -> tuple[tuple[int, Subset], ...]:
    return tuple(sorted(mapping.items(), key=lambda kv: kv[0]))


@dataclass(frozen=True)
class Rule:
    """One guarded case of a TABLE event.

    `guard` maps site index to the exact record required there; a site
    absent from the guard is a wildcard.  `result` maps site index to the
    replacement record; unlisted supported sites keep their record.
    """

    guard: tuple[tuple[int, Subset], ...]
    result: tuple[tuple[int, Subset], ...]

    @classmethod
    def of(cls, guard: Mapping[int, Subset], result: Mapping[int, Subset]) -> "Rule":
        return cls(_sorted_items(guard), _sorted_items(result))


@dataclass(frozen=True)
class Event:
    name: str
    support: tuple[int, ...]
    kind: EventKind
    rules: tuple[Rule, ...] = ()
    constants: tuple[tuple[int, Subset], ...] = ()

    @classmethod
    def table(cls, name: str, support: Iterable[int], rules: Iterable[Rule]) -> "Event":
        return cls(name, tuple(sorted(set(support))), EventKind.TABLE, rules=tuple(rules))

    @classmethod
    def intersect(
        cls, name: str, support: Iterable[int], constants: Mapping[int, Subset]
    ) -> "Event":
        return cls(
            name,
            tuple(sorted(set(support))),
            EventKind.INTERSECT,
            constants=_sorted_items(constants),
        )


@dataclass(frozen=True)
class MonotonicityViolation:
    """Worlds an event added back to a site record instead of removing."""

    event: str
    site: int
    added: Subset


@dataclass(frozen=True)
class UpdateOutcome:
    next: RecordState
    violations: tuple[MonotonicityViolation, ...]


def apply_event(event: Event, state: RecordState) -> UpdateOutcome:
    """Evaluate one event at one record state.

    Sites outside the support are never touched (the rule encoding cannot
    reference them), so locality holds by construction.  Violations of
    shrink-only writing are detected and returned alongside the successor
    state; callers decide whether they are fatal.
    """
    if event.kind is EventKind.INTERSECT:
        nxt = state
        for site, constant in event.constants:
            nxt = nxt.replace(site, nxt[site] & constant)
        return UpdateOutcome(nxt, ())

    nxt = state
    for rule in event.rules:
        if all(state[site].mask == required.mask for site, required in rule.guard):
            for site, replacement in rule.result:
                nxt = nxt.replace(site, replacement)
            break
    violations = []
    for site in event.support:
        added = nxt[site] - state[site]
        if added.mask:
            violations.append(MonotonicityViolation(event.name, site, added))
    return UpdateOutcome(nxt, tuple(violations))


def write_effect(event: Event, state: RecordState, site: int) -> Subset:
    """Worlds the event rules out at a site: record before minus record after."""
    if site < 0 or site >= len(state):
        raise ValueError(f"unknown site index: {site}")
    if site not in event.support:
        return state[site].space.empty()
    return state[site] - apply_event(event, state).next[site]


def independent(e: Event, f: Event) -> bool:
    """True iff the two events touch disjoint site sets."""
    return not set(e.support) & set(f.support)


@dataclass(frozen=True)
class StaticDefect:
    kind: str
    event: str
    message: str
    rule_index: int | None = None
    site: int | None = None


def validate_event_static(
    event: Event, space: PossibilitySpace, site_count: int
) -> list[StaticDefect]:
    """Schema-level defect scan for a single event.

    Reports out-of-range or unsupported site references ("locality"),
    rules made unreachable by an earlier guard that matches whenever they
    would ("shadowed_rule"), and results that cannot be shrink-only given
    an exact guard on the same site ("static_monotonicity").
    """
    defects: list[StaticDefect] = []
    support = set(event.support)

    def locality(msg: str, rule_index: int | None = None, site: int | None = None) -> None:
        defects.append(StaticDefect("locality", event.name, msg, rule_index, site))

    for site in event.support:
        if site < 0 or site >= site_count:
            locality(f"support site {site} out of range", site=site)
    if event.kind is EventKind.INTERSECT:
        constant_sites = {site for site, _ in event.constants}
        if constant_sites != support:
            locality(
                f"intersect constants cover sites {sorted(constant_sites)}, "
                f"support is {sorted(support)}"
            )
        return defects

    seen_guards: list[tuple[tuple[int, int], ...]] = []
    for idx, rule in enumerate(event.rules):
        for site, _ in rule.guard:
            if site not in support:
                locality(f"rule {idx} guards unsupported site {site}", idx, site)
        for site, _ in rule.result:
            if site not in support:
                locality(f"rule {idx} writes unsupported site {site}", idx, site)
        guard_key = tuple((site, sub.mask) for site, sub in rule.guard)
        for earlier_idx, earlier in enumerate(seen_guards):
            # an earlier guard whose constraints are a subset of this one
            # matches every state this rule would match
            if set(earlier) <= set(guard_key):
                defects.append(
                    StaticDefect(
                        "shadowed_rule",
                        event.name,
                        f"rule {idx} is shadowed by rule {earlier_idx}",
                        idx,
                    )
                )
                break
        seen_guards.append(guard_key)
        guard_map = dict(rule.guard)
        for site, replacement in rule.result:
            guarded = guard_map.get(site)
            if guarded is not None and not replacement.issubset(guarded):
                defects.append(
                    StaticDefect(
                        "static_monotonicity",
                        event.name,
                        f"rule {idx} result at site {site} adds worlds "
                        f"{(replacement - guarded).sorted_labels()} beyond its guard",
                        idx,
                        site,
                    )
                )
    return defects
