"""Model file format: a single strict JSON document.

Schema::

    {
      "worlds": ["w0", "w1", ...],            # required, unique labels
      "measure": {"w0": 1, "w1": "1/3", ...}, # optional; default weight 1
      "sites": ["site1", ...],                # required, at least one
      "initial": {"site1": ["w0", ...]},      # optional; default all worlds
      "consistency_mode": "nonempty",         # or "positive_measure"
      "events": [
        {"name": "e", "kind": "intersect",
         "support": ["site1"],
         "constants": {"site1": ["w0"]}},
        {"name": "f", "kind": "table",
         "support": ["site1"],
         "rules": [
           {"guard": {"site1": ["w0", "w1"]},  # omitted site = wildcard
            "result": {"site1": ["w0"]}}
         ]}
      ]
    }

Weights may be JSON integers, decimals, or strings like "1/3"; they are
parsed as exact rationals.  Subsets are written as lists of world labels
and serialized back sorted.  Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .core import ConsistencyMode, PossibilitySpace, RecordState, Subset
from .events import Event, EventKind, Rule
from .model import Model


class ModelFormatError(ValueError):
    """Raised for syntactic or schema errors in a model file."""


def _err(path: str, message: str) -> ModelFormatError:
    return ModelFormatError(f"{path}: {message}")


def _require_keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    if not isinstance(obj, dict):
        raise _err(path, f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise _err(path, f"unknown fields: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise _err(path, f"missing required fields: {sorted(missing)}")


def _string_list(value: Any, path: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise _err(path, "expected a list of strings")
    return value


def _subset(space: PossibilitySpace, value: Any, path: str) -> Subset:
    labels = _string_list(value, path)
    try:
        return space.subset(labels)
    except ValueError as exc:
        raise _err(path, str(exc)) from None


def _site_subset_map(
    space: PossibilitySpace, sites: dict[str, int], value: Any, path: str
) -> dict[int, Subset]:
    if not isinstance(value, dict):
        raise _err(path, "expected an object mapping site names to world lists")
    out: dict[int, Subset] = {}
    for site_name, labels in value.items():
        if site_name not in sites:
            raise _err(f"{path}.{site_name}", f"unknown site: {site_name!r}")
        out[sites[site_name]] = _subset(space, labels, f"{path}.{site_name}")
    return out


def parse_model(text: str) -> Model:
    """Parse and validate a model document; raises ModelFormatError with a
    field path on any problem."""
    try:
        obj = json.loads(text, parse_float=Fraction)
    except (json.JSONDecodeError, ValueError) as exc:
        raise ModelFormatError(f"invalid JSON: {exc}") from None
    return model_from_dict(obj)


def model_from_dict(obj: Any) -> Model:
    _require_keys(
        obj,
        {"worlds", "measure", "sites", "initial", "events", "consistency_mode"},
        {"worlds", "sites", "events"},
        "$",
    )
    worlds = _string_list(obj["worlds"], "$.worlds")
    if not worlds:
        raise _err("$.worlds", "at least one world required")
    if len(set(worlds)) != len(worlds):
        raise _err("$.worlds", "world labels must be unique")

    weights = None
    if "measure" in obj:
        raw = obj["measure"]
        if not isinstance(raw, dict):
            raise _err("$.measure", "expected an object mapping worlds to weights")
        weights = {}
        for label, value in raw.items():
            if label not in worlds:
                raise _err(f"$.measure.{label}", f"unknown world: {label!r}")
            try:
                weight = Fraction(value)
            except (ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
                raise _err(f"$.measure.{label}", f"bad weight: {exc}") from None
            if weight < 0:
                raise _err(f"$.measure.{label}", "weights must be nonnegative")
            weights[label] = weight
    try:
        space = PossibilitySpace.create(worlds, weights)
    except ValueError as exc:
        raise _err("$.measure", str(exc)) from None

    sites = _string_list(obj["sites"], "$.sites")
    if not sites:
        raise _err("$.sites", "at least one site required")
    if len(set(sites)) != len(sites):
        raise _err("$.sites", "site names must be unique")
    site_index = {name: i for i, name in enumerate(sites)}

    mode = ConsistencyMode.NONEMPTY
    if "consistency_mode" in obj:
        raw_mode = obj["consistency_mode"]
        try:
            mode = ConsistencyMode(raw_mode)
        except ValueError:
            raise _err(
                "$.consistency_mode",
                f"expected 'nonempty' or 'positive_measure', got {raw_mode!r}",
            ) from None

    records = [space.full()] * len(sites)
    if "initial" in obj:
        by_site = _site_subset_map(space, site_index, obj["initial"], "$.initial")
        for idx, subset in by_site.items():
            records[idx] = subset
    initial = RecordState(tuple(records))

    if not isinstance(obj["events"], list):
        raise _err("$.events", "expected a list")
    events: list[Event] = []
    seen_names: set[str] = set()
    for pos, raw_event in enumerate(obj["events"]):
        path = f"$.events[{pos}]"
        _require_keys(
            raw_event,
            {"name", "kind", "support", "rules", "constants"},
            {"name", "kind", "support"},
            path,
        )
        name = raw_event["name"]
        if not isinstance(name, str) or not name:
            raise _err(f"{path}.name", "expected a nonempty string")
        if name in seen_names:
            raise _err(f"{path}.name", f"duplicate event name: {name!r}")
        seen_names.add(name)
        support_names = _string_list(raw_event["support"], f"{path}.support")
        support = []
        for site_name in support_names:
            if site_name not in site_index:
                raise _err(f"{path}.support", f"unknown site: {site_name!r}")
            support.append(site_index[site_name])
        kind = raw_event["kind"]
        if kind == EventKind.TABLE.value:
            if "constants" in raw_event:
                raise _err(path, "table events take 'rules', not 'constants'")
            raw_rules = raw_event.get("rules")
            if not isinstance(raw_rules, list):
                raise _err(f"{path}.rules", "expected a list")
            rules = []
            for rpos, raw_rule in enumerate(raw_rules):
                rpath = f"{path}.rules[{rpos}]"
                _require_keys(raw_rule, {"guard", "result"}, {"guard", "result"}, rpath)
                guard = _site_subset_map(
                    space, site_index, raw_rule["guard"], f"{rpath}.guard"
                )
                result = _site_subset_map(
                    space, site_index, raw_rule["result"], f"{rpath}.result"
                )
                rules.append(Rule.of(guard, result))
            events.append(Event.table(name, support, rules))
        elif kind == EventKind.INTERSECT.value:
            if "rules" in raw_event:
                raise _err(path, "intersect events take 'constants', not 'rules'")
            raw_constants = raw_event.get("constants")
            if raw_constants is None:
                raise _err(path, "intersect events require 'constants'")
            constants = _site_subset_map(
                space, site_index, raw_constants, f"{path}.constants"
            )
            events.append(Event.intersect(name, support, constants))
        else:
            raise _err(f"{path}.kind", f"expected 'table' or 'intersect', got {kind!r}")

    try:
        return Model(space, tuple(sites), initial, tuple(events), mode)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


def _weight_json(weight: Fraction) -> Any:
    if weight.denominator == 1:
        return int(weight)
    return str(weight)


def model_to_dict(model: Model) -> dict:
    """Canonical dictionary form; defaults (counting measure, full initial
    records, nonempty mode) are omitted."""
    out: dict[str, Any] = {"worlds": list(model.space.worlds)}
    if any(w != 1 for w in model.space.weights):
        out["measure"] = {
            label: _weight_json(weight)
            for label, weight in zip(model.space.worlds, model.space.weights)
        }
    out["sites"] = list(model.sites)
    if model.mode is not ConsistencyMode.NONEMPTY:
        out["consistency_mode"] = model.mode.value
    full = model.space.full()
    initial = {
        model.sites[i]: rec.sorted_labels()
        for i, rec in enumerate(model.initial)
        if rec != full
    }
    if initial:
        out["initial"] = initial
    events = []
    for event in model.events:
        raw: dict[str, Any] = {
            "name": event.name,
            "kind": event.kind.value,
            "support": [model.sites[i] for i in event.support],
        }
        if event.kind is EventKind.TABLE:
            raw["rules"] = [
                {
                    "guard": {
                        model.sites[i]: sub.sorted_labels() for i, sub in rule.guard
                    },
                    "result": {
                        model.sites[i]: sub.sorted_labels() for i, sub in rule.result
                    },
                }
                for rule in event.rules
            ]
        else:
            raw["constants"] = {
                model.sites[i]: sub.sorted_labels() for i, sub in event.constants
            }
        events.append(raw)
    out["events"] = events
    return out


def serialize_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def model_digest(model: Model) -> str:
    return hashlib.sha256(serialize_model(model).encode("utf-8")).hexdigest()


def load_model(path: str | Path) -> Model:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def fixture_path(name: str) -> Path:
    """Path of a bundled example model (name without the .json suffix)."""
    path = Path(str(resources.files("chronocheck").joinpath("fixtures", f"{name}.json")))
    if not path.exists():
        raise ValueError(f"no bundled fixture named {name!r}")
    return path


def load_fixture(name: str) -> Model:
    return load_model(fixture_path(name))
