"""JSON-friendly serialization of states, witnesses, violations, and the
full command report.  Field order is fixed so equal inputs produce
byte-identical documents."""

from __future__ import annotations

import json
import math
from typing import Any

from .chronology import (
    BDViolation,
    Chronology,
    CycleReport,
    TaxonomyReport,
    TraceInvarianceReport,
)
from .core import RecordState, Subset, information_content
from .influence import InfluenceGraph, StrongWitness, WeakWitness
from .model import Model
from .reachability import (
    ClockViolation,
    DiamondViolation,
    MonotonicityFinding,
    Node,
    ReachabilityGraph,
)


def subset_json(subset: Subset) -> list[str]:
    return subset.sorted_labels()


def state_json(model: Model, state: RecordState) -> dict[str, list[str]]:
    return {model.sites[i]: rec.sorted_labels() for i, rec in enumerate(state)}


def node_json(model: Model, node: Node) -> dict[str, Any]:
    return {"state": state_json(model, node.state), "occurred": sorted(node.occurred)}


def _info_json(value: float) -> Any:
    return "inf" if math.isinf(value) else value


def weak_witness_json(model: Model, w: WeakWitness) -> dict[str, Any]:
    return {
        "e": w.e,
        "f": w.f,
        "site": model.sites[w.site],
        "node": node_json(model, w.node),
        "delta_without": subset_json(w.delta_without),
        "delta_with": subset_json(w.delta_with),
    }


def strong_witness_json(model: Model, w: StrongWitness) -> dict[str, Any]:
    return {
        "e": w.e,
        "f": w.f,
        "site": model.sites[w.site],
        "node": node_json(model, w.node),
        "observable": subset_json(w.observable),
        "branch0": subset_json(w.branch0),
        "branch1": subset_json(w.branch1),
    }


def monotonicity_json(model: Model, finding: MonotonicityFinding) -> dict[str, Any]:
    return {
        "event": finding.event,
        "site": model.sites[finding.site],
        "added": subset_json(finding.added),
        "state": state_json(model, finding.state),
    }


def diamond_json(model: Model, violation: DiamondViolation) -> dict[str, Any]:
    return {
        "e": violation.e,
        "f": violation.f,
        "state": state_json(model, violation.state),
        "f_then_e": state_json(model, violation.f_then_e),
        "e_then_f": state_json(model, violation.e_then_f),
    }


def clock_json(model: Model, graph: ReachabilityGraph, v: ClockViolation) -> dict[str, Any]:
    source = graph.nodes[v.edge.source]
    target = graph.nodes[v.edge.target]
    return {
        "event": v.edge.event,
        "source": node_json(model, source),
        "target": node_json(model, target),
        "mu_source": str(v.mu_source),
        "mu_target": str(v.mu_target),
        "info_source": _info_json(information_content(source.state)),
        "info_target": _info_json(information_content(target.state)),
    }


def bd_violation_json(model: Model, v: BDViolation) -> dict[str, Any]:
    return {
        "e": v.witness.e,
        "f": v.witness.f,
        "site": model.sites[v.witness.site],
        "polarity": v.polarity,
        "node": node_json(model, v.node),
        "expected": subset_json(v.expected),
        "actual": subset_json(v.actual),
    }


def influence_json(model: Model, ig: InfluenceGraph) -> dict[str, Any]:
    return {
        "weak_edges": [weak_witness_json(model, w) for w in ig.weak_edges.values()],
        "strong_edges": [
            strong_witness_json(model, w) for w in ig.strong_edges.values()
        ],
    }


def chronology_json(model: Model, chronology: Chronology) -> dict[str, Any]:
    order = {name: i for i, name in enumerate(chronology.events)}
    precedes = sorted(chronology.precedes, key=lambda p: (order[p[0]], order[p[1]]))
    extension: Any = None
    if chronology.linear_extension is not None:
        extension = {name: rank for name, rank in chronology.linear_extension}
    return {
        "acyclic": chronology.acyclic,
        "precedes": [[a, b] for a, b in precedes],
        "linear_extension": extension,
    }


def cycles_json(model: Model, ig: InfluenceGraph, cycles: CycleReport) -> list[dict]:
    out = []
    for cycle in cycles.cycles:
        edges = []
        for i, src in enumerate(cycle):
            dst = cycle[(i + 1) % len(cycle)]
            edges.append(strong_witness_json(model, ig.strong_edges[(src, dst)]))
        out.append({"events": list(cycle), "edges": edges})
    return out


def graph_summary_json(model: Model, graph: ReachabilityGraph) -> dict[str, Any]:
    return {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "distinct_states": len(graph.distinct_states()),
        "truncated": graph.truncated,
    }


def taxonomy_json(report: TaxonomyReport) -> dict[str, Any]:
    model = report.model
    return {
        "verdict": report.verdict.value,
        "has_strong_cycle": report.has_strong_cycle,
        "truncated": report.truncated,
        "exploration": graph_summary_json(model, report.graph),
        "gs_violations": [
            node_json(model, report.graph.nodes[i]) for i in report.gs_violations
        ],
        "diamond_violations": [
            diamond_json(model, v) for v in report.diamond_violations
        ],
        "monotonicity_violations": [
            monotonicity_json(model, v) for v in report.monotonicity_violations
        ],
        "bd_violations": [bd_violation_json(model, v) for v in report.bd_violations],
        "influence": influence_json(model, report.influence),
        "chronology": chronology_json(model, report.chronology),
        "cycles": cycles_json(model, report.influence, report.cycles),
    }


def trace_json(model: Model, report: TraceInvarianceReport) -> dict[str, Any]:
    return {
        "schedule": list(report.schedule),
        "seed": report.seed,
        "variants_checked": report.variants_checked,
        "final_state": state_json(model, report.final_state),
        "state_mismatches": [
            {"schedule": list(schedule), "final_state": state_json(model, state)}
            for schedule, state in report.state_mismatches
        ],
        "edge_mismatches": [list(s) for s in report.edge_mismatches],
        "diamond_violations": [
            diamond_json(model, v) for v in report.diamond_violations
        ],
        "invariant": report.invariant,
    }


def influence_notes(model: Model, ig: InfluenceGraph) -> list[str]:
    """Surface pairs with weak but no strong influence: a dependence was
    observed, but no reachable state yields two nonempty exclusive branch
    constraints on any observable."""
    notes = []
    for pair in ig.weak_edges:
        if pair not in ig.strong_edges:
            notes.append(
                f"weak influence {pair[0]} -> {pair[1]} has no strong-influence "
                "witness: no reachable state gives two disjoint nontrivial "
                "branch constraints on any observable"
            )
    return notes


def make_report(
    command: str,
    model_info: dict[str, Any],
    flags: dict[str, Any],
    results: dict[str, Any],
    warnings: list[str],
    notes: list[str],
    exit_status: int,
) -> dict[str, Any]:
    return {
        "command": command,
        "model": model_info,
        "flags": flags,
        "results": results,
        "warnings": warnings,
        "notes": notes,
        "exit_status": exit_status,
    }


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2) + "\n"
