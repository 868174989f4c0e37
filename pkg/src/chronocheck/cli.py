"""Command-line interface.

Subcommands: validate, explore, influence, chronology, diagnose,
trace-check.  Every run prints one JSON report to stdout; --json writes
the same document to a file and --dot writes a Graphviz view.  Exit codes:
0 clean, 1 violations found (listed in the report), 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Any, Sequence

from .chronology import (
    check_trace_invariance,
    diagnose,
    find_strong_cycles,
    transitive_closure,
)
from .core import ConsistencyMode
from .dot import influence_dot, reachability_dot
from .influence import build_influence_graphs
from .model import EventApplier, Model
from .modelfile import ModelFormatError, load_model, model_digest
from .reachability import (
    ExplorationLimits,
    check_clock_monotone,
    check_diamond,
    check_gs,
    check_monotonicity,
    explore,
)
from . import report as report_mod

_MODES = {"nonempty": ConsistencyMode.NONEMPTY, "measure": ConsistencyMode.POSITIVE_MEASURE}


class _StrictViolation(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronocheck",
        description=(
            "Finite-model checker for distributed record systems with "
            "monotone local updates"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("model_path", nargs="?", metavar="MODEL", help="model file path")
        sp.add_argument("--model", dest="model_flag", help="model file path (alternative to the positional)")
        sp.add_argument("--mode", choices=sorted(_MODES), default=None, help="override the model's consistency mode")
        sp.add_argument("--max-states", type=int, default=100_000, help="exploration node limit")
        sp.add_argument("--max-depth", type=int, default=64, help="exploration depth limit")
        sp.add_argument("--json", dest="json_path", help="also write the report to this file")
        sp.add_argument("--dot", dest="dot_path", help="write a Graphviz view to this file")
        sp.add_argument("--strict", action="store_true", help="treat monotonicity violations as hard errors")

    for name, text in [
        ("validate", "static checks only"),
        ("explore", "reachability plus consistency, monotonicity, commutation, and clock checks"),
        ("influence", "weak and strong influence edges with witnesses"),
        ("chronology", "derived order, ranks, and strong cycles"),
        ("diagnose", "full premise check and escape classification"),
        ("trace-check", "schedule invariance under swaps of adjacent independent events"),
    ]:
        sp = sub.add_parser(name, help=text)
        add_common(sp)
        if name == "trace-check":
            sp.add_argument("--schedule", required=True, help="comma-separated event names")
            sp.add_argument("--swaps", type=int, default=20, help="random swap chains to try")
            sp.add_argument("--seed", type=int, default=0, help="seed for the swap chains")
    return parser


def _load(args: argparse.Namespace) -> tuple[Model, str]:
    paths = [p for p in (args.model_path, args.model_flag) if p]
    if len(paths) != 1:
        raise ModelFormatError("provide the model path exactly once (positional or --model)")
    model = load_model(paths[0])
    if args.mode is not None:
        model = replace(model, mode=_MODES[args.mode])
    return model, paths[0]


def _limits(args: argparse.Namespace) -> ExplorationLimits:
    return ExplorationLimits(args.max_states, args.max_depth)


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    flags: dict[str, Any] = {
        "mode": args.mode,
        "max_states": args.max_states,
        "max_depth": args.max_depth,
        "strict": args.strict,
    }
    if args.command == "trace-check":
        flags.update(schedule=args.schedule, swaps=args.swaps, seed=args.seed)
    return flags


def _explored(model: Model, args: argparse.Namespace):
    applier = EventApplier(model)
    graph = explore(model, _limits(args), applier=applier)
    if args.strict:
        findings = check_monotonicity(graph)
        if findings:
            first = findings[0]
            raise _StrictViolation(
                f"monotonicity violation: event {first.event} adds worlds "
                f"{first.added.sorted_labels()} at site {model.site_name(first.site)}"
            )
    return graph, applier


def _cmd_validate(model: Model, args: argparse.Namespace):
    defects = model.static_defects()
    results = {
        "defects": [
            {
                "kind": d.kind,
                "event": d.event,
                "message": d.message,
                "rule_index": d.rule_index,
            }
            for d in defects
        ],
        "events": len(model.events),
        "sites": len(model.sites),
        "worlds": model.space.size,
    }
    return results, bool(defects), [], None


def _cmd_explore(model: Model, args: argparse.Namespace):
    graph, _ = _explored(model, args)
    gs = check_gs(graph, model.mode)
    mono = check_monotonicity(graph)
    diamonds = check_diamond(graph, model)
    clock = check_clock_monotone(graph)
    results = {
        "exploration": report_mod.graph_summary_json(model, graph),
        "gs_violations": [report_mod.node_json(model, graph.nodes[i]) for i in gs],
        "monotonicity_violations": [report_mod.monotonicity_json(model, v) for v in mono],
        "diamond_violations": [report_mod.diamond_json(model, v) for v in diamonds],
        "clock_violations": [report_mod.clock_json(model, graph, v) for v in clock],
    }
    violations = bool(gs or mono or diamonds or clock)
    dot_text = reachability_dot(model, graph)
    return results, violations, [], dot_text


def _cmd_influence(model: Model, args: argparse.Namespace):
    graph, applier = _explored(model, args)
    ig = build_influence_graphs(model, graph, applier=applier)
    results = report_mod.influence_json(model, ig)
    notes = report_mod.influence_notes(model, ig)
    dot_text = influence_dot(ig.events, ig.weak_edges, ig.strong_edges)
    return results, False, notes, dot_text


def _cmd_chronology(model: Model, args: argparse.Namespace):
    graph, applier = _explored(model, args)
    ig = build_influence_graphs(model, graph, applier=applier)
    chron = transitive_closure(ig)
    cycles = find_strong_cycles(ig)
    results = {
        "chronology": report_mod.chronology_json(model, chron),
        "cycles": report_mod.cycles_json(model, ig, cycles),
        "strong_edges": [list(pair) for pair in ig.strong_edges],
    }
    notes = report_mod.influence_notes(model, ig)
    dot_text = influence_dot(ig.events, ig.weak_edges, ig.strong_edges, chron.precedes)
    return results, cycles.has_cycle, notes, dot_text


def _cmd_diagnose(model: Model, args: argparse.Namespace):
    if args.strict:
        _explored(model, args)  # raises on monotonicity violations
    taxonomy = diagnose(model, _limits(args))
    results = report_mod.taxonomy_json(taxonomy)
    notes = report_mod.influence_notes(model, taxonomy.influence)
    violations = taxonomy.any_violations() or taxonomy.has_strong_cycle
    dot_text = influence_dot(
        taxonomy.influence.events,
        taxonomy.influence.weak_edges,
        taxonomy.influence.strong_edges,
        taxonomy.chronology.precedes,
    )
    return results, violations, notes, dot_text


def _cmd_trace_check(model: Model, args: argparse.Namespace):
    if args.strict:
        _explored(model, args)
    schedule = [name.strip() for name in args.schedule.split(",") if name.strip()]
    trace = check_trace_invariance(model, schedule, swaps=args.swaps, seed=args.seed)
    results = report_mod.trace_json(model, trace)
    return results, not trace.invariant, [], None


_HANDLERS = {
    "validate": _cmd_validate,
    "explore": _cmd_explore,
    "influence": _cmd_influence,
    "chronology": _cmd_chronology,
    "diagnose": _cmd_diagnose,
    "trace-check": _cmd_trace_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        model, path = _load(args)
    except (ModelFormatError, OSError) as exc:
        print(f"chronocheck: error: {exc}", file=sys.stderr)
        return 2
    try:
        results, violations, notes, dot_text = _HANDLERS[args.command](model, args)
    except (_StrictViolation, ValueError) as exc:
        print(f"chronocheck: error: {exc}", file=sys.stderr)
        return 2
    exit_status = 1 if violations else 0
    warnings = []
    if isinstance(results, dict):
        exploration = results.get("exploration")
        if isinstance(exploration, dict) and exploration.get("truncated"):
            warnings.append("exploration truncated: results cover the explored region only")
    for defect in model.static_defects():
        warnings.append(f"static defect [{defect.kind}] {defect.event}: {defect.message}")
    report = report_mod.make_report(
        command=args.command,
        model_info={
            "path": path,
            "digest": model_digest(model),
            "worlds": model.space.size,
            "sites": len(model.sites),
            "events": len(model.events),
            "mode": model.mode.value,
        },
        flags=_flags(args),
        results=results,
        warnings=warnings,
        notes=notes,
        exit_status=exit_status,
    )
    text = report_mod.dumps_report(report)
    sys.stdout.write(text)
    try:
        if args.json_path:
            with open(args.json_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        if args.dot_path:
            if dot_text is None:
                print(
                    f"chronocheck: error: --dot is not available for {args.command}",
                    file=sys.stderr,
                )
                return 2
            with open(args.dot_path, "w", encoding="utf-8") as fh:
                fh.write(dot_text)
    except OSError as exc:
        print(f"chronocheck: error: {exc}", file=sys.stderr)
        return 2
    return exit_status


if __name__ == "__main__":
    raise SystemExit(main())
