#!/usr/bin/env python3
"""Diagnose every bundled fixture and write reports plus DOT graphs.

Usage:
    python scripts/render_fixtures.py [--out out/]

Then render with Graphviz, e.g.:
    dot -Tsvg out/cycle_gadget.influence.dot -o out/cycle_gadget.svg
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from chronocheck.cli import main as cli_main
from chronocheck.modelfile import fixture_path

FIXTURES = ("two_site", "cycle_gadget", "bd_flip")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out")
    args = parser.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in FIXTURES:
        model = str(fixture_path(name))
        status = cli_main(
            [
                "diagnose",
                model,
                "--json",
                str(out / f"{name}.diagnose.json"),
                "--dot",
                str(out / f"{name}.influence.dot"),
            ]
        )
        cli_main(["explore", model, "--json", str(out / f"{name}.explore.json"),
                  "--dot", str(out / f"{name}.reachability.dot")])
        print(f"{name}: diagnose exit {status}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
