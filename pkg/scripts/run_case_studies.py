#!/usr/bin/env python3
"""Replay every bundled case study and print a one-line summary per cycle."""

import sys
from pathlib import Path

from pta_engine.session import load_config, parse_trace, run_trace

REPO = Path(__file__).resolve().parent.parent


def main() -> int:
    for case_dir in sorted((REPO / "cases").iterdir()):
        config = load_config(case_dir / "config.json",
                             out_dir=case_dir / "session_out")
        trace = parse_trace((case_dir / "trace.json").read_text(encoding="utf-8"))
        report = run_trace(config, trace)
        print(f"== {case_dir.name} ({len(report.cycles)} cycles) ==")
        for cycle in report.cycles:
            acts = ", ".join(d.get("cue_id") or d["kind"]
                             for d in cycle["directives"]) or "none"
            print(f"  {cycle['index']}: {cycle['reasoning']:<15}"
                  f" head={cycle['head_event']!r} actions=[{acts}]")
        print(f"  outputs -> {config.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
