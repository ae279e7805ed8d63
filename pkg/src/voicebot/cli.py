"""Command-line runner: batch runs, trace replay, reports, and the live service."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .engine import replay, run_scenario
from .report import render_report
from .scenario import InvalidScenario, load_scenario
from .service import PortUnavailable, serve_scenario
from .trace import CorruptTrace, Trace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voicebot",
        description="Deterministic voice-teleoperated robot simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario and write its trace")
    run_p.add_argument("scenario", type=Path, help="scenario JSON file")
    run_p.add_argument("--trace", type=Path, default=None, help="trace output path (default: stdout)")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    replay_p = sub.add_parser("replay", help="fold a trace back into its final firmware state")
    replay_p.add_argument("trace", type=Path, help="trace file")

    serve_p = sub.add_parser("serve", help="serve a scenario live over websockets")
    serve_p.add_argument("scenario", type=Path, help="scenario JSON file")
    serve_p.add_argument("--port", type=int, required=True)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--tick-ms", type=float, default=10.0, help="wall-clock milliseconds per tick")

    report_p = sub.add_parser("report", help="render figures and a summary table from a trace")
    report_p.add_argument("trace", type=Path, help="trace file")
    report_p.add_argument("--out-dir", type=Path, default=Path("report"), help="output directory")
    return parser


def _load_scenario_or_exit(path: Path, seed: int | None):
    try:
        scenario = load_scenario(path)
    except (OSError, InvalidScenario) as exc:
        sys.exit(f"error: {exc}")
    if seed is not None:
        scenario = replace(scenario, seed=seed)
    return scenario


def _load_trace_or_exit(path: Path):
    try:
        return Trace.load(path)
    except (OSError, CorruptTrace) as exc:
        sys.exit(f"error: {exc}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "run":
        scenario = _load_scenario_or_exit(args.scenario, args.seed)
        trace = run_scenario(scenario)
        if args.trace is None:
            sys.stdout.write(trace.dumps())
        else:
            trace.dump(args.trace)
            print(f"wrote {len(trace.events)} events to {args.trace}")
        return 0

    if args.command == "replay":
        trace = _load_trace_or_exit(args.trace)
        try:
            state = replay(trace)
        except CorruptTrace as exc:
            sys.exit(f"error: {exc}")
        print(f"final tick: {trace.final_tick()}")
        print(f"motion: {state.motion.value}")
        print(f"light: {'on' if state.light else 'off'}")
        print(f"horn: {'on' if state.horn else 'off'}")
        print(f"avoidance: {state.avoidance.value} (remaining {state.avoidance_remaining})")
        print(f"last distance: {state.last_distance:.3f} cm")
        print(f"safety fired: {state.safety_fired}")
        return 0

    if args.command == "serve":
        scenario = _load_scenario_or_exit(args.scenario, None)
        try:
            serve_scenario(scenario, args.host, args.port, args.tick_ms)
        except PortUnavailable as exc:
            sys.exit(f"error: {exc}")
        return 0

    # report
    trace = _load_trace_or_exit(args.trace)
    outputs = render_report(trace, args.out_dir)
    for path in outputs:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
