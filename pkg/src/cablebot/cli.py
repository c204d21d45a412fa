"""Command-line entry points.

    cablebot simulate --config FILE --out trace.csv [--seed N] [--duration S]
    cablebot serve --config FILE [--tcp-port P] [--ws-port Q] [--pace R]
    cablebot scenarios list

`--config` accepts either a path to a YAML file or the bare name of a
shipped scenario (see `cablebot scenarios list`). Errors are reported as a
single JSON line on stderr and a non-zero exit status.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cablebot.scenario import ConfigError, load_config, scenario_path, shipped_scenarios


def _resolve_config(arg: str):
    path = Path(arg)
    if not path.exists() and "/" not in arg and not arg.endswith(".yaml"):
        path = scenario_path(arg)
    return load_config(path)


def _cmd_simulate(args: argparse.Namespace) -> int:
    from cablebot.sim import run_scenario, write_csv

    config = _resolve_config(args.config)
    config = config.with_overrides(seed=args.seed, duration_s=args.duration)
    trace = run_scenario(config)
    write_csv(trace, args.out)
    print(json.dumps({"event": "done", "records": len(trace.records), "out": args.out}))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from cablebot.server import serve_scenario

    config = _resolve_config(args.config)
    config = config.with_overrides(seed=args.seed, duration_s=args.duration)

    def on_ready(bridge):
        print(
            json.dumps(
                {
                    "event": "serving",
                    "tcp_port": bridge.tcp_port,
                    "ws_port": bridge.ws_port,
                    "duration_s": config.sim.duration_s,
                    "pace": args.pace,
                }
            ),
            flush=True,
        )

    serve_scenario(
        config,
        host=args.host,
        tcp_port=args.tcp_port,
        ws_port=args.ws_port,
        pace=args.pace,
        on_ready=on_ready,
    )
    print(json.dumps({"event": "finished"}))
    return 0


def _cmd_scenarios(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name, description in shipped_scenarios().items():
            print(f"{name}: {description}" if description else name)
        return 0
    raise ConfigError(f"unknown scenarios action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cablebot",
        description="Deterministic cable inspection robot simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario offline and write a CSV trace")
    sim.add_argument("--config", required=True, help="scenario YAML path or shipped name")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, default=None, help="override sim.seed")
    sim.add_argument("--duration", type=float, default=None, help="override sim.duration_s")
    sim.set_defaults(func=_cmd_simulate)

    srv = sub.add_parser("serve", help="run a scenario with live TCP and WebSocket ports")
    srv.add_argument("--config", required=True, help="scenario YAML path or shipped name")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--tcp-port", type=int, default=0, help="0 picks a free port")
    srv.add_argument("--ws-port", type=int, default=0, help="0 picks a free port")
    srv.add_argument("--pace", type=float, default=1.0,
                     help="sim-to-wall time ratio; 0 runs unpaced")
    srv.add_argument("--seed", type=int, default=None, help="override sim.seed")
    srv.add_argument("--duration", type=float, default=None, help="override sim.duration_s")
    srv.set_defaults(func=_cmd_serve)

    scen = sub.add_parser("scenarios", help="inspect shipped scenarios")
    scen.add_argument("action", choices=["list"])
    scen.set_defaults(func=_cmd_scenarios)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
