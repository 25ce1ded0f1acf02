"""Command line entry points.

Exit codes: 0 success, 1 document invalid, 2 usage error, 3 runtime failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import PtaError
from .fcm import evaluate, parse_fcm
from .goalnet import parse_goalnet, validate_goalnet
from .knowledge import load_kb
from .session import load_config, parse_scenario, parse_trace, run_trace


@click.group()
def main() -> None:
    """Teachable-agent engine tools."""


@main.command()
@click.argument("doc_type", type=click.Choice(["goalnet", "fcm", "kb", "scenario"]))
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate(doc_type: str, path: Path) -> None:
    """Check a model document; exit 0 when valid, 1 when not."""
    text = path.read_text(encoding="utf-8")
    try:
        if doc_type == "goalnet":
            violations = validate_goalnet(parse_goalnet(text))
            if violations:
                for v in violations:
                    click.echo(f"{v.code} at {v.node_id}: {v.message}", err=True)
                sys.exit(1)
        elif doc_type == "fcm":
            parse_fcm(text)
        elif doc_type == "kb":
            load_kb(text)
        else:
            parse_scenario(text)
    except PtaError as exc:
        click.echo(f"invalid: {exc}", err=True)
        sys.exit(1)
    click.echo("ok")


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--trace", "trace_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path),
              default=None, help="Override the session output directory.")
def run(config_path: Path, trace_path: Path, out_dir: Path | None) -> None:
    """Replay a scripted trace and write the session directory."""
    try:
        config = load_config(config_path, out_dir=out_dir)
        trace = parse_trace(trace_path.read_text(encoding="utf-8"))
        report = run_trace(config, trace)
    except PtaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    click.echo(json.dumps({
        "cycles": len(report.cycles),
        "out_dir": str(config.out_dir),
    }))


@main.command("fcm-eval")
@click.option("--fcm", "fcm_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--activations", "activations_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
def fcm_eval(fcm_path: Path, activations_path: Path) -> None:
    """Evaluate an FCM for a leaf-activation document."""
    try:
        model = parse_fcm(fcm_path.read_text(encoding="utf-8"))
        activations = json.loads(activations_path.read_text(encoding="utf-8"))
        result = evaluate(model, activations)
    except PtaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    click.echo(json.dumps({
        "final": dict(result.final.values),
        "rounds": result.rounds,
        "converged": result.converged,
        "cycle_detected": result.cycle_detected,
    }, indent=2, sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8700, show_default=True, type=int)
def serve(config_path: Path, host: str, port: int) -> None:
    """Serve live sessions over a WebSocket at /session."""
    from .server import serve as serve_app
    try:
        config = load_config(config_path)
    except PtaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    serve_app(config, host=host, port=port)


if __name__ == "__main__":
    main()
