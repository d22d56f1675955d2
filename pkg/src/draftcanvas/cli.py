"""Command-line entry point: the server plus the stats subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from draftcanvas import __version__
from draftcanvas.stats.cli import add_stats_subparsers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="draftcanvas",
        description="Canvas writing workbench and study-analysis tools",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    serve = commands.add_parser("serve", help="run the workbench server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data-dir", type=Path, default=Path("data"))
    serve.add_argument(
        "--provider-url",
        default="https://api.openai.com/v1",
        help="OpenAI-compatible chat-completions base URL",
    )
    serve.add_argument("--model", default="gpt-4o-2024-08-06")
    serve.add_argument(
        "--api-key-env",
        default="OPENAI_API_KEY",
        help="environment variable holding the provider API key",
    )
    serve.add_argument(
        "--mock",
        action="store_true",
        help="use the deterministic offline provider",
    )
    serve.add_argument("--seed", type=int, default=0, help="mock provider seed")
    serve.add_argument("--session-id", default=None, help="label for logged events")
    serve.add_argument(
        "--ui-dir", type=Path, default=None, help="serve a built frontend from here"
    )
    serve.set_defaults(func=cmd_serve)

    stats = commands.add_parser("stats", help="study statistics pipeline")
    stats_commands = stats.add_subparsers(dest="stats_command", required=True)
    add_stats_subparsers(stats_commands)

    return parser


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from draftcanvas.gateway import ProviderConfig, complete_streaming
    from draftcanvas.mockllm import mock_complete
    from draftcanvas.persistence import EVENTS_FILENAME, EventLog, SnapshotStore
    from draftcanvas.runtime import Runtime
    from draftcanvas.server import create_app

    store = SnapshotStore(args.data_dir)
    state = store.load()
    events = EventLog(Path(args.data_dir) / EVENTS_FILENAME)
    if args.mock:
        seed = args.seed

        def completer(bundle):
            return mock_complete(bundle, seed)

    else:
        provider = ProviderConfig(
            base_url=args.provider_url,
            model_id=args.model,
            api_key_env=args.api_key_env,
        )

        def completer(bundle):
            return complete_streaming(bundle, provider)

    runtime = Runtime(
        state,
        completer,
        snapshots=store,
        events=events,
        session_id=args.session_id,
    )
    app = create_app(runtime, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
