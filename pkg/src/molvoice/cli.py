"""Command line entry points: `molvoice repl` and `molvoice serve`."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .gateway import DEFAULT_ENDPOINT, DEFAULT_KEY_ENV, DEFAULT_MODEL, GatewayConfig
from .lexicon import Lexicon, parse_lexicon
from .pipeline import CommandSession


def _add_gateway_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=("mock", "remote"), default="mock")
    parser.add_argument("--model", default=DEFAULT_MODEL, help="chat model id")
    parser.add_argument("--endpoint", default=DEFAULT_ENDPOINT, help="chat completions URL")
    parser.add_argument("--timeout", type=float, default=30.0, help="request timeout, seconds")
    parser.add_argument("--api-key-env", default=DEFAULT_KEY_ENV, help="env var holding the API key")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="molvoice", description="voice-to-command molecular viewer engine")
    sub = parser.add_subparsers(dest="command", required=True)

    repl = sub.add_parser("repl", help="interactive typed pipeline")
    _add_gateway_flags(repl)
    repl.add_argument("--pdb", type=Path, default=None, help="structure file (default: bundled fixture)")
    repl.add_argument("--lexicon", type=Path, default=None, help="misrecognition lexicon TSV")

    serve = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    _add_gateway_flags(serve)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8077)

    return parser


def _config_from(args: argparse.Namespace) -> GatewayConfig:
    return GatewayConfig(
        endpoint_url=args.endpoint,
        model_id=args.model,
        timeout=args.timeout,
        backend=args.backend,
        api_key_env=args.api_key_env,
    )


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)

    if args.command == "repl":
        try:
            pdb_text = args.pdb.read_text("utf-8") if args.pdb else None
            lexicon: Lexicon | None = None
            if args.lexicon:
                lexicon = parse_lexicon(args.lexicon.read_text("utf-8"))
            session = CommandSession(config=_config_from(args), pdb_text=pdb_text, lexicon=lexicon)
        except Exception as err:
            print(f"molvoice: {err}", file=sys.stderr)
            return 2
        from .repl import repl_loop

        return repl_loop(session)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        try:
            app = create_app(config=_config_from(args))
        except Exception as err:
            print(f"molvoice: {err}", file=sys.stderr)
            return 2
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
