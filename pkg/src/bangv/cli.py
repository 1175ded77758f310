"""Command-line front end: a thin client over the service layer.

The CLI never evaluates anything itself: it builds a request, hands it to the
service (in process by default, or to a remote instance over HTTP with
``--remote``), prints the response output verbatim, and maps the response to
an exit code.  ``--serve`` runs the HTTP service instead.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx

from . import service
from .service import CheckRequest, CheckResponse, EvalRequest, EvalResponse


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bangv",
        description=(
            "Evaluate programs in the ket expression language: declare bases, "
            "points, elements, polynomials and maps; query the coproduct, "
            "counit, dereliction, pairings, promotions and fraction forms."
        ),
    )
    parser.add_argument(
        "--input",
        default="-",
        metavar="FILE",
        help="program file to run ('-' reads stdin; default)",
    )
    parser.add_argument(
        "--format",
        choices=["text", "machine"],
        default=None,
        help="output format; overrides 'set format' statements in the program",
    )
    parser.add_argument(
        "--partition-cap",
        type=int,
        default=None,
        metavar="N",
        help="refuse promotions past degree N (default 12)",
    )
    parser.add_argument(
        "--check",
        action="store_true",
        help="verify '# expect:' annotations instead of printing results",
    )
    parser.add_argument(
        "--remote",
        metavar="URL",
        default=None,
        help="send the request to a running service instead of evaluating in process",
    )
    parser.add_argument(
        "--serve", action="store_true", help="run the HTTP service and exit"
    )
    parser.add_argument("--host", default="127.0.0.1", help="bind host for --serve")
    parser.add_argument("--port", type=int, default=8000, help="bind port for --serve")
    return parser


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _post(url: str, route: str, payload: dict) -> dict:
    response = httpx.post(url.rstrip("/") + route, json=payload, timeout=60.0)
    response.raise_for_status()
    return response.json()


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)

    if args.serve:
        import uvicorn

        uvicorn.run(service.app, host=args.host, port=args.port)
        return 0

    try:
        source = _read_source(args.input)
    except OSError as err:
        print(f"error: cannot read {args.input!r}: {err}", file=sys.stderr)
        return service.EXIT_EVAL

    if args.check:
        check_request = CheckRequest(source=source, partition_cap=args.partition_cap)
        if args.remote:
            check_response = CheckResponse.model_validate(
                _post(args.remote, "/v1/check", check_request.model_dump())
            )
        else:
            check_response = service.check_source(check_request)
        sys.stdout.write(check_response.output)
        if check_response.error:
            print(
                f"error: {check_response.error.category}: "
                f"{check_response.error.message}",
                file=sys.stderr,
            )
        return check_response.exit_code

    eval_request = EvalRequest(
        source=source, format=args.format, partition_cap=args.partition_cap
    )
    if args.remote:
        eval_response = EvalResponse.model_validate(
            _post(args.remote, "/v1/eval", eval_request.model_dump())
        )
    else:
        eval_response = service.evaluate_source(eval_request)
    sys.stdout.write(eval_response.output)
    if eval_response.error:
        print(
            f"error: {eval_response.error.category}: {eval_response.error.message}",
            file=sys.stderr,
        )
    return eval_response.exit_code


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
