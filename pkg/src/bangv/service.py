"""HTTP service wrapping the engine: evaluate or check a command program.

The endpoints are stateless: each request carries a full program, a fresh
session evaluates it, and the response contains the rendered output along
with structured per-query results.  ``evaluate_source`` / ``check_source``
are plain functions so the CLI can call them in process; the FastAPI routes
are thin wrappers over them.

Exit codes mirror the CLI contract: 0 success, 1 parse error, 2 evaluation
error, 3 partition-cap limit, 4 failed ``expect:`` checks.
"""

from __future__ import annotations

import re
from typing import Any, Literal, Optional

from fastapi import FastAPI
from pydantic import BaseModel, Field

from . import __version__
from .errors import ParseError, SizeLimitError
from .parser import Query, command_source, parse
from .render import SCHEMA, machine_value, render_document, result_text
from .session import CommandError, Result, Session, execute
from .lifting import DEFAULT_PARTITION_CAP

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_EVAL = 2
EXIT_LIMIT = 3
EXIT_CHECK = 4


class EvalRequest(BaseModel):
    source: str
    format: Optional[Literal["text", "machine"]] = None
    partition_cap: Optional[int] = Field(default=None, ge=0)


class ErrorInfo(BaseModel):
    category: Literal["parse", "eval", "limit"]
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    command: Optional[str] = None


class QueryRecord(BaseModel):
    command: str
    kind: str
    text: str
    value: Any


class EvalResponse(BaseModel):
    ok: bool
    exit_code: int
    output: str
    results: list[QueryRecord] = []
    error: Optional[ErrorInfo] = None


class CheckRequest(BaseModel):
    source: str
    partition_cap: Optional[int] = Field(default=None, ge=0)


class CheckFailure(BaseModel):
    line: int
    command: str
    expected: str
    actual: str


class CheckResponse(BaseModel):
    ok: bool
    exit_code: int
    output: str
    failures: list[CheckFailure] = []
    error: Optional[ErrorInfo] = None


def _error_info(err: Exception) -> ErrorInfo:
    if isinstance(err, ParseError):
        return ErrorInfo(
            category="parse",
            message=err.bare_message,
            line=err.line,
            column=err.column,
        )
    if isinstance(err, CommandError):
        category = "limit" if isinstance(err.cause, SizeLimitError) else "eval"
        return ErrorInfo(
            category=category,
            message=str(err.cause),
            line=err.line,
            command=err.command_text,
        )
    return ErrorInfo(category="eval", message=str(err))


_EXIT_BY_CATEGORY = {"parse": EXIT_PARSE, "eval": EXIT_EVAL, "limit": EXIT_LIMIT}


def _query_records(results: list[Result]) -> list[QueryRecord]:
    return [
        QueryRecord(
            command=command_source(r.command),
            kind=r.kind,
            text=result_text(r.value),
            value=machine_value(r.value),
        )
        for r in results
    ]


def evaluate_source(request: EvalRequest) -> EvalResponse:
    """Parse and run a program in a fresh session; render per the chosen format.

    An explicit request format wins over ``set format`` statements; otherwise
    the session's format after execution decides the document style.
    """
    session = Session(
        partition_cap=(
            request.partition_cap
            if request.partition_cap is not None
            else DEFAULT_PARTITION_CAP
        )
    )
    try:
        commands = parse(request.source)
    except ParseError as err:
        info = _error_info(err)
        output = render_document([], request.format or "text", info.model_dump())
        return EvalResponse(
            ok=False,
            exit_code=EXIT_PARSE,
            output=output,
            results=[],
            error=info,
        )
    results: list[Result] = []
    error: Optional[ErrorInfo] = None
    try:
        results = execute(session, commands)
    except CommandError as err:
        error = _error_info(err)
        results = list(err.partial_results)
    output_format = request.format or session.output_format
    output = render_document(
        results, output_format, error.model_dump() if error else None
    )
    return EvalResponse(
        ok=error is None,
        exit_code=_EXIT_BY_CATEGORY[error.category] if error else EXIT_OK,
        output=output,
        results=_query_records(results),
        error=error,
    )


_EXPECT_RE = re.compile(r"^\s*#\s*expect:\s?(.*?)\s*$")


def _expectations(source: str) -> list[tuple[int, str]]:
    """(line number, expected text) for every ``# expect:`` annotation."""
    out = []
    for number, line in enumerate(source.splitlines(), start=1):
        match = _EXPECT_RE.match(line)
        if match:
            out.append((number, match.group(1)))
    return out


def check_source(request: CheckRequest) -> CheckResponse:
    """Run a program and verify its ``# expect:`` annotations.

    Each annotation applies to the closest query statement above it and is
    compared against the query's text rendering, independent of the output
    format.  All annotations are checked; any mismatch makes the run fail.
    """
    session = Session(
        partition_cap=(
            request.partition_cap
            if request.partition_cap is not None
            else DEFAULT_PARTITION_CAP
        )
    )
    try:
        commands = parse(request.source)
    except ParseError as err:
        info = _error_info(err)
        return CheckResponse(
            ok=False, exit_code=EXIT_PARSE, output="", error=info
        )
    try:
        results = execute(session, commands)
    except CommandError as err:
        info = _error_info(err)
        return CheckResponse(
            ok=False,
            exit_code=_EXIT_BY_CATEGORY[info.category],
            output="",
            error=info,
        )

    lines: list[str] = []
    failures: list[CheckFailure] = []
    checked = 0
    for annotation_line, expected in _expectations(request.source):
        target: Optional[Result] = None
        for result in results:  # already in source order
            if result.command.line <= annotation_line:
                target = result
            else:
                break
        if target is None:
            return CheckResponse(
                ok=False,
                exit_code=EXIT_EVAL,
                output="",
                error=ErrorInfo(
                    category="eval",
                    message="expect annotation without a preceding query",
                    line=annotation_line,
                ),
            )
        checked += 1
        actual = result_text(target.value)
        source_text = command_source(target.command)
        if actual == expected:
            lines.append(f"PASS {source_text}")
        else:
            lines.append(f"FAIL {source_text}")
            lines.append(f"  expected: {expected}")
            lines.append(f"  actual:   {actual}")
            failures.append(
                CheckFailure(
                    line=annotation_line,
                    command=source_text,
                    expected=expected,
                    actual=actual,
                )
            )
    lines.append(f"checked {checked} expectation(s): {len(failures)} failed")
    output = "".join(line + "\n" for line in lines)
    return CheckResponse(
        ok=not failures,
        exit_code=EXIT_OK if not failures else EXIT_CHECK,
        output=output,
        failures=failures,
    )


app = FastAPI(
    title="bangv",
    version=__version__,
    description=(
        "Exact symbolic engine for the cofree cocommutative coalgebra over a "
        "based vector space: evaluate programs in the ket expression language."
    ),
)


@app.get("/v1/health")
def health() -> dict:
    return {"name": "bangv", "version": __version__, "schema": SCHEMA}


@app.post("/v1/eval", response_model=EvalResponse)
def eval_endpoint(request: EvalRequest) -> EvalResponse:
    return evaluate_source(request)


@app.post("/v1/check", response_model=CheckResponse)
def check_endpoint(request: CheckRequest) -> CheckResponse:
    return check_source(request)
