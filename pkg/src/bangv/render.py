"""Deterministic text and machine renderings of query results.

Text format, one line per query result:

* rationals as ``p/q`` (``p`` when the denominator is 1),
* vectors as dense coordinate tuples in basis order, ``(2, 0)``,
* kets as ``|e1^2 e3⟩_{(1, 0)}`` with labels in basis order (``|0⟩`` for the
  vacuum), combinations joined with `` + `` / `` - `` and coefficients other
  than one prefixed as ``3/2·``,
* tensors as ``left ⊗ right`` terms,
* generalised fractions as ``[1/(z_{e1}^2) dz/z]_{(1, 0)}``.

Machine format is a single JSON document ``{"schema": "bang/1", "results":
[...]}`` whose result trees are self-describing: rationals are ``p/q``
strings, kets are ``{point, content}`` records with sparse label maps, and
tensors are lists of ``{left, right, coeff}``.  Key order is fixed by
construction, so serialization is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .bang_core import BangElement, CanonicalKet, GeneralizedFraction, TensorElement
from .scalar_poly import Vector, format_rational
from .session import Result

SCHEMA = "bang/1"


# ---------------------------------------------------------------------------
# Text format

def vector_text(vector: Vector) -> str:
    return "(" + ", ".join(format_rational(c) for c in vector.coords()) + ")"


def _content_text(content: tuple[tuple[str, int], ...]) -> str:
    if not content:
        return "0"
    return " ".join(f"{label}^{mult}" if mult > 1 else label for label, mult in content)


def ket_text(ket_term: CanonicalKet) -> str:
    return f"|{_content_text(ket_term.content)}⟩_{{{vector_text(ket_term.point)}}}"


def fraction_text(symbol: GeneralizedFraction) -> str:
    if symbol.exponents:
        poles = " ".join(
            f"z_{{{label}}}^{mult}" if mult > 1 else f"z_{{{label}}}"
            for label, mult in symbol.exponents
        )
        body = f"1/({poles}) dz/z"
    else:
        body = "dz/z"
    return f"[{body}]_{{{vector_text(symbol.point)}}}"


def _combination_text(parts: list[tuple[str, Fraction]]) -> str:
    """Join (body, coefficient) terms with signs, eliding unit coefficients."""
    if not parts:
        return "0"
    pieces: list[str] = []
    for index, (body, coeff) in enumerate(parts):
        magnitude = abs(coeff)
        rendered = body if magnitude == 1 else f"{format_rational(magnitude)}·{body}"
        if index == 0:
            pieces.append(f"-{rendered}" if coeff < 0 else rendered)
        else:
            pieces.append(f" - {rendered}" if coeff < 0 else f" + {rendered}")
    return "".join(pieces)


def bang_text(element: BangElement) -> str:
    return _combination_text([(ket_text(k), c) for k, c in element.terms])


def tensor_text(element: TensorElement) -> str:
    return _combination_text(
        [(f"{ket_text(l)} ⊗ {ket_text(r)}", c) for (l, r), c in element.terms]
    )


def fractions_text(items: list[tuple[GeneralizedFraction, Fraction]]) -> str:
    return _combination_text([(fraction_text(f), c) for f, c in items])


def result_text(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Vector):
        return vector_text(value)
    if isinstance(value, BangElement):
        return bang_text(value)
    if isinstance(value, TensorElement):
        return tensor_text(value)
    if isinstance(value, list):
        return fractions_text(value)
    raise TypeError(f"no text rendering for {value!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Machine format

def _sparse_rational_map(entries) -> dict[str, str]:
    return {label: format_rational(value) for label, value in entries}


def _ket_record(ket_term: CanonicalKet) -> dict:
    return {
        "point": _sparse_rational_map(ket_term.point.entries),
        "content": dict(ket_term.content),
    }


def machine_value(value) -> dict:
    if isinstance(value, Fraction):
        return {"kind": "rational", "value": format_rational(value)}
    if isinstance(value, Vector):
        return {"kind": "vector", "entries": _sparse_rational_map(value.entries)}
    if isinstance(value, BangElement):
        return {
            "kind": "bang",
            "terms": [
                {**_ket_record(k), "coeff": format_rational(c)}
                for k, c in value.terms
            ],
        }
    if isinstance(value, TensorElement):
        return {
            "kind": "tensor",
            "terms": [
                {
                    "left": _ket_record(l),
                    "right": _ket_record(r),
                    "coeff": format_rational(c),
                }
                for (l, r), c in value.terms
            ],
        }
    if isinstance(value, list):
        return {
            "kind": "fractions",
            "terms": [
                {
                    "point": _sparse_rational_map(f.point.entries),
                    "exponents": dict(f.exponents),
                    "coeff": format_rational(c),
                }
                for f, c in value
            ],
        }
    raise TypeError(f"no machine rendering for {value!r}")  # pragma: no cover


def machine_document(results: list[Result], error: dict | None = None) -> dict:
    document: dict = {
        "schema": SCHEMA,
        "results": [machine_value(r.value) for r in results],
    }
    if error is not None:
        document["error"] = error
    return document


def render_document(
    results: list[Result], output_format: str, error: dict | None = None
) -> str:
    """The full output of a program run, ready to print."""
    if output_format == "machine":
        return json.dumps(machine_document(results, error), separators=(",", ":")) + "\n"
    lines = [result_text(r.value) for r in results]
    return "".join(line + "\n" for line in lines)
