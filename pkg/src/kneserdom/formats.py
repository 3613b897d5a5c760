"""Text and JSON forms of vertex sets.

Text: one vertex per line, ascending elements separated by spaces, ``#``
starts a comment.  JSON: ``{"n": N, "r": R, "vertices": [[...], ...]}``.
"""

from __future__ import annotations

import json
from typing import Iterable, TextIO

from .core import KneserError, KneserParams, VertexSet, elements, format_vertex, make_vertex


def parse_vertex(line: str) -> int:
    fields = line.replace(",", " ").replace("{", " ").replace("}", " ").split()
    try:
        return make_vertex(int(f) for f in fields)
    except ValueError as exc:
        if isinstance(exc, KneserError):
            raise
        raise KneserError(f"bad vertex line: {line!r}") from None


def parse_text_rows(text: str) -> list[int]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(parse_vertex(line))
    return rows


def dumps_text(D: Iterable[int], header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(format_vertex(v) for v in D)
    return "\n".join(lines) + "\n"


def loads_text(text: str, params: KneserParams | None = None) -> VertexSet:
    """Parse the text form.  Without ``params``, (n, r) are inferred from the data."""
    rows = parse_text_rows(text)
    if len(set(rows)) != len(rows):
        raise KneserError("duplicate vertex in input")
    if params is None:
        if not rows:
            raise KneserError("cannot infer n and r from an empty vertex list")
        sizes = {v.bit_count() for v in rows}
        if len(sizes) != 1:
            raise KneserError("vertices have different sizes")
        n = max(max(elements(v)) for v in rows)
        params = KneserParams(n, sizes.pop())
    return VertexSet(params, rows)


def to_json_obj(D: VertexSet) -> dict:
    return {
        "n": D.params.n,
        "r": D.params.r,
        "vertices": [list(row) for row in D.element_rows()],
    }


def dumps_json(D: VertexSet, **extra) -> str:
    obj = to_json_obj(D)
    obj.update(extra)
    return json.dumps(obj)


def from_json_obj(obj: dict) -> VertexSet:
    try:
        params = KneserParams(int(obj["n"]), int(obj["r"]))
        rows = obj["vertices"]
    except (KeyError, TypeError) as exc:
        raise KneserError(f"malformed vertex-set JSON: {exc}") from None
    return VertexSet.from_elements(params, rows)


def loads(text: str, params: KneserParams | None = None) -> VertexSet:
    """Read either format, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        D = from_json_obj(json.loads(text))
        if params is not None and D.params != params:
            D = VertexSet(params, D)
        return D
    return loads_text(text, params)


def read_vertex_set(fp: TextIO, params: KneserParams | None = None) -> VertexSet:
    return loads(fp.read(), params)
