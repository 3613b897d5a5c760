import json

import pytest

from kneserdom.core import KneserError, KneserParams, VertexSet
from kneserdom.formats import dumps_json, dumps_text, loads, loads_text, parse_vertex


def sample():
    return VertexSet.from_elements(KneserParams(7, 3), [(1, 2, 4), (3, 5, 6)])


def test_text_roundtrip_with_header():
    D = sample()
    text = dumps_text(D, ["made by a test"])
    assert text.splitlines()[0] == "# made by a test"
    assert loads(text, D.params) == D


def test_text_infers_params():
    D = loads_text("1 2 4\n3 5 7  # trailing comment\n\n")
    assert D.params == KneserParams(7, 3)


def test_json_roundtrip():
    D = sample()
    obj = json.loads(dumps_json(D, note="x"))
    assert obj["vertices"] == [[1, 2, 4], [3, 5, 6]] and obj["note"] == "x"
    assert loads(dumps_json(D)) == D


def test_parse_vertex_accepts_braces_and_commas():
    assert parse_vertex("{1, 2, 4}") == parse_vertex("1 2 4")


@pytest.mark.parametrize("text", ["1 2\n1 2\n", "1 2\n1 2 3\n", "a b\n", ""])
def test_bad_text(text):
    with pytest.raises(KneserError):
        loads_text(text)


def test_bad_json():
    with pytest.raises(KneserError):
        loads('{"n": 5}')
