import json

import pytest

from dglue.errors import ParseError, ValidationError
from dglue.presentation import data_path, loads, parse_complements, parse_presentation


@pytest.fixture
def wedge_doc():
    return json.loads(data_path("wedge.dg").read_text())


def dump(doc):
    return json.dumps(doc, indent=2)


def test_shipped_wedge_parses():
    p = parse_presentation(data_path("wedge.dg"))
    assert set(p.connections) == {"c1", "c2"}
    assert p.glued.A(0.0).tolist() == [[1.0]]
    assert len(p.checks) == 8


def test_empty_gluing_is_a_validation_error(wedge_doc):
    wedge_doc["gluing"]["points"] = []
    with pytest.raises(ValidationError) as info:
        loads(dump(wedge_doc))
    assert info.value.invariant == "make_glued_space"


def test_vanishing_denominator_is_caught(wedge_doc):
    wedge_doc["connections"]["c1"] = {"bundle": "V1", "gamma": [["1/(x^2)"]]}
    with pytest.raises(ValidationError) as info:
        loads(dump(wedge_doc))
    assert info.value.invariant == "division-domain"


def test_parse_error_reports_line_and_field(wedge_doc):
    wedge_doc["metrics"]["g2"]["matrix"] = [["exp(x"]]
    text = dump(wedge_doc)
    with pytest.raises(ParseError) as info:
        loads(text)
    assert info.value.field == "metrics.g2.matrix"
    assert '"matrix"' in text.splitlines()[info.value.line - 1]


def test_referential_integrity(wedge_doc):
    wedge_doc["connections"]["c1"]["bundle"] = "V9"
    with pytest.raises(ValidationError, match="unknown bundle"):
        loads(dump(wedge_doc))


def test_invalid_json_and_version(wedge_doc):
    with pytest.raises(ParseError):
        loads("{not json")
    wedge_doc["schema_version"] = 99
    with pytest.raises(ParseError):
        loads(dump(wedge_doc))


def test_nonpositive_metric_rejected(wedge_doc):
    wedge_doc["metrics"]["g1"]["matrix"] = [["x^2 - 1"]]
    with pytest.raises(ValidationError):
        loads(dump(wedge_doc))


def test_complement_syntax():
    assert parse_complements(["0=1,1", "0=0,1", "*=2"]) == {0.0: [[1.0, 1.0], [0.0, 1.0]], "*": [[2.0]]}
    with pytest.raises(ParseError):
        parse_complements(["0:1,1"])
    with pytest.raises(ParseError):
        parse_complements(["0=a"])
