"""JSON schemas: round trips and rejection of malformed input."""
import json

import pytest

from cxalgebroid import io
from cxalgebroid.errors import ParseError

from conftest import algebroid_files, bivector_files, map_files


@pytest.mark.parametrize("path", algebroid_files(), ids=lambda p: p.stem)
def test_algebroid_round_trip(path):
    A = io.load_algebroid(path)
    again = io.algebroid_from_json(json.loads(json.dumps(io.algebroid_to_json(A))))
    assert again.same_data(A)


@pytest.mark.parametrize("path", bivector_files(), ids=lambda p: p.stem)
def test_bivector_round_trip(path):
    pi = io.load_bivector(path)
    assert io.bivector_from_json(io.bivector_to_json(pi)).to_strings() == pi.to_strings()


@pytest.mark.parametrize("path", map_files(), ids=lambda p: p.stem)
def test_map_round_trip(path):
    phi = io.load_map(path)
    assert io.map_from_json(phi.to_dict()) == phi


def test_file_kind():
    assert io.file_kind({"anchor": []}) == "algebroid"
    assert io.file_kind({"components": {}}) == "bivector"
    assert io.file_kind({"source_chart": []}) == "map"
    with pytest.raises(ParseError):
        io.file_kind({"chart": []})


BASE = {"chart": ["x", "y"], "rank": 1, "scalars": "complex", "anchor": [["1", "i"]]}


@pytest.mark.parametrize(
    "patch",
    [
        {"chart": ["x", "i"]},
        {"chart": ["x", "x"]},
        {"rank": "1"},
        {"scalars": "quaternionic"},
        {"anchor": [["1"]]},
        {"anchor": [["1", "y/0"]]},
        {"anchor": [["1", 2.5]]},
        {"structure": {"1,1": ["0"]}},
        {"structure": {"a,b": ["0"]}},
        {"rank": 2, "anchor": [["1", "0"], ["0", "1"]], "structure": {"1,2": ["0"]}},
    ],
)
def test_algebroid_schema_rejects(patch):
    with pytest.raises(ParseError):
        io.algebroid_from_json({**BASE, **patch})


def test_real_scalars_reject_complex_data():
    with pytest.raises(ParseError):
        io.algebroid_from_json({**BASE, "scalars": "real"})


@pytest.mark.parametrize(
    "data",
    [
        {"chart": ["x", "y"], "components": {"1,3": "1"}},
        {"chart": ["x", "y"], "components": {"1,2": True}},
        {"chart": ["x", "y"], "components": []},
        {"chart": ["x", "y"], "components": {"1,2": "1/(x - x)"}},
    ],
)
def test_bivector_schema_rejects(data):
    with pytest.raises(ParseError):
        io.bivector_from_json(data)


def test_map_needs_one_component_per_target():
    with pytest.raises(ParseError):
        io.map_from_json({"source_chart": ["t"], "target_chart": ["x", "y"], "components": ["t"]})


def test_report_dump_is_sorted_and_stable():
    rep = {"b": 1, "a": [1, 2]}
    text = io.dumps_report(rep)
    assert text == io.dumps_report(dict(reversed(list(rep.items()))))
    assert text.index('"a"') < text.index('"b"')
