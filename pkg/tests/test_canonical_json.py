import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from fieldatlas.canonical_json import (
    RawNumber,
    dumps,
    format_coord,
    format_number,
    format_string,
    round6,
)

finite_floats = st.floats(allow_nan=False, allow_infinity=False)
coords = st.floats(min_value=-360.0, max_value=360.0,
                   allow_nan=False, allow_infinity=False)


def test_golden_document():
    doc = {
        "type": "FeatureCollection",
        "properties": {"Nome": "Pieve à mare", "vuoto": {}},
        "features": [],
        "bbox": [10.5, 43.25, 10.75, 43.5],
        "count": 2,
    }
    expected = (
        '{\n'
        '  "type": "FeatureCollection",\n'
        '  "properties": {\n'
        '    "Nome": "Pieve à mare",\n'
        '    "vuoto": {}\n'
        '  },\n'
        '  "features": [],\n'
        '  "bbox": [10.5, 43.25, 10.75, 43.5],\n'
        '  "count": 2\n'
        '}\n'
    )
    assert dumps(doc) == expected.encode("utf-8")


def test_key_order_is_preserved_not_sorted():
    assert dumps({"b": 1, "a": 2}).index(b'"b"') < dumps({"b": 1, "a": 2}).index(b'"a"')


def test_mixed_array_is_multiline():
    rendered = dumps({"x": [1, "due"]}).decode()
    assert '[\n    1,\n    "due"\n  ]' in rendered


def test_number_array_is_inline():
    assert dumps([10.5, 43.0]) == b"[10.5, 43]\n"


def test_trailing_newline_and_utf8():
    data = dumps({"k": "è€"})
    assert data.endswith(b"\n")
    assert "è€".encode("utf-8") in data


@pytest.mark.parametrize("value,expected", [
    (0.0, "0"),
    (-0.0, "0"),
    (-0.0000001, "0"),
    (1.5, "1.5"),
    (1.0, "1"),
    (43.7202, "43.7202"),
    (10.4000004, "10.4"),
    (179.9999996, "180"),
    (-179.9999996, "-180"),
    (0.1234564, "0.123456"),
    (1234.5, "1234.5"),
])
def test_format_coord_table(value, expected):
    assert format_coord(value) == expected


@given(coords)
def test_format_coord_shape(x):
    text = format_coord(x)
    assert text != "-0"
    assert "e" not in text and "E" not in text
    if "." in text:
        assert not text.endswith("0") and not text.endswith(".")
        assert len(text.split(".")[1]) <= 6
    assert float(text) == round6(x)


@given(finite_floats)
def test_round6_idempotent(x):
    once = round6(x)
    assert round6(once) == once


def test_format_number_values():
    assert format_number(7) == "7"
    assert format_number(-3) == "-3"
    assert format_number(2.0) == "2"
    assert format_number(2.5) == "2.5"
    assert format_number(RawNumber("1.2300")) == "1.2300"
    assert format_number(float(2**53)) == str(2**53)
    with pytest.raises(ValueError):
        format_number(math.inf)
    with pytest.raises(ValueError):
        format_number(math.nan)


def test_format_string_escapes_only_required():
    assert format_string('a"b\\c\nd') == '"a\\"b\\\\c\\nd"'
    assert format_string("\x01") == '"\\u0001"'
    assert format_string("à") == '"à"'


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(min_value=-2**53, max_value=2**53)
    | finite_floats | st.text(max_size=20),
    lambda inner: st.lists(inner, max_size=4)
    | st.dictionaries(st.text(max_size=8), inner, max_size=4),
    max_leaves=20,
)


@settings(max_examples=200)
@given(json_values)
def test_output_is_valid_json_equal_to_input(doc):
    assert json.loads(dumps(doc).decode("utf-8")) == doc


def test_non_string_keys_rejected():
    with pytest.raises(TypeError):
        dumps({1: "x"})
