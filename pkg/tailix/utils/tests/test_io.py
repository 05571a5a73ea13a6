import io
import json
import numpy as np
import pandas as pd
import pytest
from tailix.utils import read_sample_file, write_csv, read_csv, format_tuning, to_json_text
from tailix._errors import ParseError, PositivityError


def _write(tmp_path, text: str) -> str:
    path = str(tmp_path / "sample.txt")
    with open(path, "w") as f:
        f.write(text)
    return path


"""
Tests regarding read_sample_file
"""


def test_read_sample_file(tmp_path):
    path = _write(tmp_path, "# header\n4\n2.0\n\n  8e0  \n# comment\n1\n")
    sample = read_sample_file(path)
    assert np.array_equal(sample.values, [4, 2, 8, 1])
    assert sample.source == path
    assert sample.seed is None


def test_read_sample_file_errors(tmp_path):
    path = _write(tmp_path, "1\n2\nabc\n")
    with pytest.raises(ParseError, match="line 3"):
        read_sample_file(path)
    path = _write(tmp_path, "1\n# zero\n0\n")
    with pytest.raises(PositivityError, match="line 3"):
        read_sample_file(path)
    path = _write(tmp_path, "-1\n2\n")
    with pytest.raises(PositivityError, match="line 1"):
        read_sample_file(path)
    path = _write(tmp_path, "1\nnan\n")
    with pytest.raises(ParseError, match="line 2"):
        read_sample_file(path)


"""
Tests regarding the CSV helpers
"""


def test_write_csv_format():
    table = pd.DataFrame({"m": [2, 10], "gamma_m": [0.1, np.nan], "label": ["dpr", "undefined"]})
    buffer = io.StringIO()
    write_csv(table, buffer, comment_lines=["chi=0.5"])
    assert buffer.getvalue() == "# chi=0.5\nm,gamma_m,label\n2,0.10000000000000001,dpr\n10,undefined,undefined\n"


def test_csv_round_trip(tmp_path):
    path = str(tmp_path / "table.csv")
    table = pd.DataFrame({"x": np.linspace(0.05, 5, 7), "value": [1 / 3, np.inf, np.nan, 2., 1e-300, -0.1, 7],
                          "label": ["a", "b", "c", "d", "e", "f", "g"]})
    write_csv(table, path, comment_lines=["first", "second"])
    with open(path, "r") as f:
        original = f.read()
    restored, comments = read_csv(path)
    assert comments == ["first", "second"]
    assert restored["value"].iloc[0] == 1 / 3
    assert np.isnan(restored["value"].iloc[2])
    path_copy = str(tmp_path / "copy.csv")
    write_csv(restored, path_copy, comment_lines=comments)
    with open(path_copy, "r") as f:
        assert f.read() == original


def test_format_tuning():
    assert format_tuning({"k": 10}) == "k=10"
    assert format_tuning({"m": 2, "kernel": "power", "r": 0.5}) == "m=2;kernel=power;r=0.5"


"""
Tests regarding to_json_text
"""


def test_to_json_text():
    document = {"schema": "v1", "n": 3, "x": 0.1, "flag": True, "missing": None, "values": np.array([1.5, np.nan]),
                "nested": {"y": np.float64(2.)}}
    text = to_json_text(document)
    assert text == '{"schema": "v1", "n": 3, "x": 0.10000000000000001, "flag": true, "missing": null, ' \
                   '"values": [1.5, null], "nested": {"y": 2}}'
    restored = json.loads(text)
    assert restored["x"] == 0.1
    assert to_json_text(restored) == text
    with pytest.raises(TypeError):
        to_json_text({"a": object()})
