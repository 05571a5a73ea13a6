import json
import numpy as np
import pandas as pd
from tailix._errors import ParseError, PositivityError
from tailix.estimators._base import Sample

"""
Constants
"""
CSV_FLOAT_FORMAT = "%.17g"
CSV_NA_REP = "undefined"
_JSON_FLOAT_FORMAT = "{0:.17g}"


def read_sample_file(path: str) -> Sample:
    """
    Read a sample from a text file containing one positive decimal number per line.
    Empty lines and lines starting with '#' are skipped.

    Parameters
    ----------
    path : str
        Path to the file

    Returns
    -------
    sample : Sample
        The sample, its source is the path
    """
    values = []
    with open(path, "r") as f:
        for line_number, line in enumerate(f, start=1):
            content = line.strip()
            if content == "" or content.startswith("#"):
                continue
            try:
                value = float(content)
            except ValueError:
                raise ParseError("{0}, line {1}: '{2}' is not a decimal number".format(path, line_number, content))
            if not np.isfinite(value):
                raise ParseError("{0}, line {1}: '{2}' is not finite".format(path, line_number, content))
            if value <= 0:
                raise PositivityError("{0}, line {1}: {2} is not positive".format(path, line_number, content))
            values.append(value)
    return Sample(values, source=path)


def write_csv(table: pd.DataFrame, path_or_buffer, comment_lines: list = None) -> None:
    """
    Write a table as CSV with '.' as decimal separator, LF line endings and floats with 17 significant digits.
    Missing values are written as 'undefined'.
    Optional comment lines are written first, each prefixed with '# '.

    Parameters
    ----------
    table : pd.DataFrame
        The table
    path_or_buffer : str / file-like
        The target. Paths are overwritten
    comment_lines : list
        Lines of text written before the header (default: None)
    """
    text = table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", na_rep=CSV_NA_REP)
    if comment_lines is not None:
        text = "".join("# {0}\n".format(line) for line in comment_lines) + text
    if isinstance(path_or_buffer, str):
        with open(path_or_buffer, "w", newline="") as f:
            f.write(text)
    else:
        path_or_buffer.write(text)


def read_csv(path: str) -> (pd.DataFrame, list):
    """
    Read a CSV file written by write_csv.

    Parameters
    ----------
    path : str
        Path to the file

    Returns
    -------
    tuple : (pd.DataFrame, list)
        The table ('undefined' entries of numeric columns become NaN),
        The comment lines without the '# ' prefix
    """
    comment_lines = []
    with open(path, "r") as f:
        for line in f:
            if not line.startswith("#"):
                break
            comment_lines.append(line[1:].strip())
    table = pd.read_csv(path, skiprows=len(comment_lines), na_values=[CSV_NA_REP], keep_default_na=False,
                        float_precision="round_trip")
    # In text columns 'undefined' is a value (e.g. a region label)
    for column in table.columns:
        if not pd.api.types.is_numeric_dtype(table[column]):
            table[column] = table[column].fillna(CSV_NA_REP)
    return table, comment_lines


def format_tuning(tuning: dict) -> str:
    """
    Format a tuning dictionary as 'key=value' pairs joined by ';', e.g. 'm=2;kernel=power;r=1'.

    Parameters
    ----------
    tuning : dict
        The tuning parameters

    Returns
    -------
    text : str
        The formatted tuning
    """
    return ";".join("{0}={1}".format(key, _JSON_FLOAT_FORMAT.format(value) if isinstance(value, float) else value)
                    for key, value in tuning.items())


def to_json_text(obj) -> str:
    """
    Serialize nested dicts, lists, strings, integers, floats, booleans and None as JSON.
    Floats are written with 17 significant digits so that every value is restored exactly by json.loads.
    Non-finite floats are written as null. Numpy scalars and arrays are converted first.
    The output only depends on the input, dictionaries keep their insertion order.

    Parameters
    ----------
    obj : object
        The object to serialize

    Returns
    -------
    text : str
        The JSON document
    """
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    elif isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _JSON_FLOAT_FORMAT.format(obj) if np.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(json.dumps(str(key)) + ": " + to_json_text(value) for key, value in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json_text(value) for value in obj) + "]"
    raise TypeError("Objects of type {0} can not be serialized".format(type(obj).__name__))
