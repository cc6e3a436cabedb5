"""Rendering of computed bounds and results for the command line

Every subcommand produces a list of records. In json format each record is
one JSON object per line with sorted keys, so output is byte-stable for a
fixed seed. In human format each record is printed as an aligned key/value
table.
"""
import json
from collections import OrderedDict
from fractions import Fraction

import numpy as np
import pandas as pd


class BoundReport:
    """A named, ordered set of computed quantities

    Parameters
    ----------
    kind : str
        What was computed, emitted as the "report" field
    fields : iterable of (str, object)
        The quantities in display order
    """
    def __init__(self, kind, fields):
        self.kind = kind
        self.fields = OrderedDict(fields)

    def __getitem__(self, key):
        return self.fields[key]

    def __getattr__(self, name):
        try:
            return self.__dict__['fields'][name]
        except KeyError:
            raise AttributeError(name) from None

    def __contains__(self, key):
        return key in self.fields

    def __repr__(self):
        return 'BoundReport(%r, %r)' % (self.kind, dict(self.fields))

    def to_record(self):
        record = OrderedDict([('report', self.kind)])
        record.update(self.fields)
        return record


def to_jsonable(value):
    """Map a computed value onto something json can encode exactly

    Fractions become floats when the float is exact and "p/q" strings
    otherwise. Integers, including very large ones, stay integers.
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        as_float = float(value)
        if Fraction(as_float) == value:
            return as_float
        return '%d/%d' % (value.numerator, value.denominator)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def _as_record(item):
    if isinstance(item, BoundReport):
        return item.to_record()
    return item


def format_json(records):
    lines = []
    for item in records:
        record = to_jsonable(_as_record(item))
        lines.append(json.dumps(record, sort_keys=True))
    return '\n'.join(lines) + '\n'


def format_human(records):
    blocks = []
    for item in records:
        record = _as_record(item)
        series = pd.Series({k: _human_value(v) for k, v in record.items()},
                           dtype=object)
        blocks.append(series.to_string())
    return '\n\n'.join(blocks) + '\n'


def _human_value(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return '%.6g' % value
    if isinstance(value, np.ndarray):
        return np.array2string(value, precision=6)
    return value


def render(records, fmt):
    """Format a list of records as 'json' lines or 'human' tables"""
    if fmt == 'json':
        return format_json(records)
    elif fmt == 'human':
        return format_human(records)
    raise ValueError("Unknown format %r" % fmt)
