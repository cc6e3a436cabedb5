"""Reading and writing model files, counts files and command lists

Model files are JSON. Complex numbers are [re, im] pairs, the identity form
is written as "unitaries": null, and the empty command is the key "".
Validation collects every problem it finds before raising, each as a
{"field": ..., "error": ...} dict.

Counts files are headerless CSV: the command string, then one count per
outcome index.
"""
import json
import logging

import numpy as np
import pandas as pd

from cpc_models.commands import Command, FactoredCommand
from cpc_models.exceptions import ModelFileError, ValidationError
from cpc_models.models import Model, SpectralDecomposition
from cpc_models.outcomes import OutcomeCounts


logger = logging.getLogger(__name__)

REQUIRED_KEYS = ('dimension', 'states', 'observables')
OPTIONAL_KEYS = ('label', 'commands', 'unitaries', 'durations',
                 'factorization')


def _encode_complex(array):
    array = np.asarray(array)
    if array.ndim == 0:
        return [float(array.real), float(array.imag)]
    return [_encode_complex(a) for a in array]


def _decode_complex(value, shape, field, errors):
    """[re, im] pairs nested to the given shape; None after logging errors"""
    try:
        array = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        errors.append({'field': field,
                       'error': 'expected numbers as [re, im] pairs'})
        return None
    if array.shape != shape + (2, ):
        errors.append({'field': field,
                       'error': 'expected shape %s of [re, im] pairs, got %s'
                       % (shape, array.shape[:-1] if array.ndim else ())})
        return None
    if not np.all(np.isfinite(array)):
        errors.append({'field': field, 'error': 'non-finite entry'})
        return None
    return array[..., 0] + 1j * array[..., 1]


def _check_command(key, field, errors):
    if not isinstance(key, str):
        errors.append({'field': field, 'error': 'commands are strings'})
        return None
    try:
        return Command(key)
    except ValidationError as e:
        errors.append({'field': field, 'error': str(e)})
        return None


def _section(doc, key, errors):
    value = doc.get(key)
    if value is None:
        return {}
    if not isinstance(value, dict):
        errors.append({'field': key, 'error': 'must be an object keyed by '
                                               'command'})
        return {}
    return value


def model_to_document(model):
    """A JSON-ready dict describing a model"""
    commands = model.sorted_commands()
    doc = {'label': model.label,
           'dimension': model.dimension,
           'commands': [str(b) for b in commands],
           'states': {str(b): _encode_complex(v)
                      for b, v in sorted(model.states.items())}}

    if model.identity_form:
        doc['unitaries'] = None
    else:
        doc['unitaries'] = {str(b): _encode_complex(u)
                            for b, u in sorted(model.unitaries.items())}

    doc['observables'] = {
        str(b): {'eigenvalues': list(obs.eigenvalues),
                 'projectors': [_encode_complex(p) for p in obs.projectors]}
        for b, obs in sorted(model.observables.items())}

    if model.durations is not None:
        doc['durations'] = {str(b): t
                            for b, t in sorted(model.durations.items())}
    if model.factorization is not None:
        doc['factorization'] = {
            str(b): [str(part) for part in FactoredCommand(*f)]
            for b, f in sorted(model.factorization.items())}
    return doc


def validate_model_document(doc):
    """Check a parsed model document against the schema

    Parameters
    ----------
    doc : object
        The parsed JSON

    Returns
    -------
    dict or None
        Decoded constructor arguments for Model, None if errors were found
    list of dict
        The errors found, each {"field": str, "error": str}
    """
    errors = []
    if not isinstance(doc, dict):
        return None, [{'field': '', 'error': 'a model file holds an object'}]

    for key in REQUIRED_KEYS:
        if key not in doc:
            errors.append({'field': key, 'error': 'missing'})
    for key in set(doc) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS):
        errors.append({'field': key, 'error': 'unexpected key'})

    dim = doc.get('dimension')
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        if 'dimension' in doc:
            errors.append({'field': 'dimension',
                           'error': 'must be a positive integer'})
        return None, errors

    states = {}
    for key, value in _section(doc, 'states', errors).items():
        field = 'states.%s' % key
        command = _check_command(key, field, errors)
        vec = _decode_complex(value, (dim, ), field, errors)
        if command is not None and vec is not None:
            states[command] = vec

    unitaries = None
    if doc.get('unitaries') is not None:
        unitaries = {}
        for key, value in _section(doc, 'unitaries', errors).items():
            field = 'unitaries.%s' % key
            command = _check_command(key, field, errors)
            mat = _decode_complex(value, (dim, dim), field, errors)
            if command is not None and mat is not None:
                unitaries[command] = mat

    observables = {}
    for key, value in _section(doc, 'observables', errors).items():
        field = 'observables.%s' % key
        command = _check_command(key, field, errors)
        if not isinstance(value, dict) or \
                set(value) != {'eigenvalues', 'projectors'}:
            errors.append({'field': field,
                           'error': 'needs exactly "eigenvalues" and '
                                    '"projectors"'})
            continue
        if not isinstance(value['projectors'], list):
            errors.append({'field': field,
                           'error': 'projectors must be a list'})
            continue
        projectors = []
        for i, p in enumerate(value['projectors']):
            mat = _decode_complex(p, (dim, dim),
                                  '%s.projectors.%d' % (field, i), errors)
            projectors.append(mat)
        if command is None or any(p is None for p in projectors):
            continue
        try:
            observables[command] = SpectralDecomposition(
                value['eigenvalues'], projectors)
        except (TypeError, ValueError) as e:
            errors.append({'field': field, 'error': str(e)})

    durations = None
    if doc.get('durations') is not None:
        durations = {}
        for key, value in _section(doc, 'durations', errors).items():
            field = 'durations.%s' % key
            command = _check_command(key, field, errors)
            if not isinstance(value, (int, float)) or not value > 0:
                errors.append({'field': field,
                               'error': 'must be a positive number'})
            elif command is not None:
                durations[command] = float(value)

    factorization = None
    if doc.get('factorization') is not None:
        factorization = {}
        for key, parts in _section(doc, 'factorization', errors).items():
            field = 'factorization.%s' % key
            command = _check_command(key, field, errors)
            if not isinstance(parts, list) or len(parts) != 3:
                errors.append({'field': field,
                               'error': 'expected [b_v, b_U, b_M]'})
                continue
            try:
                factorization[command] = FactoredCommand(*parts)
            except (TypeError, ValidationError) as e:
                errors.append({'field': field, 'error': str(e)})

    commands = None
    if doc.get('commands') is not None:
        commands = [_check_command(c, 'commands.%d' % i, errors)
                    for i, c in enumerate(doc['commands'])]

    if errors:
        return None, errors

    return {'dimension': dim, 'states': states, 'observables': observables,
            'unitaries': unitaries, 'commands': commands,
            'durations': durations, 'factorization': factorization,
            'label': doc.get('label')}, errors


def model_from_document(doc, path='<document>'):
    kwargs, errors = validate_model_document(doc)
    if errors:
        raise ModelFileError(path, errors)
    try:
        return Model(**kwargs)
    except ValidationError as e:
        raise ModelFileError(path, [{'field': 'model', 'error': str(e)}]) \
            from e


def read_model(path):
    """Load and validate a model file

    Raises
    ------
    ModelFileError
        With line information for JSON syntax errors and one entry per
        schema problem otherwise.
    """
    with open(path) as fp:
        text = fp.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(str(path), [{'field': '', 'line': e.lineno,
                                          'error': e.msg}]) from e
    model = model_from_document(doc, str(path))
    logger.debug("read model %r from %s", model.label, path)
    return model


def write_model(model, path):
    with open(path, 'w') as fp:
        json.dump(model_to_document(model), fp, indent=1)
        fp.write('\n')


def read_counts(path):
    """Per-command outcome counts from a headerless CSV

    Rows naming the same command are added together. Trailing empty cells
    are ignored so commands may have different numbers of outcomes.

    Returns
    -------
    dict
        Command to OutcomeCounts
    """
    # pandas sizes the frame from the first row unless told the widest one
    with open(path) as fp:
        width = max((line.count(',') + 1 for line in fp if line.strip()),
                    default=0)
    if width == 0:
        raise ModelFileError(str(path), [{'field': '',
                                          'error': 'no count rows'}])

    try:
        df = pd.read_csv(path, header=None, names=range(width), dtype=str,
                         keep_default_na=False, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ModelFileError(str(path), [{'field': '', 'error': str(e)}]) \
            from e

    errors = []
    counts = {}
    for row_number, row in enumerate(df.itertuples(index=False), start=1):
        values = list(row)
        while len(values) > 1 and values[-1] == '':
            values.pop()

        command = _check_command(values[0], 'row %d' % row_number, errors)
        numbers = pd.to_numeric(pd.Series(values[1:], dtype=object),
                                errors='coerce')
        if len(values) < 2 or numbers.isnull().any():
            errors.append({'field': 'row %d' % row_number, 'line': row_number,
                           'error': 'counts must be integers'})
            continue
        if command is None:
            continue
        try:
            row_counts = OutcomeCounts(numbers.to_numpy())
        except ValidationError as e:
            errors.append({'field': 'row %d' % row_number, 'line': row_number,
                           'error': str(e)})
            continue

        if command in counts:
            try:
                counts[command] = counts[command] + row_counts
            except ValidationError as e:
                errors.append({'field': 'row %d' % row_number,
                               'line': row_number, 'error': str(e)})
        else:
            counts[command] = row_counts

    if errors:
        raise ModelFileError(str(path), errors)
    return counts


def write_counts(counts_by_command, path):
    rows = []
    for command in sorted(Command.coerce(c) for c in counts_by_command):
        counts = counts_by_command.get(command)
        if counts is None:
            counts = counts_by_command[str(command)]
        counts = getattr(counts, 'counts', counts)
        rows.append([str(command)] + [str(int(c)) for c in counts])

    width = max(len(r) for r in rows)
    df = pd.DataFrame([r + [''] * (width - len(r)) for r in rows])
    df.to_csv(path, header=False, index=False)


def read_eval_commands(path):
    """Commands listed one per line; blank lines are skipped"""
    commands = []
    errors = []
    with open(path) as fp:
        for line_number, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                commands.append(Command(line))
            except ValidationError as e:
                errors.append({'field': 'commands', 'line': line_number,
                               'error': str(e)})
    if errors:
        raise ModelFileError(str(path), errors)
    return commands
