class CPCModelError(Exception):
    """Base class for errors raised by cpc_models"""


class ValidationError(CPCModelError, ValueError):
    """An input violates a precondition"""


class UnknownCommandError(ValidationError, KeyError):
    def __init__(self, command, where='model'):
        self.command = command
        self.where = where
        super().__init__("Unknown command %r for %s" % (str(command), where))

    def __str__(self):
        # KeyError would otherwise repr() the message
        return self.args[0]


class DimensionMismatchError(ValidationError):
    pass


class DegenerateFrequencyError(ValidationError):
    pass


class ModelFileError(ValidationError):
    """A model or counts file failed to parse or validate

    Parameters
    ----------
    path : str
        The file that was read
    errors : list of dict
        Each error is {"field": str, "error": str} and optionally "line".
    """
    def __init__(self, path, errors):
        self.path = path
        self.errors = errors
        lines = []
        for error in errors:
            where = error.get('field', '')
            if 'line' in error:
                where = 'line %d' % error['line']
            lines.append('%s: %s' % (where, error['error']))
        super().__init__("Invalid file %s:\n  %s" % (path,
                                                    '\n  '.join(lines)))


class InvariantViolation(CPCModelError, RuntimeError):
    """A post-condition that should hold by construction did not"""
