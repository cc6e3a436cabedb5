from collections import namedtuple

from cpc_models.exceptions import ValidationError


_BITS = frozenset('01')


class Command:
    """A finite binary string transmitted by the process-control computer

    Commands are immutable and hashable so they can key the maps of a model.
    Concatenation is written with ``+`` and the empty command is the
    identity for it.

    Parameters
    ----------
    bits : str or iterable of int
        Either a string over {0, 1} or a sequence of 0/1 integers.

    Raises
    ------
    ValidationError
        If any element is not a binary digit.
    """
    __slots__ = ('_bits', )

    def __init__(self, bits=''):
        if isinstance(bits, Command):
            bits = bits.bits
        elif not isinstance(bits, str):
            bits = ''.join(str(b) for b in bits)

        if not _BITS.issuperset(bits):
            raise ValidationError("Commands are binary strings, got %r" %
                                  bits)
        self._bits = bits

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Command):
            return value
        return cls(value)

    @property
    def bits(self):
        return self._bits

    def __add__(self, other):
        return Command(self._bits + Command.coerce(other).bits)

    def __len__(self):
        return len(self._bits)

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __eq__(self, other):
        if isinstance(other, Command):
            return self._bits == other._bits
        return NotImplemented

    def __lt__(self, other):
        # shortlex, so sorted command sets read naturally
        return (len(self._bits), self._bits) < (len(other._bits), other._bits)

    def __hash__(self):
        return hash(('Command', self._bits))

    def __str__(self):
        return self._bits

    def __repr__(self):
        return 'Command(%r)' % self._bits

    def splits(self):
        """Every way of writing this command as b1 + b2 with both non-empty

        Split points are yielded from the left so the first split found is
        the one with the shortest prefix.
        """
        for i in range(1, len(self._bits)):
            yield Command(self._bits[:i]), Command(self._bits[i:])


EMPTY = Command('')


class FactoredCommand(namedtuple('FactoredCommand', ['b_v', 'b_U', 'b_M'])):
    """A command split into preparation, transformation and measurement parts
    """
    __slots__ = ()

    def __new__(cls, b_v, b_U, b_M):
        return super().__new__(cls, Command.coerce(b_v), Command.coerce(b_U),
                               Command.coerce(b_M))

    def flatten(self):
        return self.b_v + self.b_U + self.b_M

    def __str__(self):
        return '%s|%s|%s' % (self.b_v, self.b_U, self.b_M)


def as_commands(values):
    """Coerce an iterable of strings or commands to a tuple of Command"""
    return tuple(Command.coerce(v) for v in values)
