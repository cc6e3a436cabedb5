import numpy as np

from cpc_models.commands import Command, as_commands
from cpc_models.config_manager import TOL_PROB, TOL_EIG
from cpc_models.exceptions import ValidationError
from cpc_models.linalg import check_distribution


class OutcomeDistribution:
    """Pr(j|b) for every outcome index j of one command

    Parameters
    ----------
    probs : array-like of float
        Probabilities in outcome order, summing to one within TOL_PROB.
        Round-off negatives are clipped to zero.
    eigenvalues : sequence of float, optional
        The observable eigenvalue attached to each outcome. Distributions
        taken from measured counts carry none and align by index.
    """
    def __init__(self, probs, eigenvalues=None):
        probs = check_distribution(probs)
        probs.flags.writeable = False
        self.probs = probs

        if eigenvalues is not None:
            eigenvalues = tuple(float(m) for m in eigenvalues)
            if len(eigenvalues) != probs.size:
                raise ValidationError("%d eigenvalues for %d outcomes" %
                                      (len(eigenvalues), probs.size))
        self.eigenvalues = eigenvalues

    def __len__(self):
        return self.probs.size

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, index):
        return self.probs[index]

    def __repr__(self):
        return 'OutcomeDistribution(%s)' % np.array2string(self.probs)

    def sorted_by_eigenvalue(self):
        """(eigenvalues, probs) in ascending eigenvalue order"""
        order = np.argsort(self.eigenvalues, kind='stable')
        return np.asarray(self.eigenvalues)[order], self.probs[order]


def align(p, q):
    """Pair up two distributions outcome by outcome

    When both carry eigenvalues they are matched by sorted eigenvalue and the
    spectra must agree within TOL_EIG; otherwise they are matched by index.

    Returns
    -------
    np.ndarray, np.ndarray
        The aligned probability vectors

    Raises
    ------
    ValidationError
        On a length or spectrum mismatch.
    """
    if len(p) != len(q):
        raise ValidationError("Distributions have %d and %d outcomes" %
                              (len(p), len(q)))

    if p.eigenvalues is None or q.eigenvalues is None:
        return p.probs, q.probs

    p_eig, p_probs = p.sorted_by_eigenvalue()
    q_eig, q_probs = q.sorted_by_eigenvalue()
    if np.max(np.abs(p_eig - q_eig)) > TOL_EIG:
        raise ValidationError("Spectra differ: %s vs %s" %
                              (list(p_eig), list(q_eig)))
    return p_probs, q_probs


class OutcomeCounts:
    """Empirical tallies of outcomes for one command

    Parameters
    ----------
    counts : array-like of int
        Non-negative count per outcome index
    """
    def __init__(self, counts):
        arr = np.asarray(counts)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("Counts must be a non-empty 1-d array")
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValidationError("Counts must be integers: %s" % arr)
        arr = arr.astype(np.int64)
        if np.any(arr < 0):
            raise ValidationError("Counts must be non-negative: %s" % arr)
        arr.flags.writeable = False
        self.counts = arr

    @property
    def n_trials(self):
        return int(self.counts.sum())

    def __len__(self):
        return self.counts.size

    def frequencies(self):
        if self.n_trials == 0:
            raise ValidationError("No trials recorded")
        return OutcomeDistribution(self.counts / self.n_trials)

    def __add__(self, other):
        if len(self) != len(other):
            raise ValidationError("Cannot merge counts of different lengths")
        return OutcomeCounts(self.counts + other.counts)

    def __repr__(self):
        return 'OutcomeCounts(%s)' % list(self.counts)


def relative_frequencies(counts_by_command):
    """Per-command relative frequencies from per-command counts

    Parameters
    ----------
    counts_by_command : dict
        Command (or str) to OutcomeCounts or sequence of int

    Returns
    -------
    dict
        Command to OutcomeDistribution
    """
    result = {}
    for command, counts in counts_by_command.items():
        if not isinstance(counts, OutcomeCounts):
            counts = OutcomeCounts(counts)
        result[Command.coerce(command)] = counts.frequencies()
    return result


class WeightedCommandSet:
    """A weighting of commands used to average per-command distances

    Parameters
    ----------
    entries : iterable of (Command or str, float)
        Commands with non-negative weights summing to one within TOL_PROB.
        Order is kept; aggregation follows it.
    """
    def __init__(self, entries):
        entries = tuple((Command.coerce(c), float(w)) for c, w in entries)
        if not entries:
            raise ValidationError("A weighted command set needs at least one "
                                  "command")
        commands = [c for c, _ in entries]
        if len(set(commands)) != len(commands):
            raise ValidationError("Duplicated commands in weighting")
        weights = np.array([w for _, w in entries])
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValidationError("Weights must be finite and non-negative")
        if abs(weights.sum() - 1) > TOL_PROB:
            raise ValidationError("Weights sum to %.17g, not 1" %
                                  weights.sum())
        self.entries = entries

    @classmethod
    def uniform(cls, commands):
        commands = as_commands(commands)
        if not commands:
            raise ValidationError("A weighted command set needs at least one "
                                  "command")
        return cls((c, 1 / len(commands)) for c in commands)

    @property
    def commands(self):
        return tuple(c for c, _ in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)
