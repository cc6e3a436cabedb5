"""Cost of finding better gate commands by blind search over SU(N)

Refining an epsilon-grid on SU(N) to an epsilon'-grid multiplies the number
of grid points by at least (epsilon / epsilon')^d, d = N^2 - 1 = 4^n - 1.
Curvature constants of the group are ignored. All counts are carried as
base-2 logarithms, exactly as Fractions whenever epsilon / epsilon' is a
power of sqrt(2).
"""
import math
from fractions import Fraction

from cpc_models.config_manager import DEFAULT_WORK_BUDGET_LOG2, MAX_EXACT_BITS
from cpc_models.exceptions import ValidationError
from cpc_models.model_stats import min_sample_size
from cpc_models.reports import BoundReport


# a float log2 ratio this close to a half-integer is taken to be one
_SNAP = 1e-12


def su_dimension(n_bits):
    if int(n_bits) != n_bits or n_bits < 1:
        raise ValidationError("n_bits must be a positive integer")
    return 4 ** int(n_bits) - 1


def _log2_ratio(eps, eps_prime):
    if isinstance(eps, Fraction) and isinstance(eps_prime, Fraction):
        ratio = eps / eps_prime
        # exact when the ratio is a power of two
        if ratio.numerator & (ratio.numerator - 1) == 0 and \
                ratio.denominator & (ratio.denominator - 1) == 0:
            return Fraction(ratio.numerator.bit_length()
                            - ratio.denominator.bit_length())

    return _snap(math.log2(eps) - math.log2(eps_prime))


def _snap(log2):
    halves = round(2 * log2)
    if abs(2 * log2 - halves) <= _SNAP:
        return Fraction(halves, 2)
    return log2


class GridQuery:
    """How much a precision improvement from eps to eps_prime costs

    Parameters
    ----------
    n_bits : int
        Qubits acted on by each gate
    eps, eps_prime : float or Fraction
        Current and wanted precision, 0 < eps_prime < eps
    n_gates : int
        Number of distinct gate commands G that need improving
    """
    def __init__(self, n_bits, eps, eps_prime, n_gates=1, ratio_log2=None):
        if int(n_bits) != n_bits or n_bits < 1:
            raise ValidationError("n_bits must be a positive integer")
        if int(n_gates) != n_gates or n_gates < 1:
            raise ValidationError("n_gates must be a positive integer")
        if not (eps > 0 and eps_prime > 0):
            raise ValidationError("Precisions must be positive")
        if not eps_prime < eps:
            raise ValidationError("eps_prime (%r) must be smaller than eps "
                                  "(%r)" % (eps_prime, eps))
        self.n_bits = int(n_bits)
        self.eps = eps
        self.eps_prime = eps_prime
        self.n_gates = int(n_gates)
        self._ratio_log2 = ratio_log2

    @classmethod
    def from_ratio(cls, n_bits, ratio_log2, eps=1.0, n_gates=1):
        """A query given log2(eps / eps_prime) directly, exact if rational"""
        if isinstance(ratio_log2, float):
            ratio_log2 = _snap(ratio_log2)
        else:
            ratio_log2 = Fraction(ratio_log2)
        if not ratio_log2 > 0:
            raise ValidationError("eps_prime must be smaller than eps")
        eps_prime = eps * 2.0 ** -float(ratio_log2)
        return cls(n_bits, eps, eps_prime, n_gates, ratio_log2=ratio_log2)

    @classmethod
    def ratchet(cls, n_bits, n_gates=1):
        """From the precision an (n-1)-bit search needs to an n-bit one

        eps = 2^(1 - (n-1)/2) and eps_prime = 2^(1 - n/2), so the ratio is
        exactly sqrt(2).
        """
        if n_bits < 1:
            raise ValidationError("n_bits must be positive")
        eps = 2.0 ** (1 - (n_bits - 1) / 2)
        eps_prime = 2.0 ** (1 - n_bits / 2)
        return cls(n_bits, eps, eps_prime, n_gates,
                   ratio_log2=Fraction(1, 2))

    @property
    def ratio_log2(self):
        if self._ratio_log2 is None:
            self._ratio_log2 = _log2_ratio(self.eps, self.eps_prime)
        return self._ratio_log2

    @property
    def d(self):
        return su_dimension(self.n_bits)

    def __repr__(self):
        return ('GridQuery(n_bits=%d, eps=%r, eps_prime=%r, n_gates=%d)' %
                (self.n_bits, self.eps, self.eps_prime, self.n_gates))


def _log2_float(value):
    if isinstance(value, Fraction):
        return float(value)
    return value


def grid_point_lower_bound(q):
    """log2 of (eps / eps')^d, the least number of finer grid points

    Returns
    -------
    BoundReport
        d, log2_points (a Fraction when exact), decimal_order (log10 of the
        count) and points, the count itself when log2_points is an integer
        no larger than max_exact_bits.
    """
    d = q.d
    log2_points = d * q.ratio_log2
    fields = [('n_bits', q.n_bits), ('d', d), ('ratio_log2', q.ratio_log2),
              ('log2_points', log2_points),
              ('decimal_order', _log2_float(log2_points) * math.log10(2))]

    if (isinstance(log2_points, Fraction) and log2_points.denominator == 1
            and log2_points <= MAX_EXACT_BITS):
        fields.append(('points', 2 ** int(log2_points)))
    return BoundReport('grid_point_lower_bound', fields)


def blind_search_verdict(q, trials_per_command=None,
                         budget_log2=DEFAULT_WORK_BUDGET_LOG2):
    """Total work of testing every finer grid point for every gate

    Work is points x G x trials_per_command. trials_per_command defaults to
    min_sample_size(eps_prime), the trials needed to see a difference of
    eps_prime at all. The verdict is 'hopeless' when the work exceeds
    2^budget_log2.
    """
    if trials_per_command is None:
        trials_per_command = min_sample_size(min(q.eps_prime, math.pi / 2))
    if int(trials_per_command) != trials_per_command or \
            trials_per_command < 1:
        raise ValidationError("trials_per_command must be a positive integer")

    bound = grid_point_lower_bound(q)
    log2_points = bound['log2_points']
    log2_total = (_log2_float(log2_points) + math.log2(q.n_gates)
                  + math.log2(trials_per_command))

    fields = list(bound.fields.items())
    fields.extend([('n_gates', q.n_gates),
                   ('trials_per_command', int(trials_per_command)),
                   ('log2_total_work', log2_total),
                   ('budget_log2', budget_log2),
                   ('verdict', 'hopeless' if log2_total > budget_log2
                    else 'feasible')])
    return BoundReport('blind_search_verdict', fields)
