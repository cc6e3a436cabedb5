"""Gate timing precision needed for quantum search

A NOT gate of duration T(NOT) is a Bloch rotation by pi at rate
omega = pi / T(NOT). A timing error dT turns that into a rotation by
pi (1 + dT / T(NOT)), an angle error of omega dT.
"""
import math
from fractions import Fraction

import numpy as np

from cpc_models.config_manager import DEFAULT_CLOCK_PRECISION
from cpc_models.exceptions import ValidationError, DimensionMismatchError
from cpc_models.grover import perturbation_error
from cpc_models.linalg import DTYPE, as_state
from cpc_models.reports import BoundReport


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=DTYPE)


class TimingBudget:
    """NOT-gate duration and timing error, with the implied rotation rate

    Parameters
    ----------
    t_not : float
        T(NOT) in seconds, positive
    delta_t : float
        Timing error in seconds, non-negative
    """
    def __init__(self, t_not, delta_t=0.0):
        if not t_not > 0 or not math.isfinite(t_not):
            raise ValidationError("t_not must be a positive number of seconds")
        if not delta_t >= 0 or not math.isfinite(delta_t):
            raise ValidationError("delta_t must be non-negative")
        self.t_not = float(t_not)
        self.delta_t = float(delta_t)
        self.omega = math.pi / self.t_not

    @property
    def relative_error(self):
        return self.delta_t / self.t_not

    def __repr__(self):
        return 'TimingBudget(t_not=%r, delta_t=%r)' % (self.t_not,
                                                       self.delta_t)


def max_relative_timing_error(epsilon):
    """Largest dT / T(NOT) keeping the NOT within epsilon, epsilon / pi"""
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive, got %r" % epsilon)
    return epsilon / math.pi


def search_timing_bound(n_bits):
    """dT / T(NOT) must stay below 2^(-n/2) for an n-bit search"""
    if n_bits < 1:
        raise ValidationError("n_bits must be positive")
    return 2.0 ** (-n_bits / 2)


def search_timing_bound_exact(n_bits):
    """2^(-n/2) as a Fraction; only defined for even n_bits"""
    if n_bits < 1 or n_bits % 2:
        raise ValidationError("An exact dyadic bound needs an even, positive "
                              "n_bits, got %r" % n_bits)
    return Fraction(1, 2 ** (n_bits // 2))


def maser_feasible(n_bits, clock_precision=DEFAULT_CLOCK_PRECISION):
    """Whether a clock of the given relative precision suffices

    The comparison is strict: the clock is adequate only when its precision
    is below the bound.
    """
    if not clock_precision > 0:
        raise ValidationError("clock_precision must be positive")
    return clock_precision < search_timing_bound(n_bits)


def maser_threshold_bits(clock_precision=DEFAULT_CLOCK_PRECISION):
    """Smallest n_bits at which the clock is no longer adequate"""
    if not clock_precision > 0:
        raise ValidationError("clock_precision must be positive")
    # 2^(-n/2) <= p first holds near n = -2 log2(p); settle it exactly
    n_bits = max(1, math.floor(-2 * math.log2(clock_precision)) - 1)
    while maser_feasible(n_bits, clock_precision):
        n_bits += 1
    while n_bits > 1 and not maser_feasible(n_bits - 1, clock_precision):
        n_bits -= 1
    return n_bits


def not_rotation(angle):
    """exp(-i angle X / 2), an x-axis Bloch rotation"""
    return (math.cos(angle / 2) * np.eye(2, dtype=DTYPE)
            - 1j * math.sin(angle / 2) * _PAULI_X)


def simulate_mistimed_not(budget, s):
    """Apply a NOT whose duration is off by budget.delta_t

    Returns
    -------
    np.ndarray
        The rotated state. At delta_t = 0 it equals X s up to the global
        phase -i.
    float
        The angle error omega * delta_t
    """
    s = as_state(s)
    if s.size != 2:
        raise DimensionMismatchError("A NOT acts on a qubit, got a state of "
                                     "dimension %d" % s.size)
    angle_error = budget.omega * budget.delta_t
    return not_rotation(math.pi + angle_error) @ s, angle_error


def timing_report(n_bits, clock_precision=DEFAULT_CLOCK_PRECISION,
                  epsilon=None):
    if epsilon is None:
        epsilon = perturbation_error(n_bits)
    fields = [('n_bits', n_bits),
              ('epsilon', epsilon),
              ('max_relative_timing_error',
               max_relative_timing_error(epsilon)),
              ('search_timing_bound', search_timing_bound(n_bits))]
    if n_bits % 2 == 0:
        fields.append(('search_timing_bound_exact',
                       search_timing_bound_exact(n_bits)))
    feasible = maser_feasible(n_bits, clock_precision)
    fields.extend([('clock_precision', clock_precision),
                   ('maser_threshold_bits',
                    maser_threshold_bits(clock_precision)),
                   ('verdict', 'feasible' if feasible else 'infeasible')])
    return BoundReport('timing', fields)
