"""Statistical distance between models and data, and sample-size bounds"""
import math
import sys
from fractions import Fraction

import numpy as np

from cpc_models.commands import Command
from cpc_models.config_manager import TOL_UNIT
from cpc_models.exceptions import (ValidationError, DimensionMismatchError,
                                   DegenerateFrequencyError,
                                   UnknownCommandError)
from cpc_models.linalg import DTYPE, as_state, ray_angle, _as_generator
from cpc_models.models import (Model, SpectralDecomposition,
                               outcome_probabilities)
from cpc_models.outcomes import (OutcomeDistribution, OutcomeCounts,
                                 WeightedCommandSet, align,
                                 relative_frequencies)
from cpc_models.reports import BoundReport


__all__ = ['OutcomeDistribution', 'OutcomeCounts', 'WeightedCommandSet',
           'relative_frequencies', 'wootters_distance', 'distinguishable',
           'min_sample_size', 'verification_cost', 'weighted_model_distance',
           'state_distance_bound', 'orthogonal_perfect_fit',
           'perfect_fit_family', 'distinguishability_report']


def _as_distribution(p):
    if isinstance(p, OutcomeDistribution):
        return p
    return OutcomeDistribution(p)


def wootters_distance(p, q):
    """Statistical distance arccos(sum_j sqrt(p_j q_j)) in radians

    Evaluated as 2 arcsin(|sqrt(p) - sqrt(q)| / 2), equal for normalized
    distributions and exactly zero when p == q. Outcomes with zero
    probability contribute nothing; no smoothing is applied.

    Parameters
    ----------
    p, q : OutcomeDistribution or array-like
        Distributions over the same outcomes. When both carry eigenvalues
        they are aligned by sorted eigenvalue.

    Returns
    -------
    float
        A distance in [0, pi/2]

    Raises
    ------
    ValidationError
        On a length or spectrum mismatch.
    """
    p, q = align(_as_distribution(p), _as_distribution(q))
    chord = np.linalg.norm(np.sqrt(p) - np.sqrt(q))
    return float(2 * np.arcsin(min(chord / 2, math.sqrt(0.5))))


def distinguishable(n_trials, d):
    """Whether distributions at distance d differ visibly in n_trials

    Distributions are statistically indistinguishable in N trials unless
    sqrt(N) d > 1; the inequality is strict.
    """
    if d < 0:
        raise ValidationError("A distance cannot be negative")
    return math.sqrt(n_trials) * d > 1


# relative distance within which a float bound counts as an integer
_SNAP_RTOL = 8 * sys.float_info.epsilon


def _exact(value):
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return Fraction(float(value))


def min_sample_size(epsilon):
    """Smallest N with N >= epsilon^-2, computed exactly

    Fractions and ints are used as given. A float epsilon is converted to
    its exact binary value, and a bound lying within a few ulps of an
    integer is taken to be that integer, so 1/3 gives 9 and
    epsilon = 2^(1 - n/2) gives exactly 2^(n - 2) for every n.

    Raises
    ------
    ValidationError
        If epsilon is not in (0, pi/2].
    """
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive, got %r" % epsilon)
    if epsilon > math.pi / 2:
        raise ValidationError("A statistical distance cannot exceed pi/2, "
                              "got %r" % epsilon)
    bound = 1 / _exact(epsilon) ** 2
    if isinstance(epsilon, float):
        nearest = round(bound)
        if abs(bound - nearest) <= _SNAP_RTOL * bound:
            return nearest
    return math.ceil(bound)


def verification_cost(n_bits):
    """Trials needed to verify one gate command to search precision

    Each preparation vector needs N(b_U) >= epsilon^-2 = 2^(n-2) trials
    at epsilon = 2^(1 - n/2), and more than 2^n preparation vectors are
    needed, so the total exceeds 2^(2n-2).

    Returns
    -------
    BoundReport
        per_vector, n_vectors and total as exact numbers, with the epsilon
        they follow from.
    """
    if int(n_bits) != n_bits or n_bits < 1:
        raise ValidationError("n_bits must be a positive integer")
    n_bits = int(n_bits)

    per_vector = Fraction(2) ** (n_bits - 2)
    n_vectors = 2 ** n_bits
    total = 4 ** (n_bits - 1)
    assert per_vector * n_vectors == total

    return BoundReport('verification_cost', [
        ('n_bits', n_bits),
        ('epsilon', 2.0 ** (1 - n_bits / 2)),
        ('per_vector', per_vector),
        ('n_vectors', n_vectors),
        ('total', total)])


def _distribution_for(source, command):
    if isinstance(source, Model):
        return outcome_probabilities(source, command)
    try:
        return _as_distribution(source[command])
    except KeyError:
        raise UnknownCommandError(command, 'measured data') from None


def weighted_model_distance(alpha, data_or_model, w):
    """Weighted average of per-command statistical distances

    Parameters
    ----------
    alpha : Model
    data_or_model : Model or dict
        A second model or measured relative frequencies keyed by command
    w : WeightedCommandSet

    Returns
    -------
    float
        sum_b weight(b) d(Pr_alpha(.|b), Pr_beta(.|b)), summed in the order
        of w
    """
    if isinstance(data_or_model, dict):
        data_or_model = {Command.coerce(k): v
                         for k, v in data_or_model.items()}

    total = 0.0
    for command, weight in w:
        p = outcome_probabilities(alpha, command)
        q = _distribution_for(data_or_model, command)
        total += weight * wootters_distance(p, q)
    return total


def distinguishability_report(alpha, data_or_model, n_trials_by_command):
    """Per-command distances and the sqrt(N) d > 1 verdicts

    Returns
    -------
    list of dict
        One entry per command, in sorted command order
    """
    if isinstance(data_or_model, dict):
        data_or_model = {Command.coerce(k): v
                         for k, v in data_or_model.items()}
    n_trials_by_command = {Command.coerce(k): int(v)
                           for k, v in n_trials_by_command.items()}

    rows = []
    for command in sorted(n_trials_by_command):
        n_trials = n_trials_by_command[command]
        d = wootters_distance(outcome_probabilities(alpha, command),
                              _distribution_for(data_or_model, command))
        rows.append({'command': str(command), 'n_trials': n_trials,
                     'distance': d,
                     'sqrt_n_times_distance': math.sqrt(n_trials) * d,
                     'distinguishable': distinguishable(n_trials, d)})
    return rows


def state_distance_bound(v_alpha, v_beta):
    """arccos|<v_alpha|v_beta>|, an upper bound on the statistical distance

    For any observable shared by two models differing only in their state,
    the distance between the induced distributions is at most this angle.
    """
    v_alpha = as_state(v_alpha)
    v_beta = as_state(v_beta)
    if v_alpha.shape != v_beta.shape:
        raise DimensionMismatchError("States have dimensions %d and %d" %
                                     (v_alpha.size, v_beta.size))
    return ray_angle(v_alpha, v_beta)


def _as_frequency_map(freqs):
    if isinstance(freqs, dict):
        return {Command.coerce(k): _as_distribution(v)
                for k, v in freqs.items()}
    return {Command(''): _as_distribution(freqs)}


def _triangle_phases(weights):
    """Phases closing sum_j weights_j e^{i phi_j} = 0 when max(weights) <= 1/2

    Weights are dealt largest first onto three groups, always onto the
    lightest group, which keeps every group at or below one half. The three
    group sums then satisfy the triangle inequality and the phase of each
    side follows from the law of cosines.
    """
    order = np.argsort(-weights, kind='stable')
    sums = [0.0, 0.0, 0.0]
    membership = np.zeros(weights.size, dtype=int)
    for j in order:
        g = int(np.argmin(sums))
        membership[j] = g
        sums[g] += weights[j]

    a, b, c = sums
    if a == 0 or b == 0:
        raise DegenerateFrequencyError("degenerate frequency vector")
    cos_c = np.clip((a * a + b * b - c * c) / (2 * a * b), -1.0, 1.0)
    phi_b = np.pi - np.arccos(cos_c)
    closing = -(a + b * np.exp(1j * phi_b))
    phi_c = np.angle(closing) if c > 0 else 0.0

    group_phase = np.array([0.0, phi_b, phi_c])
    return group_phase[membership]


def _orthogonal_pair(f, extended):
    """State pair for one command; extended adds the spare basis vector"""
    k = f.size
    dim = k + 1 if extended else k
    amplitudes = np.sqrt(f)

    v_alpha = np.zeros(dim, dtype=DTYPE)
    v_alpha[:k] = amplitudes

    v_beta = np.zeros(dim, dtype=DTYPE)
    dominant = int(np.argmax(f))
    if f[dominant] > 0.5:
        # identical moduli on one basis cannot be orthogonal here; the
        # dominant outcome's amplitude is split across |dominant> and the
        # spare vector |k>
        rest = 1 - f[dominant]
        v_beta[:k] = amplitudes
        inside = -rest / amplitudes[dominant]
        v_beta[dominant] = inside
        v_beta[k] = np.sqrt(max(f[dominant] - inside ** 2, 0.0))
    else:
        phases = _triangle_phases(f)
        v_beta[:k] = amplitudes * np.exp(1j * phases)
    return v_alpha, v_beta


def _fit_observable(k, dim, dominant):
    """Observable with outcome j on |j>, plus |k> on the dominant outcome"""
    projectors = []
    for j in range(k):
        p = np.zeros((dim, dim), dtype=DTYPE)
        p[j, j] = 1
        if dim > k and j == dominant:
            p[k, k] = 1
        projectors.append(p)
    return SpectralDecomposition(range(k), projectors)


def orthogonal_perfect_fit(freqs):
    """Two orthogonal models of the form (|v>, 1, M) that fit exactly

    |v_alpha> = sum_j sqrt(f_j)|j> and |v_beta> = sum_j sqrt(f_j)
    e^{i phi_j}|j> with phases making sum_j f_j e^{i phi_j} = 0, measured in
    the computational basis. When some f_j exceeds one half no choice of
    phases works, and both models gain one basis vector attached to the
    dominant outcome's eigenspace.

    Parameters
    ----------
    freqs : OutcomeDistribution, array-like, or dict
        Relative frequencies, either one vector (keyed to the empty command)
        or a dict keyed by command

    Returns
    -------
    Model, Model

    Raises
    ------
    DegenerateFrequencyError
        If some command has fewer than two positive frequencies.
    """
    freq_map = _as_frequency_map(freqs)
    lengths = {len(f) for f in freq_map.values()}
    if len(lengths) != 1:
        raise ValidationError("Frequency vectors differ in length")
    k = lengths.pop()

    for command, f in freq_map.items():
        if np.count_nonzero(f.probs > 0) < 2:
            raise DegenerateFrequencyError(
                "degenerate frequency vector for command %r: %s" %
                (str(command), list(f.probs)))

    extended = any(f.probs.max() > 0.5 for f in freq_map.values())
    dim = k + 1 if extended else k

    states_alpha, states_beta, observables = {}, {}, {}
    for command, f in freq_map.items():
        v_alpha, v_beta = _orthogonal_pair(f.probs, extended)
        states_alpha[command] = v_alpha
        states_beta[command] = v_beta
        observables[command] = _fit_observable(k, dim,
                                               int(np.argmax(f.probs)))

    alpha = Model(dim, states_alpha, observables, label='orthofit_alpha')
    beta = Model(dim, states_beta, observables, label='orthofit_beta')
    return alpha, beta


def perfect_fit_family(freqs, rng, count):
    """count models of the form (|v>, 1, M) that all fit freqs exactly

    Each model puts independent uniformly random phases on the amplitudes
    sqrt(f_j), so the fits are exact yet the states differ from one model
    to the next.
    """
    freq_map = _as_frequency_map(freqs)
    dims = {len(f) for f in freq_map.values()}
    if len(dims) != 1:
        raise ValidationError("Frequency vectors differ in length")
    dim = dims.pop()
    observable = SpectralDecomposition.computational_basis(dim)

    gen = _as_generator(rng)
    models = []
    for i in range(count):
        states = {}
        for command, f in freq_map.items():
            phases = gen.uniform(0, 2 * np.pi, size=dim)
            states[command] = np.sqrt(f.probs) * np.exp(1j * phases)
        observables = {command: observable for command in freq_map}
        models.append(Model(dim, states, observables,
                            label='perfect_fit_%d' % i))
    return models


def inner_product(alpha, beta, command):
    """<v_alpha(b)|v_beta(b)> for two models sharing a command"""
    return complex(np.vdot(alpha.state_for(command), beta.state_for(command)))


def is_orthogonal_pair(alpha, beta, tol=TOL_UNIT):
    return all(abs(inner_product(alpha, beta, b)) <= tol
               for b in alpha.commands)
