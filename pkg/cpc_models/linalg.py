"""Dense complex linear algebra and outcome sampling

Everything here works on plain numpy arrays: state vectors are 1-d complex
arrays of length N and operators are N x N complex arrays. Validation
helpers return the coerced array so callers can write
``s = as_state(s)``.
"""
import logging

import numpy as np
from scipy.stats import unitary_group

from cpc_models.config_manager import (TOL_UNIT, TOL_PROB,
                                       POWER_ITERATION_MAX,
                                       POWER_ITERATION_TOL)
from cpc_models.exceptions import (ValidationError, DimensionMismatchError,
                                   InvariantViolation)


logger = logging.getLogger(__name__)

DTYPE = np.complex128


def as_state(vector, tol=TOL_UNIT):
    """Coerce to a complex vector and require unit norm

    The vector is never renormalized: an off-norm state is an error in the
    model that produced it.

    Raises
    ------
    ValidationError
        If the input is not one dimensional or its norm differs from 1 by
        more than tol.
    """
    state = np.asarray(vector, dtype=DTYPE)
    if state.ndim != 1 or state.size == 0:
        raise ValidationError("A state vector must be a non-empty 1-d array, "
                              "got shape %s" % (state.shape, ))
    if not np.all(np.isfinite(state)):
        raise ValidationError("State vector has non-finite entries")

    norm = np.linalg.norm(state)
    if abs(norm - 1) > tol:
        raise ValidationError("State vector is not normalized "
                              "(norm %.17g)" % norm)
    return state


def as_square(matrix, name='matrix'):
    mat = np.asarray(matrix, dtype=DTYPE)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise ValidationError("%s must be square, got shape %s" %
                              (name, mat.shape))
    if not np.all(np.isfinite(mat)):
        raise ValidationError("%s has non-finite entries" % name)
    return mat


def is_unitary(matrix, tol=TOL_UNIT):
    mat = np.asarray(matrix)
    identity = np.eye(mat.shape[0])
    return np.allclose(mat.conj().T @ mat, identity, rtol=0, atol=tol)


def is_hermitian(matrix, tol=TOL_UNIT):
    mat = np.asarray(matrix)
    return np.allclose(mat, mat.conj().T, rtol=0, atol=tol)


def as_unitary(matrix, tol=TOL_UNIT):
    mat = as_square(matrix, 'unitary')
    if not is_unitary(mat, tol):
        raise ValidationError("Matrix is not unitary within %g" % tol)
    return mat


def apply_unitary(u, s):
    """Apply a unitary to a state vector

    Parameters
    ----------
    u : array-like, N x N
        The unitary
    s : array-like, length N
        The state

    Returns
    -------
    np.ndarray
        u s

    Raises
    ------
    DimensionMismatchError
        If the operand sizes disagree.
    """
    u = as_unitary(u)
    s = as_state(s)
    if u.shape[1] != s.shape[0]:
        raise DimensionMismatchError("Cannot apply a %dx%d unitary to a "
                                     "length %d state" %
                                     (u.shape + s.shape))
    return u @ s


def ray_angle(a, b):
    """Angle arccos|<a|b>| between the rays through two unit vectors

    Computed as 2 arcsin(|b - e^{i phi} a| / 2) with phi the phase of <a|b>,
    which equals arccos|<a|b>| for unit vectors but is exactly zero when
    the vectors coincide.
    """
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    if a.shape != b.shape:
        raise DimensionMismatchError("State vectors differ in dimension: "
                                     "%d vs %d" % (a.size, b.size))
    overlap = np.vdot(a, b)
    phase = np.exp(1j * np.angle(overlap))
    chord = np.linalg.norm(b - phase * a)
    return float(2 * np.arcsin(min(chord / 2, 1.0)))


def bloch_angle(a, b):
    """Angle between two qubit states on the Bloch sphere"""
    return 2 * ray_angle(a, b)


def spectral_norm(matrix, method='svd'):
    """Largest singular value of a complex matrix

    Parameters
    ----------
    matrix : array-like
        Any 2-d array with finite entries
    method : {'svd', 'power'}
        'svd' uses numpy's SVD; 'power' runs power iteration on m^dagger m.

    Raises
    ------
    ValidationError
        If the matrix has non-finite entries.
    """
    mat = np.asarray(matrix, dtype=DTYPE)
    if mat.ndim != 2:
        raise ValidationError("spectral_norm expects a 2-d array")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("spectral_norm got non-finite entries")
    if mat.size == 0:
        return 0.0

    if method == 'svd':
        return float(np.linalg.norm(mat, 2))
    elif method == 'power':
        return power_iteration_norm(mat)
    else:
        raise ValidationError("Unknown spectral norm method %r" % method)


def power_iteration_norm(matrix, tol=POWER_ITERATION_TOL,
                         max_iter=POWER_ITERATION_MAX, seed=0):
    """Spectral norm by power iteration on m^dagger m

    Stops when successive estimates of the top eigenvalue of m^dagger m agree
    to relative tolerance tol, or after max_iter iterations.
    """
    mat = np.asarray(matrix, dtype=DTYPE)
    gram = mat.conj().T @ mat

    rng = np.random.default_rng(seed)
    x = rng.normal(size=gram.shape[1]) + 1j * rng.normal(size=gram.shape[1])
    x /= np.linalg.norm(x)

    lam = 0.0
    for it in range(max_iter):
        y = gram @ x
        y_norm = np.linalg.norm(y)
        if y_norm == 0:
            # x fell in the null space; only the zero matrix keeps it there
            if not np.any(gram):
                return 0.0
            x = rng.normal(size=gram.shape[1]) + 0j
            x /= np.linalg.norm(x)
            continue

        lam_new = float(np.real(np.vdot(x, y)))
        x = y / y_norm
        if abs(lam_new - lam) <= tol * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
    else:
        logger.warning("power iteration did not converge in %d iterations",
                       max_iter)

    logger.debug("power iteration stopped after %d iterations", it + 1)
    return float(np.sqrt(max(lam, 0.0)))


class RandomSource:
    """A reproducible random stream identified by (seed, stream_id)

    Draws come from numpy's PCG64 seeded through a SeedSequence whose spawn
    key is the path of stream ids from the root source, so identical
    sources give identical draws on every platform and distinct paths give
    independent streams.
    """
    def __init__(self, seed=0, stream_id=0, parent_key=()):
        if not 0 <= seed < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if stream_id < 0:
            raise ValidationError("stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.spawn_key = tuple(parent_key) + (self.stream_id, )

    def generator(self):
        seq = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        return np.random.Generator(np.random.PCG64(seq))

    def spawn(self, count):
        """Child streams 0..count-1 nested under this one"""
        return [RandomSource(self.seed, i, parent_key=self.spawn_key)
                for i in range(count)]

    def __repr__(self):
        return 'RandomSource(seed=%d, spawn_key=%r)' % (self.seed,
                                                       self.spawn_key)


def _as_generator(rng):
    if isinstance(rng, RandomSource):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def check_distribution(probs, tol=TOL_PROB):
    """Validate a probability vector and clip round-off negatives to zero"""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("A distribution must be a non-empty 1-d array")
    if not np.all(np.isfinite(p)):
        raise ValidationError("Distribution has non-finite entries")
    if np.any(p < -tol):
        raise ValidationError("Distribution has negative entries: %s" % p)
    if abs(p.sum() - 1) > tol:
        raise ValidationError("Distribution sums to %.17g, not 1" % p.sum())
    return np.clip(p, 0, None)


def sample_outcomes(dist, n_trials, rng):
    """Draw n_trials outcomes i.i.d. from a distribution

    Sampling is inverse-CDF over the cumulative sums in index order: a
    uniform draw u selects the smallest index j with u < cdf[j], so ties go
    to the lower index and zero-probability outcomes are never drawn.

    Parameters
    ----------
    dist : array-like or OutcomeDistribution
        Probabilities summing to one
    n_trials : int
        Positive number of draws
    rng : RandomSource, np.random.Generator or int seed

    Returns
    -------
    OutcomeCounts
        Counts per outcome index, summing to n_trials
    """
    from cpc_models.outcomes import OutcomeCounts

    probs = getattr(dist, 'probs', dist)
    probs = check_distribution(probs)
    if int(n_trials) != n_trials or n_trials < 1:
        raise ValidationError("n_trials must be a positive integer")

    cdf = np.cumsum(probs)
    # the last cumulative sum may fall a few ulps short of one
    cdf[-1] = 1.0

    uniforms = _as_generator(rng).random(int(n_trials))
    outcomes = np.searchsorted(cdf, uniforms, side='right')
    return OutcomeCounts(np.bincount(outcomes, minlength=probs.size))


def sample_outcomes_streams(dist, n_trials, source, n_streams):
    """Sample across n_streams child streams and merge by addition

    The split of trials over streams depends only on n_trials and
    n_streams, so the result does not depend on evaluation order.
    """
    if n_streams < 1:
        raise ValidationError("n_streams must be positive")
    base, extra = divmod(int(n_trials), n_streams)
    total = None
    for i, child in enumerate(source.spawn(n_streams)):
        share = base + (1 if i < extra else 0)
        if share == 0:
            continue
        counts = sample_outcomes(dist, share, child)
        total = counts if total is None else total + counts
    return total


def random_unitary(dim, rng):
    """Haar-random unitary of the given dimension"""
    if dim == 1:
        phase = _as_generator(rng).uniform(0, 2 * np.pi)
        return np.array([[np.exp(1j * phase)]], dtype=DTYPE)
    return np.asarray(unitary_group.rvs(dim, random_state=_as_generator(rng)),
                      dtype=DTYPE)


def random_state(dim, rng):
    gen = _as_generator(rng)
    vec = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_distribution(dim, rng):
    return _as_generator(rng).dirichlet(np.ones(dim))


def projector(vector):
    v = np.asarray(vector, dtype=DTYPE)
    return np.outer(v, v.conj())


def basis_state(dim, index):
    if not 0 <= index < dim:
        raise ValidationError("Basis index %d out of range for dimension %d"
                              % (index, dim))
    state = np.zeros(dim, dtype=DTYPE)
    state[index] = 1
    return state


def assert_distribution(probs, tol=TOL_PROB):
    """Post-condition form of check_distribution

    Raises InvariantViolation rather than ValidationError: used where the
    distribution was computed by this package from a valid model.
    """
    try:
        return check_distribution(probs, tol)
    except ValidationError as e:
        raise InvariantViolation(str(e)) from e
