"""Quantum search with exact and perturbed diffusion operators

The search runs on n qubits, N = 2^n, with a single marked target. Every
operator is a dense N x N matrix so that norms of operator differences can be
checked directly.

    U_f = 1 - 2|t><t|         the oracle
    U_w = 1 - 2|w><w|         diffusion about the uniform state |w>
    U_w~ = 1 - 2|w~><w~|      diffusion about |w> with |0> removed

With target 0, |w~> is orthogonal to |0>, the two reflections commute and
(U_w~ U_0)^2 = 1: perturbed search only cycles and never amplifies.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from cpc_models.config_manager import MAX_QUBITS
from cpc_models.exceptions import ValidationError, DimensionMismatchError
from cpc_models.linalg import (DTYPE, as_state, as_unitary, projector,
                               spectral_norm)


logger = logging.getLogger(__name__)


def _check_bits(n_bits):
    if int(n_bits) != n_bits or not 1 <= n_bits <= MAX_QUBITS:
        raise ValidationError("n_bits must be an integer in [1, %d], got %r"
                              % (MAX_QUBITS, n_bits))
    return int(n_bits)


class SearchInstance(namedtuple('SearchInstance', ['n_bits', 'target'])):
    """A search over N = 2^n_bits arguments with one marked target"""
    __slots__ = ()

    def __new__(cls, n_bits, target=0):
        n_bits = _check_bits(n_bits)
        if not 0 <= target < 2 ** n_bits:
            raise ValidationError("target %r outside [0, %d)" %
                                  (target, 2 ** n_bits))
        return super().__new__(cls, n_bits, int(target))

    @property
    def size(self):
        return 2 ** self.n_bits


SearchResult = namedtuple('SearchResult', ['iterations', 'final_state',
                                           'success_probability'])


def uniform_state(n_bits):
    n_bits = _check_bits(n_bits)
    size = 2 ** n_bits
    return np.full(size, 1 / math.sqrt(size), dtype=DTYPE)


def perturbed_state(n_bits):
    """The uniform state with its |0> component removed and renormalized"""
    n_bits = _check_bits(n_bits)
    size = 2 ** n_bits
    state = np.full(size, 1 / math.sqrt(size - 1), dtype=DTYPE)
    state[0] = 0
    return state


def oracle_unitary(inst):
    diagonal = np.ones(inst.size, dtype=DTYPE)
    diagonal[inst.target] = -1
    return np.diag(diagonal)


def reflection_about(v):
    """1 - 2|v><v|, the reflection through the hyperplane orthogonal to v"""
    v = as_state(v)
    return np.eye(v.size, dtype=DTYPE) - 2 * projector(v)


def run_search(inst, diffusion, iterations):
    """Apply (diffusion . oracle) to the uniform state iterations times

    Parameters
    ----------
    inst : SearchInstance
    diffusion : array-like
        An N x N unitary
    iterations : int
        Non-negative number of rounds

    Returns
    -------
    SearchResult

    Raises
    ------
    DimensionMismatchError
        If the diffusion operator is not N x N.
    """
    diffusion = as_unitary(diffusion)
    if diffusion.shape[0] != inst.size:
        raise DimensionMismatchError("A %d-bit search needs a %dx%d diffusion "
                                     "operator, got %s" %
                                     (inst.n_bits, inst.size, inst.size,
                                      diffusion.shape))
    if int(iterations) != iterations or iterations < 0:
        raise ValidationError("iterations must be a non-negative integer")

    step = diffusion @ oracle_unitary(inst)
    state = uniform_state(inst.n_bits)
    for _ in range(int(iterations)):
        state = step @ state

    return SearchResult(int(iterations), state,
                        float(abs(state[inst.target]) ** 2))


def search_series(inst, diffusion, max_iterations):
    """SearchResult after every round from 0 to max_iterations"""
    diffusion = as_unitary(diffusion)
    if diffusion.shape[0] != inst.size:
        raise DimensionMismatchError("Diffusion operator has shape %s for a "
                                     "%d-bit search" %
                                     (diffusion.shape, inst.n_bits))
    step = diffusion @ oracle_unitary(inst)
    state = uniform_state(inst.n_bits)

    results = [SearchResult(0, state, float(abs(state[inst.target]) ** 2))]
    for k in range(1, int(max_iterations) + 1):
        state = step @ state
        results.append(SearchResult(k, state,
                                    float(abs(state[inst.target]) ** 2)))
    return results


def default_iterations(n_bits):
    if n_bits < 1:
        raise ValidationError("n_bits must be positive")
    return max(1, math.floor(math.pi / 4 * math.sqrt(2 ** n_bits)))


def perturbation_angle(n_bits):
    """Angle between |w> and |w~>, arccos sqrt(1 - 1/N)

    Evaluated as arcsin(N^-1/2), which is the same angle and keeps full
    relative precision for large N.
    """
    if n_bits < 1:
        raise ValidationError("n_bits must be positive")
    return math.asin(2.0 ** (-n_bits / 2))


def perturbation_error(n_bits):
    """||U_w - U_w~|| = 2 sin(theta) = 2^(1 - n/2)"""
    if n_bits < 1:
        raise ValidationError("n_bits must be positive")
    return 2.0 ** (1 - n_bits / 2)


def measured_perturbation_error(n_bits, method='svd'):
    exact = reflection_about(uniform_state(n_bits))
    perturbed = reflection_about(perturbed_state(n_bits))
    return spectral_norm(exact - perturbed, method=method)


def involution_residual(n_bits):
    """||(U_w~ U_0)^2 - 1|| in spectral norm"""
    inst = SearchInstance(n_bits, 0)
    step = reflection_about(perturbed_state(n_bits)) @ oracle_unitary(inst)
    residual = spectral_norm(step @ step - np.eye(inst.size))
    logger.debug("involution residual at n=%d: %g", n_bits, residual)
    return residual


def exact_success_probability(n_bits, iterations):
    """sin^2((2k + 1) theta_g) with sin(theta_g) = N^-1/2"""
    theta_g = math.asin(2.0 ** (-n_bits / 2))
    return math.sin((2 * iterations + 1) * theta_g) ** 2


def demo_report(n_bits, perturbed=False, iterations=None):
    """Records for a search demonstration, one per iteration count

    The exact series runs to default_iterations(n_bits) unless iterations is
    given. The perturbed series always targets index 0.
    """
    inst = SearchInstance(n_bits, 0)
    if iterations is None:
        iterations = default_iterations(n_bits)

    if perturbed:
        diffusion = reflection_about(perturbed_state(n_bits))
        kind = 'perturbed'
    else:
        diffusion = reflection_about(uniform_state(n_bits))
        kind = 'exact'

    epsilon = perturbation_error(n_bits)
    theta = perturbation_angle(n_bits)
    residual = involution_residual(n_bits)

    records = []
    for result in search_series(inst, diffusion, iterations):
        records.append({'report': 'grover_demo', 'n': n_bits,
                        'diffusion': kind,
                        'iterations': result.iterations,
                        'success_probability': result.success_probability,
                        'epsilon': epsilon, 'theta': theta,
                        'involution_residual': residual})
    return records
