"""Quantum-mechanical models as command-indexed triples (|v>, U, M)_B

A model maps each command b of its command set B to a state vector v(b), a
unitary U(b) and an observable M(b) given by its spectral decomposition.
Outcome probabilities follow

    Pr(j|b) = <v(b)| U(b)^dagger M_j(b) U(b) |v(b)>

Models are immutable once built. The unitary map is a lookup table; a
command missing from the table is resolved by splitting it into tabled
pieces and multiplying in reverse order, U(b1 + b2) = U(b2) U(b1).
"""
import logging
from types import MappingProxyType

import numpy as np

from cpc_models.commands import Command, EMPTY, as_commands
from cpc_models.config_manager import TOL_UNIT, TOL_PROJ, TOL_EIG
from cpc_models.exceptions import (ValidationError, UnknownCommandError,
                                   DimensionMismatchError)
from cpc_models.linalg import (DTYPE, as_state, as_square, is_hermitian,
                               as_unitary, assert_distribution)
from cpc_models.outcomes import OutcomeDistribution


logger = logging.getLogger(__name__)


def _frozen(array):
    array = np.array(array, dtype=DTYPE)
    array.flags.writeable = False
    return array


class SpectralDecomposition:
    """An observable written as sum_j m_j M_j with orthogonal projectors

    Eigenvalues closer than TOL_EIG are merged into one eigenspace by
    summing their projectors; the merged outcome keeps the position of its
    first eigenvalue. The projectors must be hermitian, mutually orthogonal
    and sum to the identity, all within TOL_PROJ.

    Parameters
    ----------
    eigenvalues : sequence of float
    projectors : sequence of array-like
        Square matrices of one common dimension, one per eigenvalue.

    Raises
    ------
    ValidationError
        If any of the conditions above fail.
    """
    def __init__(self, eigenvalues, projectors, tol=TOL_PROJ, _trusted=False):
        eigenvalues = [float(m) for m in eigenvalues]
        projectors = [as_square(p, 'projector') for p in projectors]
        if len(eigenvalues) != len(projectors):
            raise ValidationError("%d eigenvalues but %d projectors" %
                                  (len(eigenvalues), len(projectors)))
        if not eigenvalues:
            raise ValidationError("An observable needs at least one outcome")
        if not np.all(np.isfinite(eigenvalues)):
            raise ValidationError("Eigenvalues must be finite")

        dims = {p.shape[0] for p in projectors}
        if len(dims) != 1:
            raise DimensionMismatchError("Projectors differ in dimension: %s"
                                         % sorted(dims))

        merged_values = []
        merged_projectors = []
        for value, proj in zip(eigenvalues, projectors):
            for i, existing in enumerate(merged_values):
                if abs(existing - value) < TOL_EIG:
                    logger.warning("merging eigenvalues %r and %r", existing,
                                   value)
                    merged_projectors[i] = merged_projectors[i] + proj
                    break
            else:
                merged_values.append(value)
                merged_projectors.append(proj)

        self.eigenvalues = tuple(merged_values)
        self.projectors = tuple(_frozen(p) for p in merged_projectors)
        if not _trusted:
            self._validate(tol)

    def _validate(self, tol):
        dim = self.dimension
        total = np.zeros((dim, dim), dtype=DTYPE)
        for j, pj in enumerate(self.projectors):
            if not is_hermitian(pj, tol):
                raise ValidationError("Projector %d is not hermitian" % j)
            for k in range(j, len(self.projectors)):
                product = pj @ self.projectors[k]
                expected = pj if j == k else 0
                if not np.allclose(product, expected, rtol=0, atol=tol):
                    raise ValidationError("Projectors %d and %d violate "
                                          "M_j M_k = delta_jk M_j" % (j, k))
            total += pj
        if not np.allclose(total, np.eye(dim), rtol=0, atol=tol):
            raise ValidationError("Projectors do not sum to the identity")

    @classmethod
    def computational_basis(cls, dim, eigenvalues=None):
        """Nondegenerate measurement diagonal in the computational basis

        Eigenvalues default to the outcome indices 0..dim-1.
        """
        if eigenvalues is None:
            eigenvalues = range(dim)
        projectors = []
        for j in range(dim):
            p = np.zeros((dim, dim), dtype=DTYPE)
            p[j, j] = 1
            projectors.append(p)
        distinct = len(set(eigenvalues)) == dim
        return cls(eigenvalues, projectors, _trusted=distinct)

    @classmethod
    def from_observable(cls, matrix, tol=TOL_PROJ):
        """Decompose a hermitian matrix into eigenvalues and eigenprojectors

        Eigenvalues within TOL_EIG of their neighbour share one eigenspace.
        """
        mat = as_square(matrix, 'observable')
        if not is_hermitian(mat, tol):
            raise ValidationError("Observable is not hermitian")

        values, vectors = np.linalg.eigh(mat)
        groups = [[0]]
        for i in range(1, values.size):
            if values[i] - values[groups[-1][-1]] < TOL_EIG:
                groups[-1].append(i)
            else:
                groups.append([i])

        eigenvalues = []
        projectors = []
        for group in groups:
            vecs = vectors[:, group]
            eigenvalues.append(float(np.mean(values[group])))
            projectors.append(vecs @ vecs.conj().T)
        return cls(eigenvalues, projectors, tol=tol)

    @property
    def dimension(self):
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.eigenvalues)

    def matrix(self):
        """The observable sum_j m_j M_j"""
        return sum(m * p for m, p in zip(self.eigenvalues, self.projectors))

    def conjugated(self, q):
        """The decomposition of Q M Q^dagger"""
        q = np.asarray(q, dtype=DTYPE)
        return SpectralDecomposition(
            self.eigenvalues, [q @ p @ q.conj().T for p in self.projectors])

    def tensor_identity(self, dim):
        """The decomposition of M tensor 1 on a dim-dimensional factor"""
        identity = np.eye(dim, dtype=DTYPE)
        return SpectralDecomposition(
            self.eigenvalues, [np.kron(p, identity) for p in self.projectors],
            _trusted=True)

    def same_as(self, other, tol=0.0):
        if len(self) != len(other):
            return False
        if not np.allclose(self.eigenvalues, other.eigenvalues, rtol=0,
                           atol=tol):
            return False
        return all(p.shape == q.shape and np.allclose(p, q, rtol=0, atol=tol)
                   for p, q in zip(self.projectors, other.projectors))

    def __repr__(self):
        return 'SpectralDecomposition(eigenvalues=%s, dimension=%d)' % (
            list(self.eigenvalues), self.dimension)


def _command_map(mapping):
    if mapping is None:
        return None
    return {Command.coerce(k): v for k, v in mapping.items()}


class Model:
    """A quantum-mechanical model (|v>, U, M)_B

    Parameters
    ----------
    dimension : int
        Dimension of the Hilbert space
    states : dict
        Command to unit state vector, the map |v>
    observables : dict
        Command to SpectralDecomposition, the map M
    unitaries : dict or None
        Command to unitary matrix, the map U. None gives the identity form
        (|v>, 1, M) in which U(b) is the identity for every b.
    commands : iterable of Command, optional
        The command set B. Defaults to every command that has a state and
        an observable and whose unitary resolves.
    durations : dict, optional
        Unitary command to the positive time T(b_U) in seconds its
        transformation takes. Stored only; durations do not compose.
    factorization : dict, optional
        Command to FactoredCommand recording how a flattened command was
        built from separate preparation, transformation and measurement
        commands.
    label : str, optional
        Identifier used in reports

    Raises
    ------
    ValidationError
        If a state is not a unit vector, a unitary is not unitary, any
        matrix has the wrong dimension, or a command of B cannot be
        resolved in all three maps.
    """
    def __init__(self, dimension, states, observables, unitaries=None,
                 commands=None, durations=None, factorization=None,
                 label=None):
        if int(dimension) != dimension or dimension < 1:
            raise ValidationError("dimension must be a positive integer")
        self.dimension = int(dimension)
        self.label = label

        states = _command_map(states)
        observables = _command_map(observables)
        unitaries = _command_map(unitaries)

        for command, state in states.items():
            try:
                state = as_state(state)
            except ValidationError as e:
                raise ValidationError("state for command %r: %s" %
                                      (str(command), e)) from e
            self._check_dimension(state.shape[0], 'state', command)
            states[command] = _frozen(state)

        for command, obs in observables.items():
            if not isinstance(obs, SpectralDecomposition):
                raise ValidationError("observable for command %r is not a "
                                      "SpectralDecomposition" % str(command))
            self._check_dimension(obs.dimension, 'observable', command)

        if unitaries is not None:
            for command, u in unitaries.items():
                try:
                    u = as_unitary(u)
                except ValidationError as e:
                    raise ValidationError("unitary for command %r: %s" %
                                          (str(command), e)) from e
                self._check_dimension(u.shape[0], 'unitary', command)
                unitaries[command] = _frozen(u)

        if durations is not None:
            durations = _command_map(durations)
            for command, seconds in durations.items():
                if not np.isfinite(seconds) or seconds <= 0:
                    raise ValidationError("duration for command %r must be "
                                          "positive" % str(command))
            durations = {k: float(v) for k, v in durations.items()}

        self._states = states
        self._observables = observables
        self._unitaries = unitaries
        self._durations = durations
        self._composed = {}

        if factorization is not None:
            factorization = _command_map(factorization)
        self._factorization = factorization

        if commands is None:
            candidates = sorted(set(states) & set(observables))
            commands = [c for c in candidates if self._resolvable(c)]
        else:
            commands = as_commands(commands)
            for command in commands:
                self.state_for(command)
                self.observable_for(command)
                self.unitary_for(command)
        self.commands = frozenset(commands)

    def _check_dimension(self, size, what, command):
        if size != self.dimension:
            raise DimensionMismatchError(
                "%s for command %r has dimension %d, model has %d" %
                (what, str(command), size, self.dimension))

    def _resolvable(self, command):
        try:
            self.unitary_for(command)
        except UnknownCommandError:
            return False
        return True

    @property
    def states(self):
        return MappingProxyType(self._states)

    @property
    def observables(self):
        return MappingProxyType(self._observables)

    @property
    def unitaries(self):
        if self._unitaries is None:
            return None
        return MappingProxyType(self._unitaries)

    @property
    def durations(self):
        if self._durations is None:
            return None
        return MappingProxyType(self._durations)

    @property
    def factorization(self):
        if self._factorization is None:
            return None
        return MappingProxyType(self._factorization)

    @property
    def identity_form(self):
        return self._unitaries is None

    def sorted_commands(self):
        return sorted(self.commands)

    def state_for(self, command):
        command = Command.coerce(command)
        try:
            return self._states[command]
        except KeyError:
            raise UnknownCommandError(command, 'state map') from None

    def observable_for(self, command):
        command = Command.coerce(command)
        try:
            return self._observables[command]
        except KeyError:
            raise UnknownCommandError(command, 'observable map') from None

    def duration_for(self, command):
        if self._durations is None:
            return None
        return self._durations.get(Command.coerce(command))

    def unitary_for(self, command):
        """U(b), by table lookup or by composing tabled pieces

        The empty command maps to the identity unless tabled otherwise.

        Raises
        ------
        UnknownCommandError
            If the command is neither tabled nor a concatenation of
            resolvable pieces.
        """
        command = Command.coerce(command)
        if self._unitaries is None:
            return _identity(self.dimension)
        if command in self._unitaries:
            return self._unitaries[command]
        if command == EMPTY:
            return _identity(self.dimension)

        if command not in self._composed:
            self._composed[command] = self._compose_from_table(command)
        result = self._composed[command]
        if result is None:
            raise UnknownCommandError(command, 'unitary map')
        return result

    def _compose_from_table(self, command):
        # shortest tabled prefix first; the remainder may itself be composed
        for head, tail in command.splits():
            if head not in self._unitaries:
                continue
            try:
                rest = self.unitary_for(tail)
            except UnknownCommandError:
                continue
            logger.debug("composing U(%s) from U(%s) and U(%s)", command,
                         head, tail)
            return _frozen(rest @ self._unitaries[head])
        return None

    def same_as(self, other, tol=0.0):
        """Whether two models agree on B, matrices compared within tol"""
        if self.dimension != other.dimension:
            return False
        if self.commands != other.commands:
            return False
        for b in self.commands:
            if not np.allclose(self.state_for(b), other.state_for(b),
                               rtol=0, atol=tol):
                return False
            if not np.allclose(self.unitary_for(b), other.unitary_for(b),
                               rtol=0, atol=tol):
                return False
            if not self.observable_for(b).same_as(other.observable_for(b),
                                                  tol):
                return False
        return True

    def __repr__(self):
        return 'Model(label=%r, dimension=%d, commands=%s)' % (
            self.label, self.dimension,
            [str(c) for c in self.sorted_commands()])


_IDENTITIES = {}


def _identity(dim):
    if dim not in _IDENTITIES:
        _IDENTITIES[dim] = _frozen(np.eye(dim))
    return _IDENTITIES[dim]


def _probabilities(state, unitary, observable):
    psi = unitary @ state
    raw = [np.real(np.vdot(psi, p @ psi)) for p in observable.projectors]
    if min(raw) < -1e-15:
        logger.warning("clipping negative round-off probability %r",
                       min(raw))
    return OutcomeDistribution(assert_distribution(raw),
                               eigenvalues=observable.eigenvalues)


def outcome_probabilities(model, b):
    """Pr(j|b) = <v(b)|U(b)^dagger M_j(b) U(b)|v(b)> for every outcome j

    Parameters
    ----------
    model : Model
    b : Command or str
        A command of the model's command set

    Returns
    -------
    OutcomeDistribution
        Probabilities in the order of the observable's eigenvalues

    Raises
    ------
    UnknownCommandError
        If b is not in the model's command set.
    InvariantViolation
        If the probabilities fail to form a distribution.
    """
    b = Command.coerce(b)
    if b not in model.commands:
        raise UnknownCommandError(b, 'model %s' % (model.label or ''))
    return _probabilities(model.state_for(b), model.unitary_for(b),
                          model.observable_for(b))


def outcome_probabilities_factored(model, f):
    """Probabilities for a command given as separate sub-commands

    Pr(j|b) = <v(b_v)|U(b_U)^dagger M_j(b_M) U(b_U)|v(b_v)>, each map keyed
    on its own sub-command.
    """
    return _probabilities(model.state_for(f.b_v), model.unitary_for(f.b_U),
                          model.observable_for(f.b_M))


def compose_unitary(model, b1, b2):
    """U(b1 + b2) = U(b2) U(b1), note the reversal of order"""
    return model.unitary_for(b2) @ model.unitary_for(b1)


def _restricted_durations(model):
    if model.durations is None:
        return None
    return dict(model.durations)


def reduce_to_identity_form(model):
    """The model (U|v>, 1, M)_B with the same outcome probabilities"""
    if model.identity_form:
        return model

    states = {b: model.unitary_for(b) @ model.state_for(b)
              for b in model.commands}
    observables = {b: model.observable_for(b) for b in model.commands}
    return Model(model.dimension, states, observables, unitaries=None,
                 commands=model.commands,
                 durations=_restricted_durations(model), label=model.label)


def reduce_to_observable_form(model):
    """The model (|v>, 1, U^dagger M U)_B with the same probabilities"""
    if model.identity_form:
        return model

    states = {b: model.state_for(b) for b in model.commands}
    observables = {}
    for b in model.commands:
        u = model.unitary_for(b)
        observables[b] = model.observable_for(b).conjugated(u.conj().T)
    return Model(model.dimension, states, observables, unitaries=None,
                 commands=model.commands,
                 durations=_restricted_durations(model), label=model.label)


class EquivalenceWitness:
    """A command-indexed unitary Q relating two models

    Parameters
    ----------
    q_map : dict
        Command to unitary matrix
    """
    def __init__(self, q_map):
        self._q = {}
        for command, q in q_map.items():
            try:
                self._q[Command.coerce(command)] = _frozen(as_unitary(q))
            except ValidationError as e:
                raise ValidationError("Q for command %r: %s" %
                                      (str(command), e)) from e

    @classmethod
    def constant(cls, q, commands):
        return cls({c: q for c in commands})

    def q_for(self, command):
        command = Command.coerce(command)
        try:
            return self._q[command]
        except KeyError:
            raise UnknownCommandError(command, 'equivalence witness') \
                from None


def _check_comparable(alpha, beta):
    if alpha.dimension != beta.dimension:
        raise DimensionMismatchError("Models have dimensions %d and %d" %
                                     (alpha.dimension, beta.dimension))
    if alpha.commands != beta.commands:
        raise ValidationError("Models have different command sets")


def conjugate_model(model, witness, label=None):
    """Apply Q(b) to every part of a model: Qv, QUQ^dagger, QMQ^dagger

    Unitaries are rebuilt per command of B, so a composition table does not
    survive conjugation by a command-dependent Q.
    """
    states = {}
    observables = {}
    unitaries = None if model.identity_form else {}
    for b in model.commands:
        q = witness.q_for(b)
        if q.shape[0] != model.dimension:
            raise DimensionMismatchError("Q for command %r has dimension %d, "
                                         "model has %d" %
                                         (str(b), q.shape[0],
                                          model.dimension))
        states[b] = q @ model.state_for(b)
        observables[b] = model.observable_for(b).conjugated(q)
        if unitaries is not None:
            unitaries[b] = q @ model.unitary_for(b) @ q.conj().T
    return Model(model.dimension, states, observables, unitaries=unitaries,
                 commands=model.commands,
                 durations=_restricted_durations(model),
                 label=label or model.label)


def check_unitary_equivalence(alpha, beta, w, tol=TOL_UNIT):
    """Whether Q(b) carries alpha onto beta for every command of B

    Checks v_beta = Q v_alpha, U_beta = Q U_alpha Q^dagger and
    M_beta = Q M_alpha Q^dagger, elementwise within tol.

    Raises
    ------
    ValidationError
        If the models differ in dimension or command set.
    """
    _check_comparable(alpha, beta)
    for b in sorted(alpha.commands):
        q = w.q_for(b)
        if q.shape[0] != alpha.dimension:
            raise DimensionMismatchError("Q for command %r has dimension %d"
                                         % (str(b), q.shape[0]))
        q_dag = q.conj().T

        if not np.allclose(beta.state_for(b), q @ alpha.state_for(b),
                           rtol=0, atol=tol):
            return False
        if not np.allclose(beta.unitary_for(b),
                           q @ alpha.unitary_for(b) @ q_dag,
                           rtol=0, atol=tol):
            return False

        m_alpha = alpha.observable_for(b).matrix()
        m_beta = beta.observable_for(b).matrix()
        if not np.allclose(m_beta, q @ m_alpha @ q_dag, rtol=0, atol=tol):
            return False
    return True


def _vector_map(w, commands, dim, name):
    """Resolve a constant vector or per-command vector map over commands"""
    result = {}
    if isinstance(w, dict):
        w = _command_map(w)
        for b in commands:
            if b not in w:
                raise UnknownCommandError(b, name)
            result[b] = as_state(w[b])
    else:
        vec = as_state(w)
        result = {b: vec for b in commands}

    for b, vec in result.items():
        if vec.shape[0] != dim:
            raise DimensionMismatchError("%s for command %r has dimension %d,"
                                         " model has %d" %
                                         (name, str(b), vec.shape[0], dim))
    return result


def mimic_models(model, w, w_perp, tol=TOL_UNIT):
    """Two mutually orthogonal models on H tensor H reproducing a model

    The first uses states v(b) tensor w(b), the second v(b) tensor
    w_perp(b); both replace U by U tensor 1 and M by M tensor 1, so for
    every b in B they give the input model's Pr(j|b).

    Parameters
    ----------
    model : Model
    w, w_perp : array-like or dict
        Unit vectors of the model's dimension, either constant or keyed by
        command over a command set containing B, with <w(b)|w_perp(b)> = 0.

    Returns
    -------
    Model, Model

    Raises
    ------
    ValidationError
        If w(b) and w_perp(b) are not orthogonal for some b, or the
        auxiliary vectors have the wrong dimension.
    """
    dim = model.dimension
    commands = sorted(model.commands)
    w_map = _vector_map(w, commands, dim, 'w')
    w_perp_map = _vector_map(w_perp, commands, dim, 'w_perp')
    for b in commands:
        overlap = abs(np.vdot(w_map[b], w_perp_map[b]))
        if overlap > tol:
            raise ValidationError("w and w_perp are not orthogonal for "
                                  "command %r (|<w|w_perp>| = %g)" %
                                  (str(b), overlap))

    identity = np.eye(dim, dtype=DTYPE)
    if model.identity_form:
        unitaries = None
    else:
        unitaries = {k: np.kron(u, identity)
                     for k, u in model.unitaries.items()}
    observables = {b: model.observable_for(b).tensor_identity(dim)
                   for b in commands}

    mimics = []
    for suffix, aux in (('w', w_map), ('w_perp', w_perp_map)):
        states = {b: np.kron(model.state_for(b), aux[b]) for b in commands}
        label = '%s(%s)' % (model.label or 'model', suffix)
        mimics.append(Model(dim * dim, states, observables,
                            unitaries=unitaries, commands=commands,
                            durations=_restricted_durations(model),
                            label=label))
    return mimics[0], mimics[1]


def flatten_factored(model, factored_commands, label=None):
    """The general model on flattened commands b_v + b_U + b_M

    Parameters
    ----------
    model : Model
        A model whose maps are keyed on sub-commands
    factored_commands : iterable of FactoredCommand

    Returns
    -------
    Model
        States, unitaries and observables keyed by the flattened command,
        with the factorization recorded.

    Raises
    ------
    ValidationError
        If two factorizations flatten to the same command but describe
        different states, unitaries or observables.
    """
    states = {}
    observables = {}
    unitaries = None if model.identity_form else {}
    durations = {} if model.durations is not None else None
    factorization = {}

    for f in factored_commands:
        flat = f.flatten()
        state = model.state_for(f.b_v)
        unitary = model.unitary_for(f.b_U)
        observable = model.observable_for(f.b_M)

        if flat in factorization:
            if not (np.allclose(states[flat], state, rtol=0, atol=TOL_UNIT)
                    and np.allclose(model.unitary_for(
                        factorization[flat].b_U), unitary, rtol=0,
                        atol=TOL_UNIT)
                    and observables[flat].same_as(observable, TOL_PROJ)):
                raise ValidationError(
                    "Factorizations %s and %s both flatten to %r but differ"
                    % (factorization[flat], f, str(flat)))
            continue

        factorization[flat] = f
        states[flat] = state
        observables[flat] = observable
        if unitaries is not None:
            unitaries[flat] = unitary
        if durations is not None and model.duration_for(f.b_U) is not None:
            durations[flat] = model.duration_for(f.b_U)

    return Model(model.dimension, states, observables, unitaries=unitaries,
                 commands=list(factorization), durations=durations,
                 factorization=factorization, label=label or model.label)
