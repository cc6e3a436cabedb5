"""Narrowing a set of models by properties and judging fits against data

Each property picks out a subset of a model set; a list of properties picks
out their intersection. The surviving models are then compared with measured
data, and the outcome is one of three cases: several fitting models that
disagree with each other (TooBig), no fitting model (NoFit), or fitting
models that agree closely (Good).
"""
import enum
import itertools
import logging

import numpy as np

from cpc_models.commands import FactoredCommand, as_commands
from cpc_models.config_manager import TOL_UNIT, TOL_PROJ
from cpc_models.exceptions import ValidationError
from cpc_models.model_stats import weighted_model_distance
from cpc_models.outcomes import WeightedCommandSet


logger = logging.getLogger(__name__)


class Property:
    """A decidable property of a model

    Subclasses set NAME and implement _check. Properties are stateless:
    satisfied_by is a pure function of the model.
    """
    NAME = None

    @classmethod
    def satisfied_by(cls, model):
        return bool(cls._check(model))

    @classmethod
    def _check(cls, model):
        raise NotImplementedError


class Factored(Property):
    """Every command is b_v + b_U + b_M with each part acting on its own

    Commands sharing a preparation part must share the state, those sharing
    a transformation part the unitary, and those sharing a measurement part
    the observable.
    """
    NAME = 'factored'

    @classmethod
    def _check(cls, model):
        factorization = model.factorization
        if factorization is None:
            return False
        if not model.commands.issubset(factorization):
            return False

        seen_v, seen_u, seen_m = {}, {}, {}
        for command in model.sorted_commands():
            f = FactoredCommand(*factorization[command])
            if f.flatten() != command:
                return False

            state = model.state_for(command)
            unitary = model.unitary_for(command)
            observable = model.observable_for(command)

            if f.b_v in seen_v and not np.allclose(seen_v[f.b_v], state,
                                                   rtol=0, atol=TOL_UNIT):
                return False
            if f.b_U in seen_u and not np.allclose(seen_u[f.b_U], unitary,
                                                   rtol=0, atol=TOL_UNIT):
                return False
            if f.b_M in seen_m and not seen_m[f.b_M].same_as(observable,
                                                             TOL_PROJ):
                return False
            seen_v.setdefault(f.b_v, state)
            seen_u.setdefault(f.b_U, unitary)
            seen_m.setdefault(f.b_M, observable)
        return True


class RespectsConcatenation(Property):
    """U(b1 + b2) = U(b2) U(b1) wherever all three are tabled"""
    NAME = 'respects_concatenation'

    @classmethod
    def _check(cls, model):
        table = model.unitaries
        if table is None:
            return True
        for composite in table:
            for head, tail in composite.splits():
                if head in table and tail in table:
                    expected = table[tail] @ table[head]
                    if not np.allclose(table[composite], expected, rtol=0,
                                       atol=TOL_UNIT):
                        logger.debug("U(%s) != U(%s) U(%s)", composite, tail,
                                     head)
                        return False
        return True


class Timed(Property):
    """Every transformation command carries a positive duration"""
    NAME = 'timed'

    @classmethod
    def _check(cls, model):
        durations = model.durations
        if durations is None:
            return False
        table = model.unitaries
        required = model.commands if table is None else set(table)
        return all(durations.get(c, 0) > 0 for c in required)


class DiagonalObservables(Property):
    NAME = 'diagonal_observables'

    @classmethod
    def _check(cls, model):
        for command in model.commands:
            for p in model.observable_for(command).projectors:
                off_diagonal = p - np.diag(np.diag(p))
                if np.max(np.abs(off_diagonal)) > TOL_PROJ:
                    return False
        return True


class IdentityForm(Property):
    NAME = 'identity_form'

    @classmethod
    def _check(cls, model):
        return model.identity_form


BUILTIN_PROPERTIES = {p.NAME: p for p in (Factored, RespectsConcatenation,
                                          Timed, DiagonalObservables,
                                          IdentityForm)}


def predicate(name, fn):
    """Wrap a function Model -> bool as a Property"""
    return type('Predicate_%s' % name, (Property, ),
                {'NAME': name, '_check': classmethod(lambda cls, m: fn(m))})


def filter_models(models, props):
    """Models satisfying every property, in their original order"""
    models = list(models)
    for prop in props:
        models = [m for m in models if prop.satisfied_by(m)]
    return models


class FitCase(enum.Enum):
    TooBig = 'TooBig'
    NoFit = 'NoFit'
    Good = 'Good'


class FitReport:
    """Outcome of comparing a model set with data

    Attributes
    ----------
    distances : list of (str, float)
        Every model's weighted distance to the data, in input order
    within_eps : list of (str, float)
        The models that fit, that is those at distance <= eps
    pairwise_spread : float
        Largest weighted distance between two fitting models over the
        evaluation commands, 0 with fewer than two fitting models
    case : FitCase
    """
    def __init__(self, distances, within_eps, pairwise_spread, case, eps,
                 spread_cap, eval_commands):
        self.distances = distances
        self.within_eps = within_eps
        self.pairwise_spread = pairwise_spread
        self.case = case
        self.eps = eps
        self.spread_cap = spread_cap
        self.eval_commands = eval_commands

    def to_record(self):
        return {'report': 'fit',
                'case': self.case.value,
                'eps': self.eps,
                'spread_cap': self.spread_cap,
                'pairwise_spread': self.pairwise_spread,
                'distances': {name: d for name, d in self.distances},
                'within_eps': [name for name, _ in self.within_eps],
                'eval_commands': [str(c) for c in self.eval_commands]}

    def __repr__(self):
        return 'FitReport(case=%s, within_eps=%r, pairwise_spread=%r)' % (
            self.case.value, self.within_eps, self.pairwise_spread)


def _model_name(model, index):
    return model.label if model.label else 'model_%d' % index


def classify_fit(models, data, w, eps, spread_cap, eval_commands=None):
    """Which of the three cases a model set is in, given data

    Parameters
    ----------
    models : list of Model
    data : dict
        Command to measured relative frequencies
    w : WeightedCommandSet
        Weighting used for the distance of each model to the data
    eps : float
        Models within eps of the data fit
    spread_cap : float
        Fitting models further apart than this disagree
    eval_commands : iterable of Command, optional
        Commands on which fitting models are compared with one another,
        weighted uniformly. Defaults to the commands of w.

    Returns
    -------
    FitReport
    """
    if not eps > 0:
        raise ValidationError("eps must be positive")
    if not spread_cap > 0:
        raise ValidationError("spread_cap must be positive")

    if eval_commands is None:
        eval_commands = list(w.commands)
    else:
        eval_commands = list(as_commands(eval_commands))
    w_eval = WeightedCommandSet.uniform(eval_commands)

    distances = []
    fitting = []
    for i, model in enumerate(models):
        d = weighted_model_distance(model, data, w)
        name = _model_name(model, i)
        distances.append((name, d))
        if d <= eps:
            fitting.append((name, d, model))

    spread = 0.0
    for (_, _, a), (_, _, b) in itertools.combinations(fitting, 2):
        spread = max(spread, weighted_model_distance(a, b, w_eval))

    if not fitting:
        case = FitCase.NoFit
    elif spread > spread_cap:
        case = FitCase.TooBig
    else:
        case = FitCase.Good

    logger.debug("%d of %d models within %g, spread %g", len(fitting),
                 len(distances), eps, spread)
    return FitReport(distances, [(name, d) for name, d, _ in fitting], spread,
                     case, eps, spread_cap, eval_commands)
