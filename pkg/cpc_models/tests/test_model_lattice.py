import math
import unittest

import numpy as np

from cpc_models.commands import FactoredCommand
from cpc_models.exceptions import ValidationError
from cpc_models.linalg import basis_state, random_state, random_unitary
from cpc_models.models import (Model, SpectralDecomposition, flatten_factored,
                               mimic_models, outcome_probabilities)
from cpc_models.model_lattice import (Factored, RespectsConcatenation, Timed,
                                      DiagonalObservables, IdentityForm,
                                      BUILTIN_PROPERTIES, predicate,
                                      filter_models, FitCase, classify_fit)
from cpc_models.outcomes import OutcomeDistribution, WeightedCommandSet
from cpc_models.tests.base import TestBase


X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
BASIS = SpectralDecomposition.computational_basis(2)
PLUS = np.array([1, 1]) / math.sqrt(2)
MINUS = np.array([1, -1]) / math.sqrt(2)


class PropertyTests(TestBase):
    def test_builtin_names(self):
        self.assertEqual(set(BUILTIN_PROPERTIES),
                         {'factored', 'respects_concatenation', 'timed',
                          'diagonal_observables', 'identity_form'})
        self.assertIs(BUILTIN_PROPERTIES['timed'], Timed)

    def test_flattened_model_is_factored(self):
        base = Model(2, {'1': [1, 0]}, {'1': BASIS}, unitaries={'0': X})
        flat = flatten_factored(base, [FactoredCommand('1', '0', '1'),
                                       FactoredCommand('1', '', '1')])
        self.assertTrue(Factored.satisfied_by(flat))

    def test_unfactored_model(self):
        model = Model(2, {'0': [1, 0]}, {'0': BASIS})
        self.assertFalse(Factored.satisfied_by(model))

    def test_shared_preparation_must_agree(self):
        model = Model(2, {'10': [1, 0], '11': [0, 1]},
                      {'10': BASIS, '11': BASIS},
                      factorization={'10': FactoredCommand('1', '0', ''),
                                     '11': FactoredCommand('1', '1', '')})
        self.assertFalse(Factored.satisfied_by(model))

    def test_factorization_must_flatten(self):
        model = Model(2, {'10': [1, 0]}, {'10': BASIS},
                      factorization={'10': FactoredCommand('0', '1', '')})
        self.assertFalse(Factored.satisfied_by(model))

    def test_respects_concatenation(self):
        good = Model(2, {'0': [1, 0]}, {'0': BASIS},
                     unitaries={'0': X, '1': H, '01': H @ X})
        bad = Model(2, {'0': [1, 0]}, {'0': BASIS},
                    unitaries={'0': X, '1': H, '01': X @ H})
        self.assertTrue(RespectsConcatenation.satisfied_by(good))
        self.assertFalse(RespectsConcatenation.satisfied_by(bad))

    def test_identity_form_respects_concatenation(self):
        model = Model(2, {'0': [1, 0]}, {'0': BASIS})
        self.assertTrue(RespectsConcatenation.satisfied_by(model))
        self.assertTrue(IdentityForm.satisfied_by(model))

    def test_timed(self):
        timed = Model(2, {'0': [1, 0]}, {'0': BASIS},
                      unitaries={'0': X, '1': H},
                      durations={'0': 2e-8, '1': 1e-8})
        partly = Model(2, {'0': [1, 0]}, {'0': BASIS},
                       unitaries={'0': X, '1': H}, durations={'0': 2e-8})
        untimed = Model(2, {'0': [1, 0]}, {'0': BASIS}, unitaries={'0': X})
        self.assertTrue(Timed.satisfied_by(timed))
        self.assertFalse(Timed.satisfied_by(partly))
        self.assertFalse(Timed.satisfied_by(untimed))
        self.assertFalse(IdentityForm.satisfied_by(timed))

    def test_timed_identity_form(self):
        model = Model(2, {'0': [1, 0]}, {'0': BASIS}, durations={'0': 1e-8})
        self.assertTrue(Timed.satisfied_by(model))

    def test_diagonal_observables(self):
        self.assertTrue(DiagonalObservables.satisfied_by(
            Model(2, {'0': [1, 0]}, {'0': BASIS})))
        self.assertFalse(DiagonalObservables.satisfied_by(
            Model(2, {'0': [1, 0]}, {'0': BASIS.conjugated(H)})))

    def test_predicate(self):
        small = predicate('small', lambda m: m.dimension <= 2)
        self.assertEqual(small.NAME, 'small')
        self.assertTrue(small.satisfied_by(Model(2, {'0': [1, 0]},
                                                 {'0': BASIS})))
        self.assertFalse(small.satisfied_by(self.random_model(3, ['0'])))


class FilterTests(TestBase):
    def test_intersection_keeps_order(self):
        models = [self.random_model(2, ['0']),
                  Model(2, {'0': [1, 0]}, {'0': BASIS}, label='a'),
                  self.random_model(2, ['0'], identity_form=True),
                  Model(2, {'0': [0, 1]}, {'0': BASIS}, label='b')]
        obs = filter_models(models, [IdentityForm, DiagonalObservables])
        self.assertEqual([m.label for m in obs], ['a', 'b'])

    def test_no_properties(self):
        models = [self.random_model(2, ['0']) for _ in range(3)]
        self.assertEqual(filter_models(models, []), models)

    def mixed_models(self, count):
        models = []
        for i in range(count):
            dim = int(self.rng.integers(2, 4))
            identity, diagonal, timed = self.rng.integers(2, size=3)
            commands = ['0', '1']
            states = {b: random_state(dim, self.rng) for b in commands}
            if diagonal:
                basis = SpectralDecomposition.computational_basis(dim)
                observables = {b: basis for b in commands}
            else:
                observables = {b: self.random_observable(dim)
                               for b in commands}
            unitaries = None
            if not identity:
                unitaries = {b: random_unitary(dim, self.rng)
                             for b in commands}
            durations = {b: 1e-8 for b in commands} if timed else None
            models.append(Model(dim, states, observables,
                                unitaries=unitaries, durations=durations,
                                label='m%d' % i))
        return models

    def test_narrowing(self):
        models = [self.random_model(2, ['0']) for _ in range(3)]
        one = filter_models(models, [IdentityForm])
        both = filter_models(models, [IdentityForm, DiagonalObservables])
        self.assertTrue(all(m in one for m in both))

    def test_meet_is_sequential_filtering(self):
        models = self.mixed_models(40)
        qubits = predicate('qubit', lambda m: m.dimension == 2)
        props = [IdentityForm, DiagonalObservables, Timed, qubits,
                 RespectsConcatenation]
        for _ in range(30):
            picks = self.rng.permutation(len(props))
            cut = int(self.rng.integers(0, len(props) + 1))
            first = [props[i] for i in picks[:cut]]
            second = [props[i] for i in picks[cut:]]
            combined = filter_models(models, first + second)
            sequential = filter_models(filter_models(models, first), second)
            self.assertEqual([m.label for m in combined],
                             [m.label for m in sequential])
            meet = [m for m in models
                    if all(p.satisfied_by(m) for p in first + second)]
            self.assertEqual(combined, meet)

    def test_mixed_population_is_split(self):
        models = self.mixed_models(40)
        kept = filter_models(models, [IdentityForm, Timed])
        self.assertTrue(0 < len(kept) < len(models))


class ClassifyFitTests(unittest.TestCase):
    def setUp(self):
        # both fit [0.5, 0.5] on command 0 but are told apart on command 1
        hadamard_basis = BASIS.conjugated(H)
        self.alpha = Model(2, {'0': PLUS, '1': PLUS},
                           {'0': BASIS, '1': hadamard_basis}, label='alpha')
        self.beta = Model(2, {'0': MINUS, '1': MINUS},
                          {'0': BASIS, '1': hadamard_basis}, label='beta')
        self.data = {'0': OutcomeDistribution([0.5, 0.5])}
        self.w = WeightedCommandSet.uniform(['0'])

    def test_too_big(self):
        report = classify_fit([self.alpha, self.beta], self.data, self.w,
                              eps=0.01, spread_cap=0.1,
                              eval_commands=['0', '1'])
        self.assertIs(report.case, FitCase.TooBig)
        self.assertEqual([name for name, _ in report.within_eps],
                         ['alpha', 'beta'])
        self.assertAlmostEqual(report.pairwise_spread, math.pi / 4,
                               places=12)

    def test_good_when_evaluation_agrees(self):
        report = classify_fit([self.alpha, self.beta], self.data, self.w,
                              eps=0.01, spread_cap=0.1)
        self.assertIs(report.case, FitCase.Good)
        self.assertEqual(report.pairwise_spread, 0.0)

    def test_no_fit(self):
        data = {'0': OutcomeDistribution([1, 0])}
        report = classify_fit([self.alpha, self.beta], data, self.w,
                              eps=0.01, spread_cap=0.1)
        self.assertIs(report.case, FitCase.NoFit)
        self.assertEqual(report.within_eps, [])
        self.assertAlmostEqual(dict(report.distances)['alpha'],
                               math.pi / 4, places=12)

    def test_single_fit_is_good(self):
        report = classify_fit([self.alpha], self.data, self.w, eps=0.01,
                              spread_cap=0.1, eval_commands=['0', '1'])
        self.assertIs(report.case, FitCase.Good)

    def test_unlabelled_models_are_numbered(self):
        model = Model(2, {'0': PLUS}, {'0': BASIS})
        report = classify_fit([self.alpha, model], self.data, self.w,
                              eps=0.01, spread_cap=0.1)
        self.assertEqual([name for name, _ in report.distances],
                         ['alpha', 'model_1'])

    def test_record(self):
        report = classify_fit([self.alpha, self.beta], self.data, self.w,
                              eps=0.01, spread_cap=0.1,
                              eval_commands=['0', '1'])
        record = report.to_record()
        self.assertEqual(record['case'], 'TooBig')
        self.assertEqual(record['within_eps'], ['alpha', 'beta'])
        self.assertEqual(record['eval_commands'], ['0', '1'])

    def test_rejects_bad_thresholds(self):
        with self.assertRaises(ValidationError):
            classify_fit([self.alpha], self.data, self.w, eps=0,
                         spread_cap=0.1)
        with self.assertRaises(ValidationError):
            classify_fit([self.alpha], self.data, self.w, eps=0.1,
                         spread_cap=-1)


class FitPropertyTests(TestBase):
    commands = ['0', '1', '01']

    def model_data(self, model):
        return {b: outcome_probabilities(model, b) for b in self.commands}

    def test_fitting_set_grows_with_eps(self):
        w = WeightedCommandSet.uniform(self.commands)
        eps_grid = [0.02, 0.05, 0.1, 0.3, 0.6, 1.0]
        for _ in range(10):
            truth = self.random_model(2, self.commands)
            data = self.model_data(truth)
            models = [self.random_model(2, self.commands)
                      for _ in range(5)]
            previous = set()
            fitted = False
            for eps in eps_grid:
                report = classify_fit(models, data, w, eps=eps,
                                      spread_cap=0.1)
                names = {i for i, (_, d) in enumerate(report.distances)
                         if d <= eps}
                self.assertTrue(previous <= names)
                if fitted:
                    self.assertIsNot(report.case, FitCase.NoFit)
                fitted = report.case is not FitCase.NoFit
                previous = names

    def test_mimic_pair_fits_together(self):
        w = WeightedCommandSet.uniform(self.commands)
        for _ in range(20):
            dim = int(self.rng.integers(2, 4))
            model = self.random_model(dim, self.commands)
            first, second = mimic_models(model, basis_state(dim, 0),
                                         basis_state(dim, 1))
            data = {b: OutcomeDistribution(self.random_distribution(
                len(model.observable_for(b))))
                for b in self.commands}
            if self.rng.integers(2):
                data = self.model_data(model)
            for eps in self.rng.uniform(0.01, 1.2, size=5):
                report = classify_fit([first, second], data, w, eps=eps,
                                      spread_cap=0.1)
                self.assertIn(len(report.within_eps), (0, 2))
                if report.within_eps:
                    self.assertIs(report.case, FitCase.Good)


if __name__ == '__main__':
    unittest.main()
