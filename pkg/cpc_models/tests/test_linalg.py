import math
import unittest

import numpy as np
import numpy.testing as npt

from cpc_models.exceptions import (ValidationError, DimensionMismatchError,
                                   InvariantViolation)
from cpc_models.linalg import (as_state, apply_unitary, spectral_norm,
                               power_iteration_norm, ray_angle, bloch_angle,
                               RandomSource, sample_outcomes,
                               sample_outcomes_streams, random_unitary,
                               random_state, is_unitary, check_distribution,
                               assert_distribution, basis_state)
from cpc_models.outcomes import OutcomeCounts
from cpc_models.tests.base import TestBase


class StateTests(unittest.TestCase):
    def test_rejects_unnormalized(self):
        with self.assertRaises(ValidationError):
            as_state([1, 1])

    def test_does_not_renormalize(self):
        s = as_state([1 + 1e-12, 0])
        self.assertEqual(s[0], 1 + 1e-12)

    def test_rejects_matrix(self):
        with self.assertRaises(ValidationError):
            as_state(np.eye(2))

    def test_basis_state_range(self):
        with self.assertRaises(ValidationError):
            basis_state(2, 2)


class ApplyUnitaryTests(unittest.TestCase):
    def test_identity(self):
        s = np.array([0.6, 0.8j])
        npt.assert_array_equal(apply_unitary(np.eye(2), s), s)

    def test_x_swaps_basis_states(self):
        x = np.array([[0, 1], [1, 0]])
        npt.assert_array_equal(apply_unitary(x, [1, 0]), [0, 1])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            apply_unitary(np.eye(2), [1, 0, 0])

    def test_rejects_non_unitary(self):
        with self.assertRaises(ValidationError):
            apply_unitary([[1, 1], [0, 1]], [1, 0])


class SpectralNormTests(TestBase):
    def test_identity(self):
        self.assertAlmostEqual(spectral_norm(np.eye(4)), 1.0, places=12)

    def test_diagonal(self):
        self.assertAlmostEqual(spectral_norm(np.diag([3, -5, 1j])), 5.0,
                               places=12)

    def test_zero_matrix(self):
        self.assertEqual(spectral_norm(np.zeros((3, 3))), 0.0)
        self.assertEqual(spectral_norm(np.zeros((3, 3)), method='power'),
                         0.0)

    def test_rejects_nan(self):
        m = np.eye(2)
        m[0, 1] = np.nan
        with self.assertRaises(ValidationError):
            spectral_norm(m)

    def test_diagonal_example(self):
        self.assertEqual(spectral_norm(np.diag([3, -4])), 4.0)
        self.assertAlmostEqual(spectral_norm(np.diag([3, -4]),
                                             method='power'), 4.0,
                               delta=4e-12)

    def test_power_iteration_matches_svd(self):
        for dim in (2, 3, 5, 8):
            # singular values with a clear gap at the top
            values = np.concatenate([[3.0], self.rng.uniform(0.1, 1.5,
                                                             dim - 1)])
            m = (random_unitary(dim, self.rng) @ np.diag(values)
                 @ random_unitary(dim, self.rng))
            self.assertAlmostEqual(power_iteration_norm(m), 3.0,
                                   delta=3e-12)
            self.assertAlmostEqual(spectral_norm(m), 3.0, delta=3e-12)

    def test_scaling(self):
        for _ in range(20):
            dim = int(self.rng.integers(1, 7))
            m = (self.rng.normal(size=(dim, dim))
                 + 1j * self.rng.normal(size=(dim, dim)))
            c = complex(*self.rng.normal(size=2)) * 10
            self.assertAlmostEqual(spectral_norm(c * m),
                                   abs(c) * spectral_norm(m), delta=1e-10)

    def test_unitary_has_norm_one(self):
        for dim in (1, 2, 3, 6):
            u = random_unitary(dim, self.rng)
            self.assertAlmostEqual(spectral_norm(u), 1.0, delta=1e-10)
            self.assertAlmostEqual(spectral_norm(u, method='power'), 1.0,
                                   delta=1e-10)

    def test_adjoint_symmetry(self):
        for _ in range(20):
            m = (self.rng.normal(size=(4, 3))
                 + 1j * self.rng.normal(size=(4, 3)))
            self.assertAlmostEqual(spectral_norm(m),
                                   spectral_norm(m.conj().T), delta=1e-12)

    def test_unitary_difference_bounded_by_two(self):
        for _ in range(10):
            u = random_unitary(4, self.rng)
            v = random_unitary(4, self.rng)
            self.assertLessEqual(spectral_norm(u - v), 2 + 1e-12)


class AngleTests(TestBase):
    def test_equal_vectors(self):
        s = random_state(5, self.rng)
        self.assertEqual(ray_angle(s, s), 0.0)

    def test_global_phase_ignored(self):
        s = random_state(3, self.rng)
        self.assertAlmostEqual(ray_angle(s, 1j * s), 0.0, places=7)

    def test_orthogonal(self):
        self.assertAlmostEqual(ray_angle([1, 0], [0, 1]), math.pi / 2,
                               places=12)

    def test_matches_arccos(self):
        a = random_state(4, self.rng)
        b = random_state(4, self.rng)
        exp = math.acos(min(1.0, abs(np.vdot(a, b))))
        self.assertAlmostEqual(ray_angle(a, b), exp, places=10)

    def test_bloch_angle(self):
        self.assertAlmostEqual(bloch_angle([1, 0], [0, 1]), math.pi,
                               places=12)


class RandomSourceTests(unittest.TestCase):
    def test_reproducible(self):
        a = RandomSource(7, 3).generator().random(5)
        b = RandomSource(7, 3).generator().random(5)
        npt.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = RandomSource(7, 0).generator().random(5)
        b = RandomSource(7, 1).generator().random(5)
        self.assertFalse(np.array_equal(a, b))

    def test_spawn(self):
        children = RandomSource(7, 0).spawn(3)
        self.assertEqual([c.stream_id for c in children], [0, 1, 2])
        self.assertEqual([c.spawn_key for c in children],
                         [(0, 0), (0, 1), (0, 2)])
        self.assertTrue(all(c.seed == 7 for c in children))

    def test_sibling_children_do_not_collide(self):
        first = RandomSource(7, 0).spawn(3)
        second = RandomSource(7, 1).spawn(3)
        keys = [c.spawn_key for c in first + second]
        self.assertEqual(len(set(keys)), 6)
        draws = [tuple(c.generator().random(4)) for c in first + second]
        self.assertEqual(len(set(draws)), 6)

    def test_child_differs_from_root(self):
        root = RandomSource(7, 0).generator().random(4)
        child = RandomSource(7, 0).spawn(1)[0].generator().random(4)
        self.assertFalse(np.array_equal(root, child))

    def test_rejects_negative_seed(self):
        with self.assertRaises(ValidationError):
            RandomSource(-1)


class SamplingTests(unittest.TestCase):
    def test_counts_sum(self):
        counts = sample_outcomes([0.2, 0.3, 0.5], 1000, RandomSource(1))
        self.assertIsInstance(counts, OutcomeCounts)
        self.assertEqual(counts.n_trials, 1000)
        self.assertEqual(len(counts), 3)

    def test_point_mass(self):
        counts = sample_outcomes([0, 1, 0], 50, RandomSource(1))
        npt.assert_array_equal(counts.counts, [0, 50, 0])

    def test_zero_probability_never_drawn(self):
        counts = sample_outcomes([0.5, 0, 0.5], 10000, RandomSource(2))
        self.assertEqual(counts.counts[1], 0)

    def test_reproducible(self):
        a = sample_outcomes([0.1, 0.9], 100, RandomSource(5, 2))
        b = sample_outcomes([0.1, 0.9], 100, RandomSource(5, 2))
        npt.assert_array_equal(a.counts, b.counts)

    def test_rejects_bad_distribution(self):
        with self.assertRaises(ValidationError):
            sample_outcomes([0.5, 0.6], 10, RandomSource(0))
        with self.assertRaises(ValidationError):
            sample_outcomes([1.0], 0, RandomSource(0))

    def test_streams_merge(self):
        counts = sample_outcomes_streams([0.25, 0.75], 1001, RandomSource(3),
                                         4)
        self.assertEqual(counts.n_trials, 1001)
        again = sample_outcomes_streams([0.25, 0.75], 1001, RandomSource(3),
                                        4)
        npt.assert_array_equal(counts.counts, again.counts)


class DistributionTests(unittest.TestCase):
    def test_clips_round_off(self):
        obs = check_distribution([1 + 1e-12, -1e-12])
        self.assertEqual(obs[1], 0.0)

    def test_rejects_negative(self):
        with self.assertRaises(ValidationError):
            check_distribution([1.5, -0.5])

    def test_assert_distribution(self):
        with self.assertRaises(InvariantViolation):
            assert_distribution([0.5, 0.4])


class RandomUnitaryTests(TestBase):
    def test_unitary(self):
        for dim in (1, 2, 5):
            self.assertTrue(is_unitary(random_unitary(dim, self.rng)))


if __name__ == '__main__':
    unittest.main()
