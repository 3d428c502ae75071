import math
import unittest

import numpy as np

from zope.interface import implementer

from halfspace.learning import evaluation, geometry, learners, log, solvers, synthdata
from halfspace.learning.errors import (DimensionMismatch, FeatureBlowup,
    InsufficientSamples, InvariantViolation, NoCandidate, ZeroVector)
from halfspace.learning.geometry import Hyperplane
from halfspace.learning.learners import IBandOracle, LocalizationSchedule
from halfspace.learning.synthdata import Dataset, MarginalSpec, NoiseSpec


@implementer(IBandOracle)
class IdentityOracle(object):

    def __call__(self, sampler, w, gamma, alpha, tau, delta):
        return w, {}


@implementer(IBandOracle)
class PerfectOracle(object):

    def __call__(self, sampler, w, gamma, alpha, tau, delta):
        return sampler.w_star, {'band_count': 0, 'raw_draws': 0, 'objective': 0.0}


@implementer(IBandOracle)
class FlipOracle(object):

    def __call__(self, sampler, w, gamma, alpha, tau, delta):
        return -w, {}


class ContradictorySampler(object):
    """Every draw holds the same instance under both labels."""

    d = 2
    w_star = None

    def draw(self, n):
        X = np.tile([1.0, 0.0], (max(n, 2), 1))
        y = np.where(np.arange(max(n, 2)) % 2 == 0, 1, -1)
        return Dataset(X, y)


class TestSampleBounds(unittest.TestCase):

    def test_realizable(self):
        self.assertEqual(learners.realizable_sample_bound(1, 0.5, 0.5), 37)
        self.assertGreater(learners.realizable_sample_bound(3, 0.05, 0.1),
            2 * learners.realizable_sample_bound(3, 0.1, 0.1))
        self.assertGreater(learners.realizable_sample_bound(6, 0.1, 0.1),
            learners.realizable_sample_bound(3, 0.1, 0.1))

    def test_ranges(self):
        self.assertRaises(ValueError, learners.realizable_sample_bound, 2, 0.0, 0.1)
        self.assertRaises(ValueError, learners.agnostic_sample_bound, 2, 0.1, 1.0)
        self.assertRaises(ValueError, learners.bounded_noise_sample_bound, 2, 0.1, 0.1, 0.5)

    def test_kearns_li_repetitions(self):
        m, r = learners.kearns_li_repetitions(2, 0.5, 0.5)
        self.assertEqual(m, 34)
        self.assertEqual(r, int(math.ceil(m ** 2 * math.log(4.0))))
        self.assertRaises(ValueError, learners.kearns_li_repetitions, 2, 0.5, 1.0)

    def test_kearns_li_sets_stay_clean(self):
        # noise rate 0.1 epsilon / d leaves a fair share of oracle sets clean
        for d, epsilon in ((5, 0.2), (10, 0.1), (2, 0.5)):
            m = learners.kearns_li_sample_size(d, epsilon)
            clean = (1.0 - 0.1 * epsilon / d) ** m
            self.assertGreaterEqual(clean, 1.0 / m ** 2)
            self.assertGreater(clean, 0.2)
        self.assertEqual(learners.kearns_li_sample_size(5, 0.2), 300)


class TestRealizable(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})

    def test_separable(self):
        S = Dataset([[2.0, 0.0], [-1.0, 1.0]], [1, -1])
        h = learners.train_lp_realizable(S)
        self.assertEqual(evaluation.empirical_error(h, S), 0.0)

    def test_contradictory(self):
        S = Dataset([[1.0, 0.0], [1.0, 0.0]], [1, -1])
        self.assertIsNone(learners.train_lp_realizable(S))

    def test_empty(self):
        self.assertRaises(ValueError, learners.train_lp_realizable, Dataset(np.zeros((0, 2)), []))

    def test_gaussian(self):
        w_star = synthdata.random_w_star(10, 4)
        S = synthdata.generate(MarginalSpec('gaussian', 10), w_star, synthdata.NO_NOISE, 500, 4)
        h = learners.train_lp_realizable(S)
        self.assertEqual(evaluation.empirical_error(h, S), 0.0)


class TestKearnsLi(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})
        self.w_star = geometry.normalize([1.0, 2.0])

    def _sampler(self):
        return synthdata.DistributionSampler(MarginalSpec('gaussian', 2), self.w_star,
            synthdata.NO_NOISE, 12)

    def test_noiseless(self):
        h = learners.train_kearns_li(self._sampler(), 2, 0.2, 0.5, cap=5)
        estimate = evaluation.mc_error(h, MarginalSpec('gaussian', 2), self.w_star,
            synthdata.NO_NOISE, 20000, 1)
        self.assertLess(estimate.value, 0.05)

    def test_deterministic(self):
        a = learners.train_kearns_li(self._sampler(), 2, 0.2, 0.5, cap=3)
        b = learners.train_kearns_li(self._sampler(), 2, 0.2, 0.5, cap=3)
        self.assertTrue(np.array_equal(a.w, b.w))

    def test_no_candidate(self):
        self.assertRaises(NoCandidate, learners.train_kearns_li, ContradictorySampler(),
            2, 0.5, 0.5, 3)

    def test_dimension(self):
        self.assertRaises(DimensionMismatch, learners.train_kearns_li, self._sampler(), 3, 0.5, 0.5, 3)


class TestAveraging(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})

    def test_examples(self):
        h = learners.train_averaging(Dataset([[1.0, 0.0], [-1.0, 0.0]], [1, -1]))
        self.assertTrue(np.allclose(h.w, [1.0, 0.0]))
        self.assertRaises(ZeroVector, learners.train_averaging,
            Dataset([[1.0, 0.0], [1.0, 0.0]], [1, -1]))
        self.assertRaises(ValueError, learners.train_averaging, Dataset(np.zeros((0, 2)), []))

    def test_gaussian_angle(self):
        w_star = synthdata.random_w_star(10, 6)
        S = synthdata.generate(MarginalSpec('gaussian', 10), w_star, synthdata.NO_NOISE, 50000, 6)
        self.assertLessEqual(geometry.angle(learners.train_averaging(S), w_star), 0.05)


class TestMonomials(unittest.TestCase):

    def test_expand(self):
        self.assertTrue(np.array_equal(learners.expand_monomials([2.0, 3.0], 1), [1.0, 2.0, 3.0]))
        self.assertTrue(np.array_equal(learners.expand_monomials([2.0, 3.0], 2),
            [1.0, 2.0, 3.0, 4.0, 6.0, 9.0]))
        self.assertEqual(learners.expand_monomials(np.ones(3), 4).shape, (35, ))
        self.assertEqual(learners.expand_monomials(np.ones((7, 3)), 2).shape, (7, 10))

    def test_exponents(self):
        self.assertListEqual(learners.monomial_exponents(2, 2),
            [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)])
        x = np.array([0.5, -2.0, 3.0])
        expected = [np.prod(x ** np.array(e)) for e in learners.monomial_exponents(3, 3)]
        self.assertTrue(np.allclose(learners.expand_monomials(x, 3), expected))

    def test_errors(self):
        self.assertRaises(ValueError, learners.expand_monomials, [1.0, 2.0], 0)
        self.assertRaises(FeatureBlowup, learners.expand_monomials, np.zeros(1000), 3)


class TestThreshold(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(learners.select_threshold([-1.0, 1.0], [-1, 1]), 0.0)
        self.assertEqual(learners.select_threshold([0.2, -0.4, 0.9], [1, 1, 1]), -1.0)
        self.assertRaises(ValueError, learners.select_threshold, [], [])

    def test_exhaustive(self):
        generator = np.random.default_rng(9)
        for trial in range(200):
            values = generator.uniform(-0.9, 0.9, 50)
            labels = np.where(values + generator.normal(0, 0.3, 50) >= 0, 1, -1)
            theta = learners.select_threshold(values, labels)
            error = np.sum(geometry.sign(values - theta) != labels)
            # predict +1 on values >= t for every split point t
            best = min(np.sum(np.where(values >= t, 1, -1) != labels)
                for t in np.concatenate([values, [1.0]]))
            self.assertEqual(error, best, "trial %d" % trial)


class TestPolyRegression(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})

    def test_one_dimensional_sign(self):
        x = np.concatenate([np.linspace(-1.0, -0.01, 50), np.linspace(0.01, 1.0, 50)])
        S = synthdata.label_realizable(x.reshape(-1, 1), Hyperplane([1.0]))
        f = learners.train_poly_regression(S, 1)
        self.assertEqual(evaluation.empirical_error(f, S), 0.0)

    def test_half_l1_inequality(self):
        marginal = MarginalSpec('gaussian', 2)
        w_star = geometry.normalize([1.0, -1.0])
        for seed in range(5):
            S = synthdata.generate(marginal, w_star, NoiseSpec.rcn(0.2), 300, seed)
            f = learners.train_poly_regression(S, 2)
            l1 = float(np.abs(f.p(S.X) - S.y).mean())
            self.assertLessEqual(evaluation.empirical_error(f, S), 0.5 * l1 + 1e-12)

    def test_l1_monotone_in_degree(self):
        S = synthdata.generate(MarginalSpec('gaussian', 2), geometry.normalize([1.0, 0.5]),
            NoiseSpec.adversarial(0.1), 300, 3)
        fits = [learners.train_poly_regression(S, k) for k in (1, 2, 3)]
        l1 = [float(np.abs(f.p(S.X) - S.y).mean()) for f in fits]
        for lower, higher in zip(l1, l1[1:]):
            self.assertLessEqual(higher, lower + 1e-6)

    def test_sign_approximation(self):
        S = synthdata.generate(MarginalSpec('gaussian', 1), Hyperplane([1.0]), synthdata.NO_NOISE,
            2000, 5)
        l1 = []
        for k in (1, 3, 5):
            Phi = learners.expand_monomials(S.X, k)
            l1.append(float(np.abs(Phi.dot(solvers.l1_fit(Phi, S.y)) - S.y).mean()))
        for lower, higher in zip(l1, l1[1:]):
            self.assertLessEqual(higher, lower + 1e-3)

    def test_describe(self):
        S = synthdata.generate(MarginalSpec('gaussian', 2), geometry.normalize([1.0, 0.5]),
            synthdata.NO_NOISE, 100, 3)
        description = learners.train_poly_regression(S, 2).describe()
        self.assertEqual(description['kind'], 'poly_threshold')
        self.assertEqual(len(description['coeffs']), 6)
        self.assertTrue(-1.0 <= description['theta'] <= 1.0)

    def test_errors(self):
        self.assertRaises(InsufficientSamples, learners.train_poly_regression,
            Dataset(np.zeros((3, 2)), [1, -1, 1]), 2)
        self.assertRaises(FeatureBlowup, learners.train_poly_regression,
            Dataset(np.zeros((2, 1000)), [1, -1]), 3)


class TestRepeatAndValidate(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})
        self.w_star = geometry.normalize([1.0, 1.0])
        self.validation = synthdata.generate(MarginalSpec('gaussian', 2), self.w_star,
            synthdata.NO_NOISE, 500, 2)

    def test_single_run(self):
        h = Hyperplane([0.0, 1.0])
        self.assertIs(learners.repeat_and_validate(lambda i: h, 1, self.validation), h)

    def test_planted(self):
        candidates = [Hyperplane([0.0, 1.0]), self.w_star, -self.w_star]
        best = learners.repeat_and_validate(lambda i: candidates[i], 3, self.validation)
        self.assertIs(best, self.w_star)

    def test_ties_to_lowest_index(self):
        candidates = [Hyperplane([1.0, 0.0]), Hyperplane([1.0, 0.0])]
        best = learners.repeat_and_validate(lambda i: candidates[i], 2, self.validation)
        self.assertIs(best, candidates[0])

    def test_errors(self):
        self.assertRaises(ValueError, learners.repeat_and_validate, lambda i: self.w_star, 0,
            self.validation)
        self.assertRaises(ValueError, learners.repeat_and_validate, lambda i: self.w_star, 1,
            Dataset(np.zeros((0, 2)), []))


class TestSchedule(unittest.TestCase):

    def test_practical(self):
        schedule = LocalizationSchedule()
        self.assertEqual(schedule.c0, 0.25)
        self.assertEqual(schedule.c_gamma, 1.0)
        self.assertAlmostEqual(schedule.alpha(1), math.pi / 2)
        self.assertAlmostEqual(schedule.gamma(3), math.pi / 8)
        self.assertAlmostEqual(schedule.tau(3), math.pi / 16)
        self.assertEqual(schedule.tolerance(), 0.25 ** 4)

    def test_theory(self):
        schedule = LocalizationSchedule(mode='theory')
        self.assertEqual(schedule.c_gamma, 4.0)
        self.assertAlmostEqual(schedule.c0, (1.0 / math.pi) / 12.8)
        self.assertAlmostEqual(schedule.tau(1),
            schedule.gamma(1) * schedule.c0 * 0.48 / 3.2)

    def test_rounds(self):
        schedule = LocalizationSchedule()
        self.assertEqual(schedule.rounds(0.1), 3)
        self.assertEqual(schedule.rounds(0.5), 1)
        self.assertEqual(schedule.rounds(0.01), 6)
        for k in range(1, 6):
            self.assertAlmostEqual(schedule.alpha(k + 1), schedule.alpha(k) / 2)

    def test_describe(self):
        description = LocalizationSchedule().describe(0.1)
        self.assertEqual(description['rounds'], 3)
        self.assertEqual(len(description['tau']), 3)
        self.assertNotIn('rounds', LocalizationSchedule().describe())

    def test_validation(self):
        self.assertRaises(ValueError, LocalizationSchedule, mode='fast')
        self.assertRaises(ValueError, LocalizationSchedule, C3=0.0)
        self.assertRaises(ValueError, LocalizationSchedule().rounds, 1.0)


class TestLocalize(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})
        self.w_star = geometry.normalize([1.0, 0.0, 0.0])
        self.sampler = synthdata.DistributionSampler(MarginalSpec('gaussian', 3), self.w_star,
            synthdata.NO_NOISE, 5)
        self.w1 = geometry.rotate_towards(self.w_star, [0.0, 1.0, 0.0], 0.5)

    def test_identity_oracle(self):
        trace = []
        w = learners.localize(self.sampler, LocalizationSchedule(), IdentityOracle(), self.w1,
            0.1, 0.1, trace)
        self.assertIs(w, self.w1)
        self.assertEqual(len(trace), 3)
        self.assertListEqual([r.round for r in trace], [1, 2, 3])
        self.assertAlmostEqual(trace[-1].angle, 0.5)

    def test_perfect_oracle(self):
        trace = []
        w = learners.localize(self.sampler, LocalizationSchedule(), PerfectOracle(), self.w1,
            0.1, 0.1, trace)
        self.assertIs(w, self.w_star)
        for r in trace:
            self.assertEqual(r.angle, 0.0)
            self.assertEqual(r.objective, 0.0)

    def test_leaving_the_cone(self):
        self.assertRaises(InvariantViolation, learners.localize, self.sampler,
            LocalizationSchedule(), FlipOracle(), self.w1, 0.1, 0.1)

    def test_interfaces(self):
        self.assertTrue(IBandOracle.providedBy(learners.HingeBandOracle()))
        self.assertTrue(IBandOracle.providedBy(learners.PolyHingeBandOracle()))


class TestBandOracles(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})
        self.w_star = geometry.normalize([1.0, 0.0, 0.0])
        self.w = geometry.rotate_towards(self.w_star, [0.0, 1.0, 0.0], 0.4)

    def _sampler(self, noise=synthdata.NO_NOISE, seed=3):
        return synthdata.DistributionSampler(MarginalSpec('gaussian', 3), self.w_star, noise, seed)

    def test_hinge_moves_towards_truth(self):
        diagnostics = {}
        h = learners.band_oracle_hinge(self._sampler(), self.w, 0.8, 0.8, 0.4, quota=1000,
            iters=300, diagnostics=diagnostics)
        self.assertLessEqual(geometry.angle(h, self.w), 0.8 + 1e-6)
        self.assertLess(geometry.angle(h, self.w_star), 0.4)
        self.assertEqual(diagnostics['band_count'], 1000)
        self.assertGreaterEqual(diagnostics['raw_draws'], 1000)
        self.assertEqual(diagnostics['band_error_w_star'], 0.0)
        self.assertIn('objective', diagnostics)

    def test_hinge_tiny_cone(self):
        h = learners.band_oracle_hinge(self._sampler(), self.w, 0.5, 1e-9, 0.25, quota=200,
            iters=50)
        self.assertLessEqual(geometry.angle(h, self.w), 1e-6)

    def test_hinge_deterministic(self):
        a = learners.band_oracle_hinge(self._sampler(), self.w, 0.5, 0.5, 0.25, quota=300,
            iters=50, batch=64)
        b = learners.band_oracle_hinge(self._sampler(), self.w, 0.5, 0.5, 0.25, quota=300,
            iters=50, batch=64)
        self.assertTrue(np.array_equal(a.w, b.w))

    def test_poly_hinge(self):
        oracle = learners.PolyHingeBandOracle(degree=2, nu=0.1, quota=400, iters=200)
        h, diagnostics = oracle(self._sampler(NoiseSpec.bounded(0.1)), self.w, 0.8, 0.8, 0.4, 0.1)
        self.assertLessEqual(geometry.angle(h, self.w), 0.8 + 1e-6)
        self.assertEqual(diagnostics['band_count'], 800)
        self.assertIsNotNone(diagnostics['objective'])

    def test_delta_caps_raw_draws(self):
        cap = learners.band_draw_cap(1000, 0.1, 0.1)
        self.assertEqual(cap, synthdata.default_band_cap(1000, 0.1))
        self.assertGreater(learners.band_draw_cap(1, 0.1, 1e-30), synthdata.default_band_cap(1, 0.1))
        self.assertGreaterEqual(learners.band_draw_cap(1, 0.1, 1e-40),
            learners.band_draw_cap(1, 0.1, 1e-30))
        self.assertRaises(ValueError, learners.band_draw_cap, 10, 0.5, 0.0)
        diagnostics = {}
        learners.band_oracle_hinge(self._sampler(), self.w, 0.1, 0.5, 0.05, quota=1000,
            delta=0.1, iters=20, diagnostics=diagnostics)
        self.assertLessEqual(diagnostics['raw_draws'], cap)

    def test_poly_hinge_rate(self):
        self.assertRaises(ValueError, learners.band_oracle_poly_hinge, self._sampler(), self.w,
            0.5, 0.5, 0.25, nu=0.5)


class TestModelFiles(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})

    def test_hyperplane(self):
        h = geometry.normalize([0.1, -0.7, 0.3])
        again = learners.model_from_json(learners.model_to_json(h))
        self.assertTrue(np.array_equal(again.w, h.w))

    def test_poly_threshold(self):
        S = synthdata.generate(MarginalSpec('gaussian', 2), geometry.normalize([1.0, 0.5]),
            NoiseSpec.rcn(0.1), 200, 8)
        f = learners.train_poly_regression(S, 2)
        again = learners.model_from_json(learners.model_to_json(f))
        self.assertEqual(again.theta, f.theta)
        self.assertTrue(np.array_equal(again.predict(S.X), f.predict(S.X)))

    def test_unknown_kind(self):
        self.assertRaises(ValueError, learners.model_from_json, '{"kind": "tree"}')


if __name__ == "__main__":
    unittest.main()
