import math
import unittest

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from halfspace.learning import geometry, log
from halfspace.learning.errors import DimensionMismatch, ZeroVector
from halfspace.learning.geometry import ConeCap, Hyperplane


def unit_vectors(d):
    coords = st.lists(st.floats(-10, 10, allow_nan=False), min_size=d, max_size=d)
    return coords.filter(lambda c: np.linalg.norm(c) > 1e-3).map(geometry.normalize)


class TestHyperplane(unittest.TestCase):

    def setUp(self):
        log.init({'log.levels': ['ERROR']})

    def test_normalize(self):
        self.assertTrue(np.allclose(geometry.normalize([3, 4]).w, [0.6, 0.8]))
        self.assertTrue(np.array_equal(geometry.normalize([1, 0, 0]).w, [1.0, 0.0, 0.0]))
        self.assertRaises(ZeroVector, geometry.normalize, [0, 0])

    def test_not_unit(self):
        self.assertRaises(ValueError, Hyperplane, [1.0, 1.0])
        self.assertRaises(ValueError, Hyperplane, [float('nan'), 1.0])

    def test_read_only(self):
        h = Hyperplane([1.0, 0.0])
        with self.assertRaises(ValueError):
            h.w[0] = 0.5

    def test_describe(self):
        self.assertEqual(Hyperplane([0.0, 1.0]).describe(),
            {'kind': 'halfspace', 'd': 2, 'w': [0.0, 1.0]})

    def test_classify(self):
        e1 = Hyperplane([1.0, 0.0])
        self.assertEqual(geometry.classify(e1, [2, 5]), 1)
        self.assertEqual(geometry.classify(e1, [-0.1, 9]), -1)
        # tie rule
        self.assertEqual(geometry.classify(e1, [0, 3]), 1)
        self.assertRaises(DimensionMismatch, geometry.classify, e1, [1, 2, 3])

    def test_predict(self):
        e1 = Hyperplane([1.0, 0.0])
        self.assertListEqual(e1.predict([[1, 0], [-1, 0], [0, 1]]).tolist(), [1, -1, 1])
        self.assertListEqual((-e1).predict([[1, 0]]).tolist(), [-1])

    @given(unit_vectors(4), st.lists(st.floats(-5, 5), min_size=4, max_size=4),
        st.floats(1e-3, 1e3))
    def test_classify_scale_invariant(self, h, x, c):
        x = np.array(x)
        assume(abs(float(np.dot(h.w, x))) > 1e-9)
        self.assertEqual(geometry.classify(h, x), geometry.classify(h, c * x))


class TestAngle(unittest.TestCase):

    def test_examples(self):
        e1, e2 = Hyperplane([1.0, 0.0]), Hyperplane([0.0, 1.0])
        self.assertEqual(geometry.angle(e1, e1), 0.0)
        self.assertAlmostEqual(geometry.angle(e1, e2), math.pi / 2)
        self.assertAlmostEqual(geometry.angle(e1, -e1), math.pi)

    def test_small_angles(self):
        w = Hyperplane([1.0, 0.0, 0.0])
        v = geometry.rotate_towards(w, [0.0, 1.0, 0.0], 1e-9)
        self.assertAlmostEqual(geometry.angle(w, v), 1e-9, delta=1e-15)

    def test_dimension_mismatch(self):
        self.assertRaises(DimensionMismatch, geometry.angle, [1.0, 0.0], [1.0, 0.0, 0.0])

    @settings(max_examples=200)
    @given(unit_vectors(3), unit_vectors(3), unit_vectors(3))
    def test_metric(self, u, v, w):
        self.assertEqual(geometry.angle(u, v), geometry.angle(v, u))
        self.assertLessEqual(geometry.angle(u, w),
            geometry.angle(u, v) + geometry.angle(v, w) + 1e-9)
        self.assertAlmostEqual(geometry.angle(u, u), 0.0, places=7)

    def test_triangle_random_triples(self):
        generator = np.random.default_rng(7)
        for unused in range(1000):
            u, v, w = (geometry.random_unit(generator, 5) for unused in range(3))
            self.assertLessEqual(geometry.angle(u, w),
                geometry.angle(u, v) + geometry.angle(v, w) + 1e-9)

    def test_rotate_towards(self):
        w = Hyperplane([1.0, 0.0, 0.0])
        v = geometry.rotate_towards(w, [1.0, 1.0, 0.0], 0.3)
        self.assertAlmostEqual(geometry.angle(w, v), 0.3)
        self.assertAlmostEqual(v.w[2], 0.0)

    def test_orthogonal_unit(self):
        w = geometry.normalize([0.3, -0.1, 0.9])
        u = geometry.orthogonal_unit(w)
        self.assertAlmostEqual(float(np.dot(u, w.w)), 0.0)
        self.assertAlmostEqual(float(np.linalg.norm(u)), 1.0)
        self.assertRaises(DimensionMismatch, geometry.orthogonal_unit, Hyperplane([1.0]))


class TestBand(unittest.TestCase):

    def test_examples(self):
        e1 = Hyperplane([1.0, 0.0])
        self.assertTrue(geometry.in_band([0.05, 1], e1, 0.1))
        self.assertFalse(geometry.in_band([0.2, 0], e1, 0.1))
        # closed band
        self.assertTrue(geometry.in_band([0.25, 3], e1, 0.25))

    def test_vectorized(self):
        e1 = Hyperplane([1.0, 0.0])
        mask = geometry.in_band(np.array([[0.0, 1.0], [0.5, 0.0], [-0.1, 2.0]]), e1, 0.1)
        self.assertListEqual(mask.tolist(), [True, False, True])

    def test_errors(self):
        e1 = Hyperplane([1.0, 0.0])
        self.assertRaises(ValueError, geometry.in_band, [0.0, 0.0], e1, 0.0)
        self.assertRaises(DimensionMismatch, geometry.in_band, [0.0, 0.0, 0.0], e1, 0.1)


def _grid_projection(v, cap, steps=400):
    # dense polar grid over the 2-D cap
    best = None
    phi0 = math.atan2(cap.axis.w[1], cap.axis.w[0])
    for r in np.linspace(0.0, cap.radius, steps):
        phis = phi0 + np.linspace(-cap.half_angle, cap.half_angle, steps)
        points = r * np.column_stack([np.cos(phis), np.sin(phis)])
        distance = np.linalg.norm(points - v, axis=1).min()
        best = distance if best is None else min(best, distance)
    return best


class TestConeCap(unittest.TestCase):

    def test_validation(self):
        e1 = Hyperplane([1.0, 0.0])
        self.assertRaises(ValueError, ConeCap, e1, 0.0)
        self.assertRaises(ValueError, ConeCap, e1, math.pi)
        self.assertRaises(ValueError, geometry.project_cone_cap, [1.0, 0.0], ConeCap(e1, 2.0))

    def test_examples(self):
        e1 = Hyperplane([1.0, 0.0])
        cap = ConeCap(e1, math.pi / 4)
        self.assertTrue(np.allclose(geometry.project_cone_cap([0.5, 0.0], cap), [0.5, 0.0]))
        self.assertTrue(np.allclose(geometry.project_cone_cap([2.0, 0.0], cap), [1.0, 0.0]))
        self.assertTrue(np.allclose(geometry.project_cone_cap([0.0, 1.0], cap), [0.5, 0.5]))
        self.assertTrue(np.allclose(geometry.project_cone_cap([0.0, 0.0], cap), [0.0, 0.0]))
        # behind the polar cone
        self.assertTrue(np.allclose(geometry.project_cone_cap([-1.0, 0.1], cap), [0.0, 0.0]))

    @settings(max_examples=200)
    @given(unit_vectors(3), st.floats(0.01, math.pi / 2),
        st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_membership_and_idempotence(self, axis, half_angle, v):
        cap = ConeCap(axis, half_angle)
        p = geometry.project_cone_cap(v, cap)
        self.assertTrue(cap.contains(p, 1e-6))
        self.assertTrue(np.allclose(geometry.project_cone_cap(p, cap), p, atol=1e-7))

    @settings(max_examples=100, deadline=None)
    @given(unit_vectors(2), st.floats(0.05, math.pi / 2),
        st.lists(st.floats(-2, 2), min_size=2, max_size=2))
    def test_grid_oracle(self, axis, half_angle, v):
        cap = ConeCap(axis, half_angle)
        v = np.array(v)
        p = geometry.project_cone_cap(v, cap)
        self.assertLessEqual(np.linalg.norm(p - v), _grid_projection(v, cap) + 1e-4)

    @settings(max_examples=100)
    @given(unit_vectors(3), st.floats(0.05, math.pi / 2),
        st.lists(st.floats(-2, 2), min_size=3, max_size=3),
        st.lists(st.floats(-2, 2), min_size=3, max_size=3))
    def test_closer_than_any_member(self, axis, half_angle, v, q):
        cap = ConeCap(axis, half_angle)
        v = np.array(v)
        q = geometry.project_cone_cap(q, cap)
        p = geometry.project_cone_cap(v, cap)
        self.assertLessEqual(np.linalg.norm(p - v), np.linalg.norm(q - v) + 1e-6)


if __name__ == "__main__":
    unittest.main()
