import numpy as np
from django.test import SimpleTestCase

from gmc_lab.exceptions import GridMismatchError, ParameterError
from field_sampler.grid import GridSpec
from gmc.functions import TestFunction, smooth_step


class TestFunctionTest(SimpleTestCase):

    def setUp(self):
        """Set up a one-dimensional grid"""
        self.grid = GridSpec(dim=1, points_per_dim=256)

    def test_constant(self):
        """Test the constant function covers the torus"""
        f = TestFunction.constant(self.grid, 0.25)
        self.assertEqual(f.integral, 0.25)
        self.assertEqual(f.sup_norm, 0.25)
        self.assertEqual(f.support_box, ((0.0, 1.0),))

    def test_indicator(self):
        """Test the indicator of [0.25, 0.75] counts its closed set of sites"""
        f = TestFunction.indicator(self.grid, 0.25, 0.75)
        self.assertEqual(f.integral, 129 / 256)
        self.assertEqual(f.sup_norm, 1.0)
        self.assertEqual(f.values[63], 0.0)
        self.assertEqual(f.values[64], 1.0)

    def test_smoothed_indicator(self):
        """Test the smoothed indicator is a plateau inside its support box"""
        f = TestFunction.smoothed_indicator(self.grid, 0.25, 0.75, width=0.05)
        self.assertTrue(np.all((f.values >= 0.0) & (f.values <= 1.0)))
        self.assertEqual(f.values[128], 1.0)
        self.assertEqual(f.values[64], 0.0)
        self.assertEqual(f.values[200], 0.0)
        self.assertGreater(f.integral, 0.4)
        self.assertLess(f.integral, 0.5)

    def test_plane_indicator(self):
        """Test the two-dimensional indicator is a product of intervals"""
        grid = GridSpec(dim=2, points_per_dim=64)
        f = TestFunction.indicator(grid, 0.0, 0.5)
        self.assertEqual(f.integral, (33 / 64) ** 2)

    def test_values_read_only(self):
        """Test stored values cannot be modified"""
        f = TestFunction.constant(self.grid)
        with self.assertRaises(ValueError):
            f.values[0] = 2.0

    def test_support_violation_rejected(self):
        """Test values outside the support box raise ParameterError"""
        with self.assertRaises(ParameterError):
            TestFunction(self.grid, np.ones(256), ((0.25, 0.75),))
        with self.assertRaises(ParameterError):
            TestFunction.smoothed_indicator(self.grid, 0.4, 0.5, width=0.1)
        with self.assertRaises(ParameterError):
            TestFunction(self.grid, np.zeros(256), ((0.5, 0.5),))

    def test_grid_mismatch_rejected(self):
        """Test values of another shape raise GridMismatchError"""
        with self.assertRaises(GridMismatchError):
            TestFunction(self.grid, np.zeros(128), ((0.0, 1.0),))

    def test_smooth_step(self):
        """Test the smooth step is 0, 1/2 and 1 at its anchors"""
        np.testing.assert_allclose(smooth_step([-1.0, 0.0, 0.5, 1.0, 2.0]), [0.0, 0.0, 0.5, 1.0, 1.0])
