import math

import numpy as np
from django.test import SimpleTestCase

from gmc_lab.exceptions import GridMismatchError, ParameterError
from field_sampler.grid import GridSpec
from field_sampler.regularization import mollified_covariance_grid
from gmc.functions import TestFunction
from gmc.moments import (
    ComplexL2,
    Cross,
    Mean,
    Second,
    autocorrelation,
    cauchy_gap_oracle,
    moment_oracle,
)
from kernels.seed import FieldParams, build_seed


class MomentOracleTest(SimpleTestCase):

    def setUp(self):
        """Set up a grid, a test function and a constant covariance"""
        self.grid = GridSpec(dim=1, points_per_dim=64)
        self.f = TestFunction.indicator(self.grid, 0.25, 0.75)

    def test_mean(self):
        """Test the mean oracle is int f at k = 0 and zero beyond"""
        quarter = TestFunction.constant(self.grid, 0.25)
        self.assertEqual(moment_oracle(Mean(0), quarter, 0.7), 0.25)
        self.assertEqual(moment_oracle(Mean(2), quarter, 0.7), 0)

    def test_second_moment_constant_covariance(self):
        """Test gamma = 0 with a constant covariance gives k! c^k (int f)^2"""
        cov = np.full(self.grid.shape, 0.6)
        for k in range(4):
            value = moment_oracle(Second(k), self.f, 0.0, cov)
            self.assertAlmostEqual(value.real, math.factorial(k) * 0.6 ** k * self.f.integral ** 2, places=12)
            self.assertAlmostEqual(value.imag, 0.0, places=12)

    def test_second_moment_pairing(self):
        """Test Second pairs gamma with itself by default and with its conjugate on request"""
        c, mass = 0.6, self.f.integral
        gamma = 0.3 + 0.4j
        cov = np.full(self.grid.shape, c)
        plain = moment_oracle(Second(1), self.f, gamma, cov)
        expected = mass ** 2 * (c + gamma ** 2 * c ** 2) * np.exp(gamma ** 2 * c)
        self.assertAlmostEqual(plain, expected, places=12)
        conjugated = moment_oracle(Second(1, conjugate=True), self.f, gamma, cov)
        self.assertAlmostEqual(conjugated, mass ** 2 * (c + 0.25 * c ** 2) * math.exp(0.25 * c), places=12)
        self.assertGreater(abs(plain - conjugated), 1e-3)
        self.assertEqual(moment_oracle(Cross(1, 2, conjugate=True), self.f, 0.4, cov),
                         moment_oracle(Cross(1, 2), self.f, 0.4, cov))

    def test_autocorrelation(self):
        """Test the FFT autocorrelation at zero offset is the sum of squares"""
        self.assertAlmostEqual(autocorrelation(self.f)[0], float(np.sum(self.f.values ** 2)))
        self.assertAlmostEqual(autocorrelation(self.f).sum(), float(self.f.values.sum()) ** 2)

    def test_cross_symmetry(self):
        """Test Cross(j, k) equals Cross(k, j) for real gamma"""
        cov = np.exp(-np.arange(64) / 8.0)
        cov = 0.5 * (cov + np.roll(cov[::-1], 1))
        first = moment_oracle(Cross(1, 2), self.f, 0.4, cov)
        second = moment_oracle(Cross(2, 1), self.f, 0.4, cov)
        self.assertAlmostEqual(first, second, places=12)
        self.assertAlmostEqual(moment_oracle(Cross(2, 2), self.f, 0.4, cov), moment_oracle(Second(2), self.f, 0.4, cov))

    def test_complex_l2_grows_as_eps_shrinks(self):
        """Test the L2 oracle for gamma' = 0.9i increases along the epsilon schedule"""
        params = FieldParams(dim=1, alpha=1.0, frak_a=0.5, seed=build_seed(1, 4096))
        grid = GridSpec(dim=1, points_per_dim=256)
        f = TestFunction.smoothed_indicator(grid, 0.25, 0.75)
        values = []
        for n in (2, 3, 4):
            eps = math.exp(-n)
            cov = mollified_covariance_grid(params, grid, 6.0, 0.25, eps, eps)
            values.append(moment_oracle(ComplexL2(0.9j), f, 0.0, cov).real)
        self.assertTrue(all(np.isfinite(values)))
        self.assertLess(values[0], values[1])
        self.assertLess(values[1], values[2])

    def test_covariance_required(self):
        """Test second moments without a covariance grid raise ParameterError"""
        with self.assertRaises(ParameterError):
            moment_oracle(Second(1), self.f, 0.5)
        with self.assertRaises(ParameterError):
            moment_oracle('second', self.f, 0.5, np.zeros(64))

    def test_grid_guard(self):
        """Test covariance grids of the wrong shape or above 512^2 sites are rejected"""
        with self.assertRaises(GridMismatchError):
            moment_oracle(Second(1), self.f, 0.5, np.zeros(128))
        big = GridSpec(dim=2, points_per_dim=1024)
        f = TestFunction.constant(big)
        with self.assertRaises(ParameterError):
            moment_oracle(Second(0), f, 0.5, np.zeros(big.shape))


class CauchyGapTest(SimpleTestCase):

    def setUp(self):
        """Set up mollified covariances along an epsilon schedule"""
        self.params = FieldParams(dim=1, alpha=1.0, frak_a=0.5, seed=build_seed(1, 4096))
        self.grid = GridSpec(dim=1, points_per_dim=256)
        self.f = TestFunction.smoothed_indicator(self.grid, 0.25, 0.75)

    def cov(self, eps1, eps2):
        return mollified_covariance_grid(self.params, self.grid, 6.0, 0.25, eps1, eps2)

    def gap(self, eps1, eps2, gamma=0.5):
        return cauchy_gap_oracle(
            self.f, gamma, self.cov(eps1, eps1), self.cov(eps1, eps2), self.cov(eps2, eps2)
        )

    def test_identical_regularizations(self):
        """Test the gap between a regularization and itself vanishes"""
        self.assertAlmostEqual(self.gap(math.exp(-3), math.exp(-3)), 0.0, places=12)

    def test_gap_decreases_along_schedule(self):
        """Test the L2 gap shrinks as both epsilons descend in the L2 phase"""
        gaps = [self.gap(math.exp(-n), math.exp(-n - 1)) for n in (2, 3)]
        self.assertGreater(gaps[0], 0.0)
        self.assertLess(gaps[1], gaps[0])
